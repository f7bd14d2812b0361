//! Randomized algebraic invariants of the arithmetic layers.

use proptest::prelude::*;

use pfvsp::groebner::{buchberger, normal_form, Ideal};
use pfvsp::poly::{Monomial, Poly};
use pfvsp::unipoly::UniPoly;
use pfvsp::{Elem, FieldCtx};

fn ctx() -> FieldCtx {
    FieldCtx::prime(10007).unwrap()
}

fn arb_elem() -> impl Strategy<Value = u64> {
    0u64..10007
}

fn poly_from(nvars: usize, terms: &[(Vec<u8>, u64)]) -> Poly {
    let c = ctx();
    Poly::from_terms(
        &c,
        nvars,
        terms
            .iter()
            .map(|(exps, co)| (Monomial(exps.clone()), Elem::Fp(*co)))
            .collect(),
    )
}

fn arb_poly(nvars: usize, max_terms: usize, max_exp: u8) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u8..=max_exp, nvars),
            arb_elem(),
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| poly_from(nvars, &terms))
}

fn arb_unipoly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(arb_elem(), 0..=max_deg + 1)
        .prop_map(|coeffs| UniPoly::new(ctx(), coeffs.into_iter().map(Elem::Fp).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poly_ring_laws(a in arb_poly(3, 5, 3), b in arb_poly(3, 5, 3), c in arb_poly(3, 5, 3)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in arb_poly(3, 5, 3), b in arb_poly(3, 5, 3),
                                pt in prop::collection::vec(arb_elem(), 3)) {
        let c = ctx();
        let pt: Vec<Elem> = pt.into_iter().map(Elem::Fp).collect();
        let lhs = a.mul(&b).evaluate(&pt).unwrap();
        let rhs = c.mul(&a.evaluate(&pt).unwrap(), &b.evaluate(&pt).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lhs = a.add(&b).evaluate(&pt).unwrap();
        let rhs = c.add(&a.evaluate(&pt).unwrap(), &b.evaluate(&pt).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unipoly_division_identity(a in arb_unipoly(8), b in arb_unipoly(5)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert!(r.degree() < b.degree() || r.is_zero());
        prop_assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn unipoly_gcd_divides(a in arb_unipoly(6), b in arb_unipoly(6)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(&b);
        prop_assert!(a.divrem(&g).unwrap().1.is_zero());
        prop_assert!(b.divrem(&g).unwrap().1.is_zero());
    }

    #[test]
    fn normal_form_is_zero_on_members(gens in prop::collection::vec(arb_poly(3, 4, 2), 1..=3),
                                      h in arb_poly(3, 3, 2)) {
        let c = ctx();
        let gb = buchberger(&Ideal::new(&c, 3, gens.clone())).unwrap();
        // any combination h * g of a generator lies in the ideal
        for g in &gens {
            let member = h.mul(g);
            prop_assert!(normal_form(&member, &gb.gens).is_zero());
        }
    }

    #[test]
    fn monomial_order_respects_multiplication(a in prop::collection::vec(0u8..4, 4),
                                              b in prop::collection::vec(0u8..4, 4),
                                              m in prop::collection::vec(0u8..4, 4)) {
        let (a, b, m) = (Monomial(a), Monomial(b), Monomial(m));
        if a < b {
            prop_assert!(a.mul(&m) < b.mul(&m));
        } else if a == b {
            prop_assert_eq!(a.mul(&m), b.mul(&m));
        }
    }
}
