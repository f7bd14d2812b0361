//! Macaulay duality for cubic forms in six variables: catalecticant
//! matrices, the apolar ideal and its Hilbert function, dual socle
//! generators, power-sum certification, and the Terracini rank of a
//! 10-point configuration.

use crate::error::Error;
use crate::field::{Elem, FieldCtx};
use crate::groebner::monomials_of_degree;
use crate::linalg::{Mat, Subspace};
use crate::poly::{LinForm, Poly};
use crate::unipoly;

pub const NV: usize = 6;

/// A nonzero homogeneous cubic in six variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    pub poly: Poly,
}

impl CubicForm {
    pub fn new(poly: Poly) -> Result<CubicForm, Error> {
        if poly.nvars != NV {
            return Err(Error::DimensionMismatch("cubic must have 6 variables".into()));
        }
        if poly.is_zero() || poly.total_degree() != Some(3) || !poly.is_homogeneous() {
            return Err(Error::InvalidInput(
                "expected a nonzero homogeneous cubic".into(),
            ));
        }
        if matches!(poly.ctx.characteristic(), 2 | 3) {
            return Err(Error::InvalidInput(
                "apolarity for cubics needs characteristic 0 or > 3".into(),
            ));
        }
        Ok(CubicForm { poly })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.poly.ctx
    }
}

/// Coefficient vector of a degree-d form over the fixed monomial basis.
pub fn coeff_vector(p: &Poly, d: u32) -> Vec<Elem> {
    let ctx = &p.ctx;
    let monos = monomials_of_degree(p.nvars, d);
    let mut v = vec![ctx.zero(); monos.len()];
    for (m, c) in &p.terms {
        let i = monos.iter().position(|x| x == m).unwrap();
        v[i] = c.clone();
    }
    v
}

fn poly_from_coeffs(ctx: &FieldCtx, nvars: usize, d: u32, v: &[Elem]) -> Poly {
    let monos = monomials_of_degree(nvars, d);
    Poly::from_terms(
        ctx,
        nvars,
        monos
            .iter()
            .zip(v)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect(),
    )
}

/// Catalecticant of a cubic: the matrix of the contraction map from
/// degree-k differential operators to degree-(3-k) forms. Rows are indexed
/// by the monomials of degree 3-k, columns by the operator monomials of
/// degree k.
pub struct Catalecticant {
    pub k: u32,
    pub mat: Mat,
}

pub fn catalecticant(f: &CubicForm, k: u32) -> Result<Catalecticant, Error> {
    if !(k == 1 || k == 2) {
        return Err(Error::InvalidInput("catalecticant degree must be 1 or 2".into()));
    }
    let ctx = f.ctx();
    let ops = monomials_of_degree(NV, k);
    let row_monos = monomials_of_degree(NV, 3 - k);
    let mut mat = Mat::zero(ctx, row_monos.len(), ops.len());
    for (c, op) in ops.iter().enumerate() {
        let d = Poly::from_terms(ctx, NV, vec![(op.clone(), ctx.one())]);
        let img = d.apply_diff(&f.poly)?;
        for (m, coef) in &img.terms {
            let r = row_monos.iter().position(|x| x == m).unwrap();
            *mat.at_mut(r, c) = coef.clone();
        }
    }
    Ok(Catalecticant { k, mat })
}

/// Hilbert function of the apolar ring of a cubic, together with the
/// degree-2 part of the apolar ideal as a subspace of the 21-dimensional
/// operator space.
pub struct ApolarProfile {
    pub h: [usize; 4],
    pub perp2: Subspace,
}

pub fn apolar_profile(f: &CubicForm) -> Result<ApolarProfile, Error> {
    let c1 = catalecticant(f, 1)?;
    let c2 = catalecticant(f, 2)?;
    let h1 = c1.mat.rank();
    let h2 = c2.mat.rank();
    if h1 != h2 {
        return Err(Error::CheckFailed(format!(
            "catalecticant ranks disagree: {h1} vs {h2}"
        )));
    }
    let perp2 = Subspace::from_rows(f.ctx(), c2.mat.cols, c2.mat.kernel());
    Ok(ApolarProfile {
        h: [1, h1, h2, 1],
        perp2,
    })
}

/// The cubic annihilated by a 15-dimensional space of quadric operators:
/// kernel of a 90x56 system, required to be one-dimensional. Normalized so
/// the lead coefficient is 1.
pub fn dual_socle_generator(quadrics: &[Poly]) -> Result<CubicForm, Error> {
    if quadrics.is_empty() {
        return Err(Error::InvalidInput("no quadric operators given".into()));
    }
    let ctx = quadrics[0].ctx.clone();
    let cubics = monomials_of_degree(NV, 3);
    let lin = monomials_of_degree(NV, 1);
    let mut rows: Vec<Vec<Elem>> = vec![];
    for q in quadrics {
        // rows: each linear coordinate of q(d) applied to the unknown cubic
        let mut block = vec![vec![ctx.zero(); cubics.len()]; lin.len()];
        for (col, b) in cubics.iter().enumerate() {
            let bp = Poly::from_terms(&ctx, NV, vec![(b.clone(), ctx.one())]);
            let img = q.apply_diff(&bp)?;
            for (m, c) in &img.terms {
                let r = lin.iter().position(|x| x == m).unwrap();
                block[r][col] = c.clone();
            }
        }
        rows.extend(block);
    }
    let mat = Mat::from_rows(&ctx, rows);
    let ker = mat.kernel();
    if ker.len() != 1 {
        return Err(Error::NonGeneric(format!(
            "socle solution space has dimension {}, expected 1",
            ker.len()
        )));
    }
    let raw = poly_from_coeffs(&ctx, NV, 3, &ker[0]);
    CubicForm::new(raw.monic_poly())
}

/// Outcome of solving f = sum of lambda_i l_i^3 exactly.
pub struct PowerSum {
    pub lambdas: Vec<Elem>,
    pub exact: bool,
    pub rank: usize,
}

/// Solve for the coefficients lambda_i in f = sum lambda_i l_i^3 over a
/// common field containing both f and the points. The linear forms l_i are
/// read off the projective coordinates of the points.
pub fn powersum_certify(
    ctx: &FieldCtx,
    points: &[Vec<Elem>],
    f: &CubicForm,
) -> Result<PowerSum, Error> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no points given".into()));
    }
    let cubes: Vec<Poly> = points
        .iter()
        .map(|p| LinForm::new(ctx, p.clone()).cube())
        .collect();
    let cols: Vec<Vec<Elem>> = cubes.iter().map(|c| coeff_vector(c, 3)).collect();
    let a = Mat::from_rows(ctx, cols).transpose();
    let fv = coeff_vector(&f.poly.embed_ctx(ctx)?, 3);
    let rank = a.rank();
    match a.solve(&fv) {
        None => Ok(PowerSum {
            lambdas: vec![],
            exact: false,
            rank,
        }),
        Some(lam) => {
            // verify the residual exactly
            let mut acc = Poly::zero(ctx, NV);
            for (l, c) in cubes.iter().zip(&lam) {
                acc = acc.add(&l.scale(c));
            }
            let exact = acc == f.poly.embed_ctx(ctx)?;
            Ok(PowerSum {
                lambdas: lam,
                exact,
                rank,
            })
        }
    }
}

/// Rank of the 60x56 matrix whose rows span the tangent spaces to the
/// cubic Veronese at the cubes of the 10 points. Rank 56 means no cubic
/// hypersurface is singular along the points.
pub fn terracini_rank(ctx: &FieldCtx, points: &[Vec<Elem>]) -> Result<usize, Error> {
    let mut rows = vec![];
    for p in points {
        let l = LinForm::new(ctx, p.clone()).to_poly();
        let l2 = l.mul(&l);
        for j in 0..NV {
            let row_poly = l2.mul(&Poly::var(ctx, NV, j));
            rows.push(coeff_vector(&row_poly, 3));
        }
    }
    Ok(Mat::from_rows(ctx, rows).rank())
}

/// Number of quadratic relations among a space of quadrics: the kernel
/// dimension of the multiplication map from the symmetric square of the
/// span (120-dimensional for 15 quadrics) to the quartics (126-dimensional).
pub fn quadratic_relation_count(quadrics: &[Poly]) -> Result<usize, Error> {
    if quadrics.is_empty() {
        return Err(Error::InvalidInput("no quadrics given".into()));
    }
    let ctx = quadrics[0].ctx.clone();
    let n = quadrics.len();
    let mut rows = vec![];
    for i in 0..n {
        for j in i..n {
            let prod = quadrics[i].mul(&quadrics[j]);
            rows.push(coeff_vector(&prod, 4));
        }
    }
    let dim_sym2 = n * (n + 1) / 2;
    let rank = Mat::from_rows(&ctx, rows).rank();
    Ok(dim_sym2 - rank)
}

/// Embed projective points given over various subfields of GF(p^k) into a
/// single common extension, expanding each into its full Frobenius orbit.
/// Returns the common context together with all conjugate points.
pub fn conjugate_expand(
    base: &FieldCtx,
    points: &[(FieldCtx, Vec<Elem>)],
    max_lcm: usize,
) -> Result<(FieldCtx, Vec<Vec<Elem>>), Error> {
    fn lcm(a: usize, b: usize) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        a / gcd(a, b) * b
    }
    let p = base.characteristic();
    if p == 0 {
        // rationals: no conjugates to expand
        let pts = points.iter().map(|(_, c)| c.clone()).collect();
        return Ok((base.clone(), pts));
    }
    let mut l = 1usize;
    for (ctx, _) in points {
        l = lcm(l, ctx.degree());
    }
    if l > max_lcm {
        return Err(Error::InvalidInput(format!(
            "compositum degree {l} exceeds the cap {max_lcm}"
        )));
    }
    let big = unipoly::ext_create(p, l)?;
    let mut out = vec![];
    for (ctx, coords) in points {
        let embedded: Vec<Elem> = coords
            .iter()
            .map(|c| unipoly::embed(c, ctx, &big))
            .collect::<Result<_, _>>()?;
        let d = ctx.degree();
        let mut cur = embedded;
        for rep in 0..d {
            if rep > 0 {
                // next Frobenius conjugate over GF(p^(d/d)) ... over GF(p):
                // apply x -> x^(p) d/d... conjugates over the base subfield
                cur = cur.iter().map(|c| frob_pow(&big, c, 1)).collect();
            }
            out.push(cur.clone());
        }
    }
    Ok((big, out))
}

fn frob_pow(ctx: &FieldCtx, a: &Elem, times: usize) -> Elem {
    let mut x = a.clone();
    for _ in 0..times {
        x = ctx.frobenius(&x);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_names;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::prime(10007).unwrap()
    }

    fn parse(c: &FieldCtx, s: &str) -> CubicForm {
        CubicForm::new(Poly::parse(c, &default_names(6), s).unwrap()).unwrap()
    }

    #[test]
    fn catalecticant_monomial_ranks() {
        let c = ctx();
        let f = parse(&c, "x0^3");
        assert_eq!(catalecticant(&f, 1).unwrap().mat.rank(), 1);
        assert_eq!(catalecticant(&f, 2).unwrap().mat.rank(), 1);
        let f = parse(&c, "x0^3 + x1^3");
        assert_eq!(catalecticant(&f, 1).unwrap().mat.rank(), 2);
        assert_eq!(catalecticant(&f, 2).unwrap().mat.rank(), 2);
    }

    #[test]
    fn profile_examples() {
        let c = ctx();
        assert_eq!(apolar_profile(&parse(&c, "x0^3")).unwrap().h, [1, 1, 1, 1]);
        assert_eq!(
            apolar_profile(&parse(&c, "x0^2*x1")).unwrap().h,
            [1, 2, 2, 1]
        );
        // random cubics have the generic profile (1,6,6,1)
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..5 {
            let monos = monomials_of_degree(NV, 3);
            let p = Poly::from_terms(
                &c,
                NV,
                monos
                    .iter()
                    .map(|m| (m.clone(), c.random(&mut rng)))
                    .collect(),
            );
            if p.is_zero() {
                continue;
            }
            let f = CubicForm::new(p).unwrap();
            let prof = apolar_profile(&f).unwrap();
            assert_eq!(prof.h, [1, 6, 6, 1]);
            assert_eq!(prof.perp2.dim(), 15);
            // every operator in the kernel annihilates f
            for row in &prof.perp2.basis {
                let d = poly_from_coeffs(&c, NV, 2, row);
                assert!(d.apply_diff(&f.poly).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn socle_round_trip() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let monos = monomials_of_degree(NV, 3);
        for _ in 0..3 {
            let p = Poly::from_terms(
                &c,
                NV,
                monos
                    .iter()
                    .map(|m| (m.clone(), c.random(&mut rng)))
                    .collect(),
            )
            .monic_poly();
            let f = CubicForm::new(p).unwrap();
            let prof = apolar_profile(&f).unwrap();
            let quadrics: Vec<Poly> = prof
                .perp2
                .basis
                .iter()
                .map(|r| poly_from_coeffs(&c, NV, 2, r))
                .collect();
            let g = dual_socle_generator(&quadrics).unwrap();
            assert_eq!(g.poly, f.poly);
        }
    }

    #[test]
    fn socle_basis_invariance() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let monos = monomials_of_degree(NV, 3);
        let f = CubicForm::new(
            Poly::from_terms(
                &c,
                NV,
                monos
                    .iter()
                    .map(|m| (m.clone(), c.random(&mut rng)))
                    .collect(),
            )
            .monic_poly(),
        )
        .unwrap();
        let prof = apolar_profile(&f).unwrap();
        let quadrics: Vec<Poly> = prof
            .perp2
            .basis
            .iter()
            .map(|r| poly_from_coeffs(&c, NV, 2, r))
            .collect();
        let g1 = dual_socle_generator(&quadrics).unwrap();
        // a different basis of the same space
        let mut alt = quadrics.clone();
        let q0 = alt[0].clone();
        for q in alt.iter_mut().skip(1) {
            *q = q.add(&q0.scale(&c.from_i64(3)));
        }
        alt[0] = q0.scale(&c.from_i64(5));
        let g2 = dual_socle_generator(&alt).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn powersum_two_cubes() {
        let c = ctx();
        let f = parse(&c, "x0^3 + x1^3");
        let e0 = vec![
            c.one(),
            c.zero(),
            c.zero(),
            c.zero(),
            c.zero(),
            c.zero(),
        ];
        let mut e1 = vec![c.zero(); 6];
        e1[1] = c.one();
        let ps = powersum_certify(&c, &[e0.clone(), e1.clone()], &f).unwrap();
        assert!(ps.exact);
        assert_eq!(ps.lambdas, vec![c.one(), c.one()]);
        // x0^2 x1 is not in the span of the two cubes
        let g = parse(&c, "x0^2*x1");
        let ps = powersum_certify(&c, &[e0, e1], &g).unwrap();
        assert!(!ps.exact);
    }

    #[test]
    fn terracini_degenerate_and_generic() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pt: Vec<Elem> = (0..6).map(|_| c.random(&mut rng)).collect();
        let same: Vec<Vec<Elem>> = (0..10).map(|_| pt.clone()).collect();
        assert_eq!(terracini_rank(&c, &same).unwrap(), 6);
        let pts: Vec<Vec<Elem>> = (0..10)
            .map(|_| (0..6).map(|_| c.random(&mut rng)).collect())
            .collect();
        assert_eq!(terracini_rank(&c, &pts).unwrap(), 56);
    }

    #[test]
    fn relation_count_monomial_oracle() {
        let c = ctx();
        // the 15 monomials x_i x_j with i < j: relations are the equalities
        // (x_i x_j)(x_k x_l) = (x_i x_k)(x_j x_l) among quartics
        let mut quadrics = vec![];
        for i in 0..6 {
            for j in (i + 1)..6 {
                let q = Poly::var(&c, NV, i).mul(&Poly::var(&c, NV, j));
                quadrics.push(q);
            }
        }
        let count = quadratic_relation_count(&quadrics).unwrap();
        // independent count: 120 minus the number of distinct products
        let mut prods = std::collections::HashSet::new();
        for i in 0..15 {
            for j in i..15 {
                prods.insert(quadrics[i].mul(&quadrics[j]).to_string_with(&default_names(6)));
            }
        }
        assert_eq!(count, 120 - prods.len());
    }

    #[test]
    fn conjugate_expansion_orbits() {
        let c = FieldCtx::prime(101).unwrap();
        let k2 = unipoly::ext_create(101, 2).unwrap();
        // a point with a coordinate outside GF(101)
        let t = Elem::Ext(vec![0, 1]);
        let pt = vec![k2.one(), t.clone(), k2.zero(), k2.zero(), k2.zero(), k2.zero()];
        let rational = vec![c.one(); 6];
        let (big, pts) = conjugate_expand(
            &c,
            &[(k2.clone(), pt), (c.clone(), rational)],
            60,
        )
        .unwrap();
        assert_eq!(big.degree(), 2);
        assert_eq!(pts.len(), 3);
        // the two conjugates differ, and their second coordinates are the
        // two roots of the minimal polynomial of t
        assert_ne!(pts[0][1], pts[1][1]);
        assert_eq!(big.frobenius(&pts[0][1]), pts[1][1]);
    }
}
