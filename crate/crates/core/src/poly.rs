//! Sparse exact multivariate polynomials with the differentiation action of
//! apolarity. Terms are kept sorted in descending degrevlex, which is also
//! the order the Groebner module uses, so there is one canonical iteration
//! order everywhere.

use crate::error::Error;
use crate::field::{Elem, FieldCtx};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent vector with a fixed number of variables.
///
/// `Ord` is degrevlex: compare total degree first; on ties the monomial with
/// the smaller exponent in the *last* position where they differ is larger.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut e = vec![0u8; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(&b, &a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = self.degree();
        let db = other.degree();
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                // smaller exponent in the last differing slot wins
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial. Terms are nonzero and sorted descending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub nvars: usize,
    pub ctx: FieldCtx,
    pub terms: Vec<(Monomial, Elem)>,
}

impl Poly {
    pub fn zero(ctx: &FieldCtx, nvars: usize) -> Poly {
        Poly {
            nvars,
            ctx: ctx.clone(),
            terms: vec![],
        }
    }

    pub fn constant(ctx: &FieldCtx, nvars: usize, c: Elem) -> Poly {
        let mut p = Poly::zero(ctx, nvars);
        if !ctx.is_zero(&c) {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn var(ctx: &FieldCtx, nvars: usize, i: usize) -> Poly {
        Poly {
            nvars,
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(nvars, i), ctx.one())],
        }
    }

    pub fn from_terms(ctx: &FieldCtx, nvars: usize, terms: Vec<(Monomial, Elem)>) -> Poly {
        let mut map: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), nvars);
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = ctx.add(e.get(), &c);
                    *e.get_mut() = s;
                }
            }
        }
        let terms: Vec<_> = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !ctx.is_zero(c))
            .collect();
        Poly {
            nvars,
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, Elem)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    fn check_compat(&self, other: &Poly) -> Result<(), Error> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.ctx != other.ctx {
            return Err(Error::CtxMismatch("polynomial contexts differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_compat(other).expect("compatible polynomials");
        // merge two descending term lists
        let ctx = &self.ctx;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ctx.add(&self.terms[i].1, &other.terms[j].1);
                    if !ctx.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly {
            nvars: self.nvars,
            ctx: ctx.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ctx.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        if self.ctx.is_zero(c) {
            return Poly::zero(&self.ctx, self.nvars);
        }
        Poly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.ctx.mul(a, c)))
                .collect(),
        }
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, m: &Monomial, c: &Elem) -> Poly {
        if self.ctx.is_zero(c) {
            return Poly::zero(&self.ctx, self.nvars);
        }
        Poly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), self.ctx.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_compat(other).expect("compatible polynomials");
        let ctx = &self.ctx;
        let mut map: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ctx.mul(ca, cb);
                match map.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = ctx.add(e.get(), &c);
                        *e.get_mut() = s;
                    }
                }
            }
        }
        let terms: Vec<_> = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !ctx.is_zero(c))
            .collect();
        Poly {
            nvars: self.nvars,
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(&self.ctx, self.nvars, self.ctx.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation at a point given in the polynomial's own context
    /// (or a compatible context passed via `ctx`).
    pub fn evaluate_in(&self, ctx: &FieldCtx, pt: &[Elem]) -> Result<Elem, Error> {
        if pt.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                pt.len(),
                self.nvars
            )));
        }
        let lift: Box<dyn Fn(&Elem) -> Result<Elem, Error>> = if *ctx == self.ctx {
            Box::new(|c: &Elem| Ok(c.clone()))
        } else {
            let src = self.ctx.clone();
            let tgt = ctx.clone();
            Box::new(move |c: &Elem| crate::unipoly::embed(c, &src, &tgt))
        };
        let mut acc = ctx.zero();
        for (m, c) in &self.terms {
            let mut t = lift(c)?;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = ctx.mul(&t, &ctx.pow(&pt[i], e as u64));
                }
            }
            acc = ctx.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, pt: &[Elem]) -> Result<Elem, Error> {
        self.evaluate_in(&self.ctx.clone(), pt)
    }

    /// Pullback along the linear parametrization (t_1,...,t_d) -> sum t_j rows[j].
    /// `rows` are vectors of length `nvars`; the result lives in `rows.len()` variables.
    pub fn substitute_linear(&self, rows: &[Vec<Elem>]) -> Result<Poly, Error> {
        let d = rows.len();
        for r in rows {
            if r.len() != self.nvars {
                return Err(Error::DimensionMismatch(
                    "substitution rows must match the variable count".into(),
                ));
            }
        }
        let ctx = &self.ctx;
        // linear form for each original variable, in the d new variables
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                Poly::from_terms(
                    ctx,
                    d,
                    rows.iter()
                        .enumerate()
                        .map(|(j, r)| (Monomial::var(d, j), r[i].clone()))
                        .collect(),
                )
            })
            .collect();
        let max_exp: Vec<u8> = (0..self.nvars)
            .map(|i| self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0))
            .collect();
        // power cache per variable
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut v = vec![Poly::constant(ctx, d, ctx.one())];
            for e in 1..=max_exp[i] {
                let next = v[(e - 1) as usize].mul(&images[i]);
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = Poly::zero(ctx, d);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(ctx, d, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Apply a polynomial differential operator: monomials of `self` act on
    /// `f` by the factorial-binomial convention
    /// d^a (x^b) = a! C(b, a) x^(b-a), extended bilinearly.
    pub fn apply_diff(&self, f: &Poly) -> Result<Poly, Error> {
        self.check_compat(f)?;
        let ctx = &self.ctx;
        let p = ctx.characteristic();
        if p != 0 {
            if let Some(d) = f.total_degree() {
                if p <= d as u64 {
                    return Err(Error::InvalidInput(format!(
                        "characteristic {p} too small for differentiation in degree {d}"
                    )));
                }
            }
        }
        let mut out = Poly::zero(ctx, self.nvars);
        for (alpha, ca) in &self.terms {
            for (beta, cb) in &f.terms {
                if !alpha.divides(beta) {
                    continue;
                }
                // a! * prod C(b_i, a_i)
                let mut k: u64 = 1;
                for (&a, &b) in alpha.0.iter().zip(&beta.0) {
                    let mut fact = 1u64;
                    for t in 1..=a as u64 {
                        fact *= t;
                    }
                    k *= fact * binom(b as u64, a as u64);
                }
                let coeff = ctx.mul(&ctx.mul(ca, cb), &ctx.from_i64(k as i64));
                let m = alpha.quotient_into(beta);
                out = out.add(&Poly {
                    nvars: self.nvars,
                    ctx: ctx.clone(),
                    terms: if ctx.is_zero(&coeff) {
                        vec![]
                    } else {
                        vec![(m, coeff)]
                    },
                });
            }
        }
        Ok(out)
    }

    /// Map coefficients into another field context via an embedding.
    pub fn embed_ctx(&self, target: &FieldCtx) -> Result<Poly, Error> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), crate::unipoly::embed(c, &self.ctx, target)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(Poly {
            nvars: self.nvars,
            ctx: target.clone(),
            terms,
        })
    }

    /// Canonical text form: descending degrevlex, explicit signs, `*` between
    /// factors, `^` for exponents, given variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = coeff_display(&self.ctx, c);
            if idx == 0 {
                if sign == '-' {
                    s.push('-');
                }
            } else {
                s.push(' ');
                s.push(sign);
                s.push(' ');
            }
            let mut factors: Vec<String> = vec![];
            if mag != "1" || m.degree() == 0 {
                factors.push(mag);
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}

impl Poly {
    /// Parse a polynomial in the canonical text form (signs between terms,
    /// `*` between factors, `^` for exponents, integer coefficients).
    pub fn parse(ctx: &FieldCtx, names: &[String], input: &str) -> Result<Poly, Error> {
        let n = names.len();
        let name_index: std::collections::HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        // normalize so signs become separate tokens
        let spaced = input.replace('+', " + ").replace('-', " - ");
        let mut terms: Vec<(Monomial, Elem)> = vec![];
        let mut sign = 1i64;
        let mut pending_sign = false;
        for tok in spaced.split_whitespace() {
            match tok {
                "+" => {
                    sign = 1;
                    pending_sign = true;
                }
                "-" => {
                    sign = -1;
                    pending_sign = true;
                }
                term => {
                    if !pending_sign {
                        sign = 1;
                    }
                    pending_sign = false;
                    let mut coeff = ctx.from_i64(sign);
                    let mut mono = Monomial::one(n);
                    for factor in term.split('*') {
                        if factor.is_empty() {
                            continue;
                        }
                        if let Ok(k) = factor.parse::<i64>() {
                            coeff = ctx.mul(&coeff, &ctx.from_i64(k));
                            continue;
                        }
                        let (base, exp) = match factor.split_once('^') {
                            Some((b, e)) => (
                                b,
                                e.parse::<u8>()
                                    .map_err(|_| Error::Parse(format!("bad exponent in {factor}")))?,
                            ),
                            None => (factor, 1),
                        };
                        let &vi = name_index
                            .get(base)
                            .ok_or_else(|| Error::Parse(format!("unknown variable {base}")))?;
                        mono.0[vi] += exp;
                    }
                    terms.push((mono, coeff));
                }
            }
        }
        Ok(Poly::from_terms(ctx, n, terms))
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Split a coefficient into a display sign and magnitude string. Finite-field
/// residues in the upper half display as negatives so tables read like the
/// characteristic-zero ones.
fn coeff_display(ctx: &FieldCtx, c: &Elem) -> (char, String) {
    match (ctx, c) {
        (FieldCtx::Rationals, Elem::Rat(r)) => {
            use num::Signed;
            if r.is_negative() {
                ('-', ctx.display(&ctx.neg(c)))
            } else {
                ('+', ctx.display(c))
            }
        }
        (FieldCtx::Prime(p), Elem::Fp(x)) => {
            if *x > p / 2 {
                ('-', format!("{}", p - x))
            } else {
                ('+', format!("{x}"))
            }
        }
        _ => ('+', ctx.display(c)),
    }
}

/// Default variable names x0..x{n-1}.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// A linear form in `n` variables, stored as its coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinForm {
    pub ctx: FieldCtx,
    pub coeffs: Vec<Elem>,
}

impl LinForm {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<Elem>) -> LinForm {
        LinForm {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ctx.is_zero(c))
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.coeffs.len();
        Poly::from_terms(
            &self.ctx,
            n,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone()))
                .collect(),
        )
    }

    /// The exact cube of the linear form.
    pub fn cube(&self) -> Poly {
        let p = self.to_poly();
        p.mul(&p).mul(&p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::prime(10007).unwrap()
    }

    fn random_poly<R: Rng>(ctx: &FieldCtx, n: usize, deg: u8, rng: &mut R) -> Poly {
        let mut terms = vec![];
        for _ in 0..8 {
            let mut e = vec![0u8; n];
            let mut left = deg;
            for slot in e.iter_mut() {
                let take = rng.gen_range(0..=left);
                *slot = take;
                left -= take;
                if left == 0 {
                    break;
                }
            }
            terms.push((Monomial(e), ctx.random(rng)));
        }
        Poly::from_terms(ctx, n, terms)
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx();
        let x0 = Poly::var(&c, 2, 0);
        let x1 = Poly::var(&c, 2, 1);
        let prod = x0.add(&x1).mul(&x0.sub(&x1));
        assert_eq!(prod, x0.mul(&x0).sub(&x1.mul(&x1)));
    }

    #[test]
    fn add_zero_identity() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_poly(&c, 3, 3, &mut rng);
        assert_eq!(a.add(&Poly::zero(&c, 3)), a);
    }

    #[test]
    fn square_of_sum() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = random_poly(&c, 3, 2, &mut rng);
            let b = random_poly(&c, 3, 2, &mut rng);
            let lhs = a.add(&b).pow(2);
            let two = Poly::constant(&c, 3, c.from_i64(2));
            let rhs = a.pow(2).add(&two.mul(&a).mul(&b)).add(&b.pow(2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluate_product() {
        let c = ctx();
        let p = Poly::var(&c, 2, 0).mul(&Poly::var(&c, 2, 1));
        let v = p.evaluate(&[c.from_i64(2), c.from_i64(3)]).unwrap();
        assert_eq!(v, c.from_i64(6));
    }

    #[test]
    fn evaluate_homogeneity() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // homogeneous cubic: scaling the point scales the value by the cube
        let l = LinForm::new(&c, (0..4).map(|_| c.random(&mut rng)).collect());
        let f = l.cube();
        for _ in 0..10 {
            let pt: Vec<Elem> = (0..4).map(|_| c.random(&mut rng)).collect();
            let s = c.random_nonzero(&mut rng);
            let scaled: Vec<Elem> = pt.iter().map(|x| c.mul(x, &s)).collect();
            let v = f.evaluate(&pt).unwrap();
            let vs = f.evaluate(&scaled).unwrap();
            assert_eq!(vs, c.mul(&v, &c.pow(&s, 3)));
        }
    }

    #[test]
    fn restrict_simple() {
        let c = ctx();
        // x0^2 restricted to span{(1,0,0)} is t1^2
        let x0sq = Poly::var(&c, 3, 0).pow(2);
        let basis = vec![vec![c.one(), c.zero(), c.zero()]];
        let r = x0sq.substitute_linear(&basis).unwrap();
        assert_eq!(r, Poly::var(&c, 1, 0).pow(2));
        // x0*x1 restricted to span{(1,1,0)} is t1^2
        let x0x1 = Poly::var(&c, 3, 0).mul(&Poly::var(&c, 3, 1));
        let basis = vec![vec![c.one(), c.one(), c.zero()]];
        let r = x0x1.substitute_linear(&basis).unwrap();
        assert_eq!(r, Poly::var(&c, 1, 0).pow(2));
    }

    #[test]
    fn restrict_commutes_with_product() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = random_poly(&c, 4, 2, &mut rng);
            let b = random_poly(&c, 4, 2, &mut rng);
            let rows: Vec<Vec<Elem>> = (0..2)
                .map(|_| (0..4).map(|_| c.random(&mut rng)).collect())
                .collect();
            let lhs = a.mul(&b).substitute_linear(&rows).unwrap();
            let rhs = a
                .substitute_linear(&rows)
                .unwrap()
                .mul(&b.substitute_linear(&rows).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn diff_convention() {
        let c = ctx();
        // d0^2 (x0^3) = 2! * C(3,2) * x0 = 6 x0
        let d = Poly::var(&c, 1, 0).pow(2);
        let f = Poly::var(&c, 1, 0).pow(3);
        let r = d.apply_diff(&f).unwrap();
        assert_eq!(r, Poly::var(&c, 1, 0).scale(&c.from_i64(6)));
        // d0 d1 (x0 x1 x2) = x2
        let d = Poly::var(&c, 3, 0).mul(&Poly::var(&c, 3, 1));
        let f = Poly::var(&c, 3, 0)
            .mul(&Poly::var(&c, 3, 1))
            .mul(&Poly::var(&c, 3, 2));
        assert_eq!(d.apply_diff(&f).unwrap(), Poly::var(&c, 3, 2));
        // d0 (x1^3) = 0
        let d = Poly::var(&c, 2, 0);
        let f = Poly::var(&c, 2, 1).pow(3);
        assert!(d.apply_diff(&f).unwrap().is_zero());
    }

    #[test]
    fn cube_binomial() {
        let c = ctx();
        let l = LinForm::new(&c, vec![c.one(), c.one()]);
        let f = l.cube();
        // x0^3 + 3x0^2x1 + 3x0x1^2 + x1^3
        let x0 = Poly::var(&c, 2, 0);
        let x1 = Poly::var(&c, 2, 1);
        let three = Poly::constant(&c, 2, c.from_i64(3));
        let expect = x0
            .pow(3)
            .add(&three.mul(&x0.pow(2)).mul(&x1))
            .add(&three.mul(&x0).mul(&x1.pow(2)))
            .add(&x1.pow(3));
        assert_eq!(f, expect);
    }

    #[test]
    fn diff_cube_chain_rule() {
        // d_j (l^3) = 3 l_j l^2
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let l = LinForm::new(&c, (0..4).map(|_| c.random(&mut rng)).collect());
            let cube = l.cube();
            let sq = l.to_poly().pow(2);
            for j in 0..4 {
                let d = Poly::var(&c, 4, j);
                let got = d.apply_diff(&cube).unwrap();
                let want = sq.scale(&c.mul(&c.from_i64(3), &l.coeffs[j]));
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn diff_pairing_duality_degree3() {
        // P_a^3(f) = 3! f(a) for any cubic f
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let a: Vec<Elem> = (0..4).map(|_| c.random(&mut rng)).collect();
            let pa = LinForm::new(&c, a.clone()).cube();
            let f = {
                let l = LinForm::new(&c, (0..4).map(|_| c.random(&mut rng)).collect());
                let m = LinForm::new(&c, (0..4).map(|_| c.random(&mut rng)).collect());
                l.cube().add(&m.cube())
            };
            let lhs = pa.apply_diff(&f).unwrap();
            let fa = f.evaluate(&a).unwrap();
            let rhs = Poly::constant(&c, 4, c.mul(&c.from_i64(6), &fa));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn diff_composes() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let d1 = random_poly(&c, 3, 1, &mut rng);
            let d2 = random_poly(&c, 3, 1, &mut rng);
            let f = random_poly(&c, 3, 4, &mut rng);
            let lhs = d1.mul(&d2).apply_diff(&f).unwrap();
            let rhs = d1.apply_diff(&d2.apply_diff(&f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ctx_mismatch_rejected() {
        let a = Poly::var(&ctx(), 2, 0);
        let b = Poly::var(&FieldCtx::Rationals, 2, 0);
        assert!(a.check_compat(&b).is_err());
    }

    #[test]
    fn canonical_text() {
        let c = FieldCtx::Rationals;
        let x0 = Poly::var(&c, 2, 0);
        let x1 = Poly::var(&c, 2, 1);
        let p = x0.pow(2).sub(&x1.pow(2).scale(&c.from_i64(3)));
        assert_eq!(p.to_string_with(&default_names(2)), "x0^2 - 3*x1^2");
    }
}
