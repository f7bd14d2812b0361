//! Univariate polynomials over an exact field: division, gcd, modular
//! exponentiation, irreducibility testing, and factorization over prime
//! fields by squarefree / distinct-degree / equal-degree (Cantor-Zassenhaus)
//! splitting. Also builds extension contexts and the embeddings between them.

use crate::error::Error;
use crate::field::{Elem, ExtCtx, FieldCtx};
use num::bigint::BigUint;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Dense univariate polynomial, little-endian coefficients, trimmed so the
/// leading coefficient is nonzero (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub ctx: FieldCtx,
    pub coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(ctx: FieldCtx, mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().map_or(false, |c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { ctx, coeffs }
    }

    pub fn zero(ctx: &FieldCtx) -> UniPoly {
        UniPoly {
            ctx: ctx.clone(),
            coeffs: vec![],
        }
    }

    pub fn constant(ctx: &FieldCtx, c: Elem) -> UniPoly {
        UniPoly::new(ctx.clone(), vec![c])
    }

    pub fn x(ctx: &FieldCtx) -> UniPoly {
        UniPoly::new(ctx.clone(), vec![ctx.zero(), ctx.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let ctx = &self.ctx;
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero());
                let b = other.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero());
                ctx.add(&a, &b)
            })
            .collect();
        UniPoly::new(ctx.clone(), coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ctx.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> UniPoly {
        UniPoly::new(
            self.ctx.clone(),
            self.coeffs.iter().map(|a| self.ctx.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        let mut coeffs = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(&coeffs[i + j], &ctx.mul(a, b));
            }
        }
        UniPoly::new(ctx.clone(), coeffs)
    }

    pub fn divrem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), Error> {
        let ctx = &self.ctx;
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.lead().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![ctx.zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let shift = rem.len() - 1 - d;
            let c = ctx.mul(rem.last().unwrap(), &lead_inv);
            if !ctx.is_zero(&c) {
                for (j, dj) in divisor.coeffs.iter().enumerate() {
                    let t = ctx.mul(&c, dj);
                    rem[shift + j] = ctx.sub(&rem[shift + j], &t);
                }
                quo[shift] = c;
            }
            debug_assert!(ctx.is_zero(rem.last().unwrap()));
            rem.pop();
        }
        Ok((
            UniPoly::new(ctx.clone(), quo),
            UniPoly::new(ctx.clone(), rem),
        ))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly, Error> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&self.ctx.inv(l).expect("nonzero lead")),
        }
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| ctx.mul(c, &ctx.from_i64(i as i64)))
            .collect();
        UniPoly::new(ctx.clone(), coeffs)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = ctx.add(&ctx.mul(&acc, x), c);
        }
        acc
    }

    /// self^exp mod m, with a big-integer exponent.
    pub fn powmod_big(&self, exp: &BigUint, m: &UniPoly) -> Result<UniPoly, Error> {
        let mut acc = UniPoly::constant(&self.ctx, self.ctx.one());
        let mut base = self.rem(m)?;
        let mut e = exp.clone();
        while !e.is_zero() {
            if (&e % 2u32) == BigUint::one() {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn powmod(&self, exp: u64, m: &UniPoly) -> Result<UniPoly, Error> {
        self.powmod_big(&BigUint::from(exp), m)
    }

    /// Map coefficients into another context via f (e.g. GF(p) -> GF(p^k)).
    pub fn map_ctx(&self, target: &FieldCtx, f: impl Fn(&Elem) -> Elem) -> UniPoly {
        UniPoly::new(target.clone(), self.coeffs.iter().map(f).collect())
    }
}

fn require_prime_ctx(ctx: &FieldCtx) -> Result<u64, Error> {
    match ctx {
        FieldCtx::Prime(p) => Ok(*p),
        _ => Err(Error::InvalidInput(
            "operation requires a prime-field context".into(),
        )),
    }
}

/// x^(p^e) mod f over GF(p), by iterated Frobenius.
fn frobenius_power(f: &UniPoly, p: u64, e: usize) -> Result<UniPoly, Error> {
    let mut r = UniPoly::x(&f.ctx).powmod(p, f)?;
    for _ in 1..e {
        // compose: r(x) -> r(r_prev) mod f is wrong; we need x^(p^(i+1)) = (x^(p^i))^p
        r = r.powmod(p, f)?;
    }
    Ok(r)
}

/// Test irreducibility of a monic polynomial over GF(p):
/// x^(p^k) = x mod f, and gcd(x^(p^(k/q)) - x, f) = 1 for prime q | k.
pub fn is_irreducible(f: &UniPoly) -> Result<bool, Error> {
    let p = require_prime_ctx(&f.ctx)?;
    let k = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(k) => k,
    };
    let x = UniPoly::x(&f.ctx);
    let xpk = frobenius_power(f, p, k)?;
    if xpk.sub(&x).rem(f)?.degree().is_some() {
        return Ok(false);
    }
    let mut k_rem = k;
    let mut q = 2;
    let mut prime_divisors = vec![];
    while q * q <= k_rem {
        if k_rem % q == 0 {
            prime_divisors.push(q);
            while k_rem % q == 0 {
                k_rem /= q;
            }
        }
        q += 1;
    }
    if k_rem > 1 {
        prime_divisors.push(k_rem);
    }
    for q in prime_divisors {
        let g = frobenius_power(f, p, k / q)?.sub(&x).gcd(f);
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Squarefree decomposition over GF(p), handling p-th power parts.
fn squarefree_decompose(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>, Error> {
    let p = require_prime_ctx(&f.ctx)? as usize;
    let mut out: Vec<(UniPoly, usize)> = vec![];
    let mut stack = vec![(f.monic(), 1usize)];
    while let Some((g, mult)) = stack.pop() {
        if g.degree() == Some(0) {
            continue;
        }
        let gp = g.derivative();
        if gp.is_zero() {
            // g = h(x^p); take the p-th root (coefficient-wise identity on GF(p))
            let ctx = &g.ctx;
            let mut coeffs = vec![];
            for (i, c) in g.coeffs.iter().enumerate() {
                if i % p == 0 {
                    coeffs.push(c.clone());
                } else if !ctx.is_zero(c) {
                    return Err(Error::InvalidInput("inconsistent p-th power".into()));
                }
            }
            stack.push((UniPoly::new(ctx.clone(), coeffs), mult * p));
            continue;
        }
        let mut c = g.gcd(&gp);
        let mut w = g.divrem(&c)?.0;
        let mut i = 1usize;
        while w.degree() != Some(0) {
            let y = w.gcd(&c);
            let part = w.divrem(&y)?.0;
            if part.degree().map_or(false, |d| d > 0) {
                out.push((part.monic(), mult * i));
            }
            c = c.divrem(&y)?.0;
            w = y;
            i += 1;
        }
        if c.degree().map_or(false, |d| d > 0) {
            stack.push((c, mult * p));
        }
    }
    Ok(out)
}

/// Distinct-degree decomposition of a squarefree monic polynomial.
fn distinct_degree(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>, Error> {
    let p = require_prime_ctx(&f.ctx)?;
    let x = UniPoly::x(&f.ctx);
    let mut out = vec![];
    let mut g = f.clone();
    let mut h = x.clone();
    let mut d = 0usize;
    while g.degree().map_or(false, |dg| dg > 0) {
        d += 1;
        if 2 * d > g.degree().unwrap() {
            out.push((g.clone(), g.degree().unwrap()));
            break;
        }
        h = h.powmod(p, &g)?;
        let factor = h.sub(&x).gcd(&g);
        if factor.degree().map_or(false, |df| df > 0) {
            out.push((factor.clone(), d));
            g = g.divrem(&factor)?.0;
            h = h.rem(&g)?;
        }
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting of a product of irreducibles
/// all of degree d.
fn equal_degree_split<R: Rng>(
    f: &UniPoly,
    d: usize,
    rng: &mut R,
) -> Result<Vec<UniPoly>, Error> {
    let p = require_prime_ctx(&f.ctx)?;
    let n = f.degree().unwrap();
    if n == d {
        return Ok(vec![f.monic()]);
    }
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let coeffs: Vec<Elem> = (0..n).map(|_| f.ctx.random(rng)).collect();
        let a = UniPoly::new(f.ctx.clone(), coeffs);
        if a.degree().map_or(true, |da| da == 0) {
            continue;
        }
        let b = a.powmod_big(&exp, f)?;
        let one = UniPoly::constant(&f.ctx, f.ctx.one());
        let g = b.sub(&one).gcd(f);
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < n {
                let rest = f.divrem(&g)?.0;
                let mut out = equal_degree_split(&g, d, rng)?;
                out.extend(equal_degree_split(&rest, d, rng)?);
                return Ok(out);
            }
        }
    }
}

/// Full factorization over a prime field: monic irreducible factors with
/// multiplicities; the product times the leading unit re-multiplies to f.
pub fn factor_univariate(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>, Error> {
    require_prime_ctx(&f.ctx)?;
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    if f.degree() == Some(0) {
        return Ok(vec![]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let mut out = vec![];
    for (sqfree, mult) in squarefree_decompose(f)? {
        for (prod, d) in distinct_degree(&sqfree)? {
            for irred in equal_degree_split(&prod, d, &mut rng)? {
                out.push((irred, mult));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.coeffs
            .len()
            .cmp(&b.0.coeffs.len())
            .then_with(|| format!("{:?}", a.0.coeffs).cmp(&format!("{:?}", b.0.coeffs)))
    });
    Ok(out)
}

/// Build GF(p^k): k = 1 gives the prime context, otherwise a randomized
/// search for a monic irreducible modulus of degree k (seeded, so the
/// modulus is deterministic per (p, k)).
pub fn ext_create(p: u64, k: usize) -> Result<FieldCtx, Error> {
    let base = FieldCtx::prime(p)?;
    if k == 0 {
        return Err(Error::InvalidInput("extension degree must be >= 1".into()));
    }
    if k == 1 {
        return Ok(base);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ ((k as u64) << 32) ^ 0x6f2a_91c3);
    loop {
        let mut coeffs: Vec<Elem> = (0..k).map(|_| base.random(&mut rng)).collect();
        coeffs.push(base.one());
        let f = UniPoly::new(base.clone(), coeffs);
        if is_irreducible(&f)? {
            let modulus = f
                .coeffs
                .iter()
                .map(|c| match c {
                    Elem::Fp(x) => *x,
                    _ => unreachable!(),
                })
                .collect();
            return Ok(FieldCtx::Ext(Arc::new(ExtCtx {
                p,
                modulus,
                degree: k,
            })));
        }
    }
}

/// Extension context whose modulus is a given monic irreducible polynomial
/// over GF(p) (used by the zero-dimensional solver: the characteristic
/// polynomial factor itself is the modulus, so the eigenvalue is `t`).
pub fn ext_from_modulus(f: &UniPoly) -> Result<FieldCtx, Error> {
    let p = require_prime_ctx(&f.ctx)?;
    let k = f.degree().ok_or(Error::DivisionByZero)?;
    if k == 1 {
        return FieldCtx::prime(p);
    }
    let monic = f.monic();
    if !is_irreducible(&monic)? {
        return Err(Error::InvalidInput("modulus must be irreducible".into()));
    }
    let modulus = monic
        .coeffs
        .iter()
        .map(|c| match c {
            Elem::Fp(x) => *x,
            _ => unreachable!(),
        })
        .collect();
    Ok(FieldCtx::Ext(Arc::new(ExtCtx {
        p,
        modulus,
        degree: k,
    })))
}

/// Find one root of a polynomial with GF(p) coefficients inside a finite
/// context E (which must contain the splitting field of the relevant factor).
fn find_root_in(f_base: &UniPoly, target: &FieldCtx) -> Result<Elem, Error> {
    let f = f_base.map_ctx(target, |c| {
        let Elem::Fp(x) = c else { unreachable!() };
        target.from_i64(*x as i64)
    });
    let (p, k) = match target {
        FieldCtx::Prime(p) => (*p, 1usize),
        FieldCtx::Ext(e) => (e.p, e.degree),
        FieldCtx::Rationals => {
            return Err(Error::InvalidInput("root search needs a finite field".into()))
        }
    };
    let q = BigUint::from(p).pow(k as u32);
    // isolate the product of linear factors over E: gcd(x^q - x, f)
    let x = UniPoly::x(target);
    let xq = x.powmod_big(&q, &f)?;
    let mut lin = xq.sub(&x).gcd(&f);
    if lin.degree().map_or(true, |d| d == 0) {
        return Err(Error::InvalidInput(
            "polynomial has no root in the target field".into(),
        ));
    }
    // Cantor-Zassenhaus down to a single linear factor (deterministic seed)
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    let exp = (&q - BigUint::one()) / BigUint::from(2u32);
    while lin.degree() != Some(1) {
        let shift = target.random(&mut rng);
        let a = UniPoly::new(
            target.clone(),
            vec![shift, target.one()],
        );
        let b = a.powmod_big(&exp, &lin)?;
        let one = UniPoly::constant(target, target.one());
        let g = b.sub(&one).gcd(&lin);
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < lin.degree().unwrap() {
                lin = if dg <= lin.degree().unwrap() / 2 {
                    g
                } else {
                    lin.divrem(&g)?.0
                };
            }
        }
    }
    let lin = lin.monic();
    Ok(target.neg(&lin.coeffs[0]))
}

static EMBED_CACHE: OnceLock<Mutex<HashMap<(u64, Vec<u64>, Vec<u64>), Elem>>> = OnceLock::new();

/// Embed an element of GF(p^j) (or GF(p)) into GF(p^k) with j | k.
/// The image of the source generator is computed once per (source, target)
/// pair and cached, so repeated embeddings are consistent.
pub fn embed(a: &Elem, source: &FieldCtx, target: &FieldCtx) -> Result<Elem, Error> {
    if source == target {
        return Ok(a.clone());
    }
    let (p_t, k) = match target {
        FieldCtx::Prime(p) => (*p, 1usize),
        FieldCtx::Ext(e) => (e.p, e.degree),
        FieldCtx::Rationals => {
            return Err(Error::InvalidInput("cannot embed into the rationals".into()))
        }
    };
    match source {
        FieldCtx::Prime(p) => {
            if *p != p_t {
                return Err(Error::InvalidInput("characteristic mismatch".into()));
            }
            let Elem::Fp(x) = a else {
                return Err(Error::InvalidInput("element does not match context".into()));
            };
            Ok(target.from_i64(*x as i64))
        }
        FieldCtx::Ext(src) => {
            if src.p != p_t {
                return Err(Error::InvalidInput("characteristic mismatch".into()));
            }
            if k % src.degree != 0 {
                return Err(Error::InvalidInput(format!(
                    "no embedding GF({}^{}) -> GF({}^{}): degree does not divide",
                    src.p, src.degree, p_t, k
                )));
            }
            let key = (
                src.p,
                src.modulus.clone(),
                match target {
                    FieldCtx::Ext(t) => t.modulus.clone(),
                    _ => vec![],
                },
            );
            let cache = EMBED_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
            let gen_image = {
                let guard = cache.lock().unwrap();
                guard.get(&key).cloned()
            };
            let gen_image = match gen_image {
                Some(g) => g,
                None => {
                    let base = FieldCtx::Prime(src.p);
                    let modulus = UniPoly::new(
                        base,
                        src.modulus.iter().map(|&c| Elem::Fp(c)).collect(),
                    );
                    let root = find_root_in(&modulus, target)?;
                    let mut guard = cache.lock().unwrap();
                    guard.entry(key).or_insert_with(|| root.clone());
                    root
                }
            };
            let Elem::Ext(coeffs) = a else {
                return Err(Error::InvalidInput("element does not match context".into()));
            };
            // evaluate the coefficient vector at the generator image
            let mut acc = target.zero();
            for &c in coeffs.iter().rev() {
                acc = target.mul(&acc, &gen_image);
                acc = target.add(&acc, &target.from_i64(c as i64));
            }
            Ok(acc)
        }
        FieldCtx::Rationals => Err(Error::InvalidInput(
            "cannot embed rationals into a finite field".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &FieldCtx, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            ctx.clone(),
            coeffs.iter().map(|&c| ctx.from_i64(c)).collect(),
        )
    }

    #[test]
    fn factor_x2_minus_1_gf7() {
        let f7 = FieldCtx::prime(7).unwrap();
        let f = poly(&f7, &[-1, 0, 1]);
        let factors = factor_univariate(&f).unwrap();
        assert_eq!(factors.len(), 2);
        for (g, m) in &factors {
            assert_eq!(g.degree(), Some(1));
            assert_eq!(*m, 1);
        }
        // x - 1 and x + 1 = x + 6
        let roots: Vec<Elem> = factors
            .iter()
            .map(|(g, _)| f7.neg(&g.coeffs[0]))
            .collect();
        assert!(roots.contains(&f7.from_i64(1)));
        assert!(roots.contains(&f7.from_i64(-1)));
    }

    #[test]
    fn x2_plus_1_irreducible_gf7() {
        let f7 = FieldCtx::prime(7).unwrap();
        let f = poly(&f7, &[1, 0, 1]);
        // -1 is not a QR mod 7: exhaustive root check
        for a in 0..7 {
            assert!(!f7.is_zero(&f.eval(&f7.from_i64(a))));
        }
        assert!(is_irreducible(&f).unwrap());
        let factors = factor_univariate(&f).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.degree(), Some(2));
    }

    #[test]
    fn factor_cube_gf5() {
        let f5 = FieldCtx::prime(5).unwrap();
        let f = poly(&f5, &[0, 0, 0, 1]);
        let factors = factor_univariate(&f).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, poly(&f5, &[0, 1]));
        assert_eq!(factors[0].1, 3);
    }

    #[test]
    fn factorization_remultiplies() {
        let p = 10007;
        let ctx = FieldCtx::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let deg = rng.gen_range(1..=9);
            let mut coeffs: Vec<Elem> = (0..deg).map(|_| ctx.random(&mut rng)).collect();
            coeffs.push(ctx.random_nonzero(&mut rng));
            let f = UniPoly::new(ctx.clone(), coeffs);
            let factors = factor_univariate(&f).unwrap();
            let mut prod = UniPoly::constant(&ctx, f.lead().unwrap().clone());
            for (g, m) in &factors {
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
            }
            assert_eq!(prod, f);
        }
    }

    #[test]
    fn ext_create_degrees() {
        assert_eq!(ext_create(7, 1).unwrap(), FieldCtx::prime(7).unwrap());
        for (p, k) in [(7u64, 2usize), (10007, 4)] {
            let ctx = ext_create(p, k).unwrap();
            let FieldCtx::Ext(e) = &ctx else { panic!() };
            assert_eq!(e.degree, k);
            let base = FieldCtx::prime(p).unwrap();
            let modulus = UniPoly::new(
                base,
                e.modulus.iter().map(|&c| Elem::Fp(c)).collect(),
            );
            assert!(is_irreducible(&modulus).unwrap());
        }
    }

    #[test]
    fn embed_constants_and_homomorphism() {
        let p = 10007;
        let base = FieldCtx::prime(p).unwrap();
        let ext2 = ext_create(p, 2).unwrap();
        // constants embed to constants, 1 -> 1
        assert_eq!(
            embed(&base.one(), &base, &ext2).unwrap(),
            ext2.one()
        );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let a = base.random(&mut rng);
            let b = base.random(&mut rng);
            let ea = embed(&a, &base, &ext2).unwrap();
            let eb = embed(&b, &base, &ext2).unwrap();
            assert_eq!(embed(&base.add(&a, &b), &base, &ext2).unwrap(), ext2.add(&ea, &eb));
            assert_eq!(embed(&base.mul(&a, &b), &base, &ext2).unwrap(), ext2.mul(&ea, &eb));
        }
    }

    #[test]
    fn embed_chain_and_ring_hom() {
        let p = 101;
        let ext2 = ext_create(p, 2).unwrap();
        let ext4 = ext_create(p, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // GF(p^2) -> GF(p^4) is a ring homomorphism
        for _ in 0..30 {
            let a = ext2.random(&mut rng);
            let b = ext2.random(&mut rng);
            let ea = embed(&a, &ext2, &ext4).unwrap();
            let eb = embed(&b, &ext2, &ext4).unwrap();
            assert_eq!(embed(&ext2.add(&a, &b), &ext2, &ext4).unwrap(), ext4.add(&ea, &eb));
            assert_eq!(embed(&ext2.mul(&a, &b), &ext2, &ext4).unwrap(), ext4.mul(&ea, &eb));
        }
        // embed of embed along GF(p) -> GF(p^2) -> GF(p^4) agrees with direct
        let base = FieldCtx::prime(p).unwrap();
        for _ in 0..30 {
            let a = base.random(&mut rng);
            let via = embed(&embed(&a, &base, &ext2).unwrap(), &ext2, &ext4).unwrap();
            let direct = embed(&a, &base, &ext4).unwrap();
            assert_eq!(via, direct);
        }
        // j does not divide k is rejected
        let ext3 = ext_create(p, 3).unwrap();
        let a = ext3.random(&mut rng);
        assert!(embed(&a, &ext3, &ext4).is_err());
    }
}
