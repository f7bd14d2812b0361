//! Exact field arithmetic: arbitrary-precision rationals, prime fields
//! GF(p), and extension fields GF(p^k) given by an irreducible modulus.
//!
//! Characteristics 2 and 3 are rejected outright: the Pfaffian sign
//! identities and the factor 3 in the Euler relation degenerate there.

use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rand::Rng;
use std::fmt;
use std::sync::Arc;

/// Context for an extension field GF(p^k) = GF(p)[t]/(modulus).
#[derive(Debug)]
pub struct ExtCtx {
    pub p: u64,
    /// Monic irreducible modulus, little-endian coefficients, length k+1.
    pub modulus: Vec<u64>,
    pub degree: usize,
}

impl PartialEq for ExtCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for ExtCtx {}

/// A coefficient field: the rationals, a prime field, or an extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldCtx {
    Rationals,
    Prime(u64),
    Ext(Arc<ExtCtx>),
}

/// A field element in canonical form. The interpretation depends on the
/// companion `FieldCtx`: reduced fraction, residue in `[0, p)`, or a
/// coefficient vector of length k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    Fp(u64),
    Ext(Vec<u64>),
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, p);
        }
        base = mul_mod_u64(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod_u64(a: u64, p: u64) -> Result<u64, Error> {
    if a % p == 0 {
        return Err(Error::DivisionByZero);
    }
    // extended Euclid
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(t0.rem_euclid(p as i128) as u64)
}

impl FieldCtx {
    /// Prime-field context; rejects non-primes and characteristics 2, 3.
    pub fn prime(p: u64) -> Result<FieldCtx, Error> {
        if p < 5 || !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!(
                "field characteristic must be a prime >= 5, got {p}"
            )));
        }
        Ok(FieldCtx::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldCtx::Rationals => 0,
            FieldCtx::Prime(p) => *p,
            FieldCtx::Ext(e) => e.p,
        }
    }

    /// Extension degree over the prime field (1 for GF(p) and the rationals).
    pub fn degree(&self) -> usize {
        match self {
            FieldCtx::Ext(e) => e.degree,
            _ => 1,
        }
    }

    /// The prime-field context under an extension (self for the others).
    pub fn base(&self) -> FieldCtx {
        match self {
            FieldCtx::Ext(e) => FieldCtx::Prime(e.p),
            other => other.clone(),
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            FieldCtx::Rationals => Elem::Rat(BigRational::zero()),
            FieldCtx::Prime(_) => Elem::Fp(0),
            FieldCtx::Ext(e) => Elem::Ext(vec![0; e.degree]),
        }
    }

    pub fn one(&self) -> Elem {
        match self {
            FieldCtx::Rationals => Elem::Rat(BigRational::one()),
            FieldCtx::Prime(_) => Elem::Fp(1),
            FieldCtx::Ext(e) => {
                let mut v = vec![0; e.degree];
                v[0] = 1;
                Elem::Ext(v)
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match self {
            FieldCtx::Rationals => Elem::Rat(BigRational::from(BigInt::from(n))),
            FieldCtx::Prime(p) => Elem::Fp((n.rem_euclid(*p as i64)) as u64),
            FieldCtx::Ext(e) => {
                let mut v = vec![0; e.degree];
                v[0] = (n.rem_euclid(e.p as i64)) as u64;
                Elem::Ext(v)
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Fp(x) => *x == 0,
            Elem::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (FieldCtx::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldCtx::Prime(p), Elem::Fp(x), Elem::Fp(y)) => Elem::Fp((x + y) % p),
            (FieldCtx::Ext(e), Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(x.iter().zip(y).map(|(&u, &v)| (u + v) % e.p).collect())
            }
            _ => panic!("field element does not match context"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (FieldCtx::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldCtx::Prime(p), Elem::Fp(x)) => Elem::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldCtx::Ext(e), Elem::Ext(x)) => Elem::Ext(
                x.iter()
                    .map(|&u| if u == 0 { 0 } else { e.p - u })
                    .collect(),
            ),
            _ => panic!("field element does not match context"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (FieldCtx::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldCtx::Prime(p), Elem::Fp(x), Elem::Fp(y)) => Elem::Fp(mul_mod_u64(*x, *y, *p)),
            (FieldCtx::Ext(e), Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(e.mul_vec(x, y)),
            _ => panic!("field element does not match context"),
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: &Elem) -> Result<Elem, Error> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match (self, a) {
            (FieldCtx::Rationals, Elem::Rat(x)) => Elem::Rat(x.recip()).pipe_ok(),
            (FieldCtx::Prime(p), Elem::Fp(x)) => Ok(Elem::Fp(inv_mod_u64(*x, *p)?)),
            (FieldCtx::Ext(e), Elem::Ext(x)) => Ok(Elem::Ext(e.inv_vec(x)?)),
            _ => panic!("field element does not match context"),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem, Error> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut exp: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Frobenius x -> x^p (identity on the rationals and GF(p)).
    pub fn frobenius(&self, a: &Elem) -> Elem {
        match self {
            FieldCtx::Rationals | FieldCtx::Prime(_) => a.clone(),
            FieldCtx::Ext(e) => self.pow(a, e.p),
        }
    }

    /// Uniform random element.
    pub fn random<R: Rng>(&self, rng: &mut R) -> Elem {
        match self {
            FieldCtx::Rationals => {
                let n = rng.gen_range(-1000i64..=1000);
                let d = rng.gen_range(1i64..=1000);
                Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldCtx::Prime(p) => Elem::Fp(rng.gen_range(0..*p)),
            FieldCtx::Ext(e) => Elem::Ext((0..e.degree).map(|_| rng.gen_range(0..e.p)).collect()),
        }
    }

    /// Nonzero uniform random element.
    pub fn random_nonzero<R: Rng>(&self, rng: &mut R) -> Elem {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    pub fn display(&self, a: &Elem) -> String {
        match a {
            Elem::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Elem::Fp(x) => format!("{x}"),
            Elem::Ext(v) => {
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match i {
                        0 => format!("{c}"),
                        1 => {
                            if c == 1 {
                                "t".to_string()
                            } else {
                                format!("{c}*t")
                            }
                        }
                        _ => {
                            if c == 1 {
                                format!("t^{i}")
                            } else {
                                format!("{c}*t^{i}")
                            }
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}

trait PipeOk: Sized {
    fn pipe_ok(self) -> Result<Self, Error> {
        Ok(self)
    }
}
impl PipeOk for Elem {}

impl ExtCtx {
    fn mul_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.degree;
        let p = self.p;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                prod[i + j] = (prod[i + j] + mul_mod_u64(ai, bj, p)) % p;
            }
        }
        // reduce by the monic modulus
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &mj) in self.modulus.iter().take(k).enumerate() {
                let sub = mul_mod_u64(c, mj, p);
                prod[d - k + j] = (prod[d - k + j] + p - sub % p) % p;
            }
        }
        prod.truncate(k);
        prod
    }

    fn inv_vec(&self, a: &[u64]) -> Result<Vec<u64>, Error> {
        // extended Euclid in GF(p)[t] for (a, modulus)
        let p = self.p;
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        let mut r0: Vec<u64> = self.modulus.clone();
        let mut r1: Vec<u64> = a.to_vec();
        trim(&mut r1);
        if r1.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let mut t0: Vec<u64> = vec![];
        let mut t1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // divide r0 by r1
            let mut rem = r0.clone();
            let mut quo = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
            let lead_inv = inv_mod_u64(*r1.last().unwrap(), p)?;
            while rem.len() >= r1.len() && !rem.is_empty() {
                let shift = rem.len() - r1.len();
                let c = mul_mod_u64(*rem.last().unwrap(), lead_inv, p);
                quo[shift] = c;
                for (j, &dj) in r1.iter().enumerate() {
                    let sub = mul_mod_u64(c, dj, p);
                    rem[shift + j] = (rem[shift + j] + p - sub) % p;
                }
                trim(&mut rem);
            }
            // t2 = t0 - quo * t1
            let mut qt = vec![0u64; quo.len() + t1.len()];
            for (i, &qi) in quo.iter().enumerate() {
                if qi == 0 {
                    continue;
                }
                for (j, &tj) in t1.iter().enumerate() {
                    qt[i + j] = (qt[i + j] + mul_mod_u64(qi, tj, p)) % p;
                }
            }
            let mut t2 = vec![0u64; t0.len().max(qt.len())];
            for (i, c) in t2.iter_mut().enumerate() {
                let u = t0.get(i).copied().unwrap_or(0);
                let v = qt.get(i).copied().unwrap_or(0);
                *c = (u + p - v) % p;
            }
            trim(&mut t2);
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r0 is the gcd; must be a nonzero constant since modulus is irreducible
        if r0.len() != 1 {
            return Err(Error::InvalidInput(
                "extension modulus is not irreducible".into(),
            ));
        }
        let c_inv = inv_mod_u64(r0[0], p)?;
        let mut out = vec![0u64; self.degree];
        for (i, &ti) in t0.iter().enumerate() {
            out[i] = mul_mod_u64(ti, c_inv, p);
        }
        Ok(out)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rationals => write!(f, "QQ"),
            FieldCtx::Prime(p) => write!(f, "GF({p})"),
            FieldCtx::Ext(e) => write!(f, "GF({}^{})", e.p, e.degree),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipoly::ext_create;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_gf7() {
        let f = FieldCtx::prime(7).unwrap();
        let a = f.from_i64(3);
        assert_eq!(f.inv(&a).unwrap(), f.from_i64(5));
    }

    #[test]
    fn inverse_rational() {
        let f = FieldCtx::Rationals;
        let a = f.div(&f.from_i64(2), &f.from_i64(3)).unwrap();
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        // 3/2
        assert_eq!(inv, f.div(&f.from_i64(3), &f.from_i64(2)).unwrap());
    }

    #[test]
    fn inverse_in_extension() {
        // GF(5)[t]/(t^2+2), invert t
        let e = Arc::new(ExtCtx {
            p: 5,
            modulus: vec![2, 0, 1],
            degree: 2,
        });
        let f = FieldCtx::Ext(e);
        let t = Elem::Ext(vec![0, 1]);
        let inv = f.inv(&t).unwrap();
        assert_eq!(f.mul(&t, &inv), f.one());
    }

    #[test]
    fn zero_inverse_rejected() {
        let f = FieldCtx::prime(7).unwrap();
        assert!(matches!(f.inv(&f.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn small_characteristic_rejected() {
        assert!(FieldCtx::prime(2).is_err());
        assert!(FieldCtx::prime(3).is_err());
        assert!(FieldCtx::prime(4).is_err());
        assert!(FieldCtx::prime(5).is_ok());
    }

    #[test]
    fn fermat_little() {
        let p = 10007u64;
        let f = FieldCtx::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..120 {
            let a = f.random(&mut rng);
            assert_eq!(f.pow(&a, p), a);
        }
    }

    #[test]
    fn rational_matches_modular() {
        // arithmetic over QQ agrees with the image in GF(p) for p = 10007
        let p = 10007u64;
        let q = FieldCtx::Rationals;
        let fp = FieldCtx::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let to_fp = |r: &Elem| -> Elem {
            let Elem::Rat(x) = r else { unreachable!() };
            let num = (x.numer() % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
            let den = (x.denom() % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
            let n: u64 = num.try_into().unwrap();
            let d: u64 = den.try_into().unwrap();
            fp.div(&Elem::Fp(n), &Elem::Fp(d)).unwrap()
        };
        for _ in 0..50 {
            let a = q.random(&mut rng);
            let b = q.random(&mut rng);
            assert_eq!(to_fp(&q.add(&a, &b)), fp.add(&to_fp(&a), &to_fp(&b)));
            assert_eq!(to_fp(&q.mul(&a, &b)), fp.mul(&to_fp(&a), &to_fp(&b)));
        }
    }

    #[test]
    fn frobenius_is_additive_in_extension() {
        let ctx = ext_create(10007, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = ctx.random(&mut rng);
            let b = ctx.random(&mut rng);
            assert_eq!(
                ctx.frobenius(&ctx.add(&a, &b)),
                ctx.add(&ctx.frobenius(&a), &ctx.frobenius(&b))
            );
        }
    }
}
