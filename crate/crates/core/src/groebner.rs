//! A compact Groebner engine over exact fields: Buchberger with the
//! product and chain criteria, reduced bases in graded reverse
//! lexicographic order, Hilbert series data for dimension and degree,
//! saturation by a linear form, and a solver for zero-dimensional
//! homogeneous ideals over prime fields.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::{Elem, FieldCtx};
use crate::linalg::Mat;
use crate::poly::{LinForm, Monomial, Poly};
use crate::unipoly::{self, UniPoly};

#[derive(Clone, Debug)]
pub struct Ideal {
    pub ctx: FieldCtx,
    pub nvars: usize,
    pub gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ctx: &FieldCtx, nvars: usize, gens: Vec<Poly>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            ctx: ctx.clone(),
            nvars,
            gens,
        }
    }
}

/// A reduced Groebner basis: monic, interreduced, sorted by lead monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub ctx: FieldCtx,
    pub nvars: usize,
    pub gens: Vec<Poly>,
}

/// Full normal form of `f` with respect to `gens` (every term reduced).
pub fn normal_form(f: &Poly, gens: &[Poly]) -> Poly {
    let ctx = f.ctx.clone();
    let mut p = f.clone();
    let mut rem = Poly::zero(&ctx, f.nvars);
    'outer: while let Some((lm, lc)) = p.lead().cloned() {
        for g in gens {
            let (glm, glc) = g.lead().expect("basis elements are nonzero");
            if glm.divides(&lm) {
                let q = glm.quotient_into(&lm);
                let c = ctx.div(&lc, glc).expect("nonzero lead coefficient");
                p = p.sub(&g.mul_term(&q, &c));
                continue 'outer;
            }
        }
        rem = rem.add(&Poly::from_terms(&ctx, f.nvars, vec![(lm.clone(), lc.clone())]));
        p = p.sub(&Poly::from_terms(&ctx, f.nvars, vec![(lm, lc)]));
    }
    rem
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let ctx = &f.ctx;
    let (fm, fc) = f.lead().unwrap();
    let (gm, gc) = g.lead().unwrap();
    let l = fm.lcm(gm);
    let a = f.mul_term(&fm.quotient_into(&l), &ctx.inv(fc).unwrap());
    let b = g.mul_term(&gm.quotient_into(&l), &ctx.inv(gc).unwrap());
    a.sub(&b)
}

/// Buchberger completion followed by interreduction. Deterministic.
pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis, Error> {
    let ctx = ideal.ctx.clone();
    let n = ideal.nvars;
    let mut basis: Vec<Poly> = vec![];
    for g in &ideal.gens {
        let r = normal_form(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic_poly());
        }
    }
    let mut pending: Vec<(usize, usize)> = vec![];
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let add_pairs = |basis: &Vec<Poly>,
                         pending: &mut Vec<(usize, usize)>,
                         pending_set: &mut HashSet<(usize, usize)>,
                         new_idx: usize| {
        for i in 0..new_idx {
            pending.push((i, new_idx));
            pending_set.insert((i, new_idx));
        }
        // keep the queue ordered by the degree of the pair lcm
        pending.sort_by_key(|&(i, j)| {
            basis[i]
                .lead()
                .unwrap()
                .0
                .lcm(&basis[j].lead().unwrap().0)
                .degree()
        });
    };
    for k in 1..basis.len() {
        add_pairs(&basis, &mut pending, &mut pending_set, k);
    }
    while !pending.is_empty() {
        let (i, j) = pending.remove(0);
        pending_set.remove(&(i, j));
        let (mi, _) = basis[i].lead().unwrap();
        let (mj, _) = basis[j].lead().unwrap();
        if mi.coprime(mj) {
            continue;
        }
        let l = mi.lcm(mj);
        // chain criterion: some k divides the lcm and both companion pairs
        // are already processed
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let (mk, _) = g.lead().unwrap();
            if mk.divides(&l) {
                let p1 = (i.min(k), i.max(k));
                let p2 = (j.min(k), j.max(k));
                if !pending_set.contains(&p1) && !pending_set.contains(&p2) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            basis.push(r.monic_poly());
            let k = basis.len() - 1;
            add_pairs(&basis, &mut pending, &mut pending_set, k);
        }
    }
    // minimalize
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let (mi, _) = basis[i].lead().unwrap();
                let (mj, _) = basis[j].lead().unwrap();
                if mj.divides(mi) && (mi != mj || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let minimal: Vec<Poly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // interreduce
    let mut reduced: Vec<Poly> = vec![];
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        let r = normal_form(&minimal[i], &others);
        if !r.is_zero() {
            reduced.push(r.monic_poly());
        }
    }
    reduced.sort_by(|a, b| a.lead().unwrap().0.cmp(&b.lead().unwrap().0));
    Ok(GroebnerBasis {
        ctx,
        nvars: n,
        gens: reduced,
    })
}

impl GroebnerBasis {
    pub fn contains(&self, f: &Poly) -> bool {
        normal_form(f, &self.gens).is_zero()
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.gens.iter().map(|g| g.lead().unwrap().0.clone()).collect()
    }
}

impl Poly {
    pub fn monic_poly(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.ctx.inv(c).unwrap()),
        }
    }
}

// ---- Hilbert series ----------------------------------------------------

/// Hilbert data of a homogeneous quotient: the numerator of the Hilbert
/// series over (1-t)^n, the projective dimension (-1 for empty), and the
/// degree of the projective scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub nvars: usize,
    pub numerator: Vec<i128>,
    pub dim: i64,
    pub degree: i64,
}

fn poly_i_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_i(&mut out);
    out
}

fn poly_i_add_shifted(a: &[i128], b: &[i128], shift: usize) -> Vec<i128> {
    let mut out = vec![0i128; a.len().max(b.len() + shift)];
    out[..a.len()].copy_from_slice(a);
    for (j, &y) in b.iter().enumerate() {
        out[j + shift] += y;
    }
    trim_i(&mut out);
    out
}

fn trim_i(v: &mut Vec<i128>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn interreduce_monomials(gens: &mut Vec<Monomial>) {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut keep: Vec<Monomial> = vec![];
    for m in gens.iter() {
        if !keep.iter().any(|k| k.divides(m)) {
            keep.push(m.clone());
        }
    }
    *gens = keep;
}

/// Numerator of the Hilbert series of a quotient by a monomial ideal, by
/// pivot recursion on a frequent variable.
fn hilbert_numerator(nvars: usize, gens: &[Monomial]) -> Vec<i128> {
    let mut gens = gens.to_vec();
    interreduce_monomials(&mut gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.degree() == 0) {
        return vec![];
    }
    // pure-power base case
    let pure = gens
        .iter()
        .all(|m| m.0.iter().filter(|&&e| e > 0).count() == 1);
    if pure {
        let mut num = vec![1i128];
        for m in &gens {
            let d = m.degree() as usize;
            let mut f = vec![0i128; d + 1];
            f[0] = 1;
            f[d] = -1;
            num = poly_i_mul(&num, &f);
        }
        return num;
    }
    // pivot: most frequent variable among mixed generators
    let mut counts = vec![0usize; nvars];
    for m in &gens {
        if m.0.iter().filter(|&&e| e > 0).count() > 1 {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    counts[i] += 1;
                }
            }
        }
    }
    let v = counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, &c)| c)
        .map(|(i, _)| i)
        .unwrap();
    // branch 1: add x_v (drops every generator containing x_v)
    let mut plus: Vec<Monomial> = gens.iter().filter(|m| m.0[v] == 0).cloned().collect();
    plus.push(Monomial::var(nvars, v));
    // branch 2: colon by x_v
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut e = m.0.clone();
            if e[v] > 0 {
                e[v] -= 1;
            }
            Monomial(e)
        })
        .collect();
    let n_plus = hilbert_numerator(nvars, &plus);
    let n_colon = hilbert_numerator(nvars, &colon);
    poly_i_add_shifted(&n_plus, &n_colon, 1)
}

/// Hilbert data of the quotient by a homogeneous ideal with the given
/// reduced basis.
pub fn hilbert(gb: &GroebnerBasis) -> Result<HilbertData, Error> {
    for g in &gb.gens {
        if !g.is_homogeneous() {
            return Err(Error::InvalidInput(
                "Hilbert data needs a homogeneous ideal".into(),
            ));
        }
    }
    let n = gb.nvars;
    let numerator = hilbert_numerator(n, &gb.lead_monomials());
    // strip the largest power of (1-t)
    let mut q = numerator.clone();
    let mut strips = 0usize;
    while !q.is_empty() && q.iter().sum::<i128>() == 0 {
        // synthetic division by (1 - t)
        let mut out = vec![0i128; q.len() - 1];
        let mut carry = 0i128;
        // q(t) = (1 - t) r(t): r_k = q_k + r_{k-1}
        for k in 0..q.len() - 1 {
            carry += q[k];
            out[k] = carry;
        }
        q = out;
        trim_i(&mut q);
        strips += 1;
    }
    let (dim, degree) = if q.is_empty() {
        (-1i64, 0i64)
    } else {
        let d = n as i64 - strips as i64 - 1;
        if d < 0 {
            (-1, 0)
        } else {
            (d, q.iter().sum::<i128>() as i64)
        }
    };
    Ok(HilbertData {
        nvars: n,
        numerator,
        dim,
        degree,
    })
}

impl HilbertData {
    /// Value of the Hilbert function of the quotient in degree d.
    pub fn value(&self, d: usize) -> i128 {
        let n = self.nvars as i128;
        let mut acc = 0i128;
        for (e, &c) in self.numerator.iter().enumerate() {
            if e as i128 <= d as i128 {
                acc += c * binom_i(n - 1 + d as i128 - e as i128, n - 1);
            }
        }
        acc
    }
}

fn binom_i(n: i128, k: i128) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// True when the homogeneous ideal cuts out the empty projective scheme.
pub fn is_projectively_empty(gb: &GroebnerBasis) -> Result<bool, Error> {
    Ok(hilbert(gb)?.dim < 0)
}

// ---- saturation by a linear form --------------------------------------

fn strip_last_var(p: &Poly) -> Poly {
    let n = p.nvars;
    let e = p.terms.iter().map(|(m, _)| m.0[n - 1]).min().unwrap_or(0);
    if e == 0 {
        return p.clone();
    }
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut v = m.0.clone();
            v[n - 1] -= e;
            (Monomial(v), c.clone())
        })
        .collect();
    Poly::from_terms(&p.ctx, n, terms)
}

/// Change of coordinates moving `ell` to the last variable: columns of the
/// returned matrix A satisfy ell(A y) = y_{n-1}.
fn chart_matrix(ctx: &FieldCtx, ell: &LinForm) -> Result<Mat, Error> {
    let n = ell.coeffs.len();
    let pivot = ell
        .coeffs
        .iter()
        .position(|c| !ctx.is_zero(c))
        .ok_or_else(|| Error::InvalidInput("zero linear form".into()))?;
    let inv = ctx.inv(&ell.coeffs[pivot])?;
    let mut a = Mat::zero(ctx, n, n);
    let mut col = 0usize;
    for k in 0..n {
        if k == pivot {
            continue;
        }
        // column: e_k - (l_k / l_pivot) e_pivot
        *a.at_mut(k, col) = ctx.one();
        *a.at_mut(pivot, col) = ctx.neg(&ctx.mul(&ell.coeffs[k], &inv));
        col += 1;
    }
    *a.at_mut(pivot, n - 1) = inv;
    Ok(a)
}

fn columns_as_rows(a: &Mat) -> Vec<Vec<Elem>> {
    (0..a.cols)
        .map(|j| (0..a.rows).map(|i| a.at(i, j).clone()).collect())
        .collect()
}

/// Saturation of a homogeneous ideal by a linear form, via a coordinate
/// change to the last variable and repeated division of the reduced basis.
pub fn saturate_by_linear(ideal: &Ideal, ell: &LinForm) -> Result<Ideal, Error> {
    let ctx = &ideal.ctx;
    let n = ideal.nvars;
    let a = chart_matrix(ctx, ell)?;
    let rows = columns_as_rows(&a);
    let mut gens: Vec<Poly> = ideal
        .gens
        .iter()
        .map(|g| g.substitute_linear(&rows))
        .collect::<Result<_, _>>()?;
    loop {
        let gb = buchberger(&Ideal::new(ctx, n, gens.clone()))?;
        let stripped: Vec<Poly> = gb.gens.iter().map(strip_last_var).collect();
        if stripped == gb.gens {
            gens = stripped;
            break;
        }
        gens = stripped;
    }
    let ainv = a.inverse()?;
    let back = columns_as_rows(&ainv);
    let out = gens
        .iter()
        .map(|g| g.substitute_linear(&back))
        .collect::<Result<_, _>>()?;
    Ok(Ideal::new(ctx, n, out))
}

// ---- graded pieces -----------------------------------------------------

/// All monomials of total degree d in the given number of variables, in a
/// fixed deterministic order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, pos: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if pos == nvars - 1 {
            cur[pos] = left as u8;
            out.push(Monomial(cur.clone()));
            cur[pos] = 0;
            return;
        }
        for e in 0..=left {
            cur[pos] = e as u8;
            rec(nvars, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = vec![];
    let mut cur = vec![0u8; nvars];
    rec(nvars, 0, d, &mut cur, &mut out);
    out
}

/// Basis (in reduced row echelon form over the degree-d monomials) of the
/// degree-d graded piece of a homogeneous ideal given by a reduced basis.
pub fn graded_piece(gb: &GroebnerBasis, d: u32) -> Vec<Poly> {
    let ctx = &gb.ctx;
    let n = gb.nvars;
    let monos = monomials_of_degree(n, d);
    let index: std::collections::HashMap<&Monomial, usize> =
        monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<Elem>> = vec![];
    for g in &gb.gens {
        let gd = match g.total_degree() {
            Some(x) if x <= d => x,
            _ => continue,
        };
        for m in monomials_of_degree(n, d - gd) {
            let p = g.mul_term(&m, &ctx.one());
            let mut row = vec![ctx.zero(); monos.len()];
            for (mm, c) in &p.terms {
                row[index[mm]] = c.clone();
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return vec![];
    }
    let mut mat = Mat::from_rows(ctx, rows);
    mat.rref();
    let mut out = vec![];
    for i in 0..mat.rows {
        let row = mat.row(i);
        if row.iter().all(|c| ctx.is_zero(c)) {
            continue;
        }
        let terms: Vec<(Monomial, Elem)> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !ctx.is_zero(c))
            .map(|(j, c)| (monos[j].clone(), c.clone()))
            .collect();
        out.push(Poly::from_terms(ctx, n, terms));
    }
    out
}

// ---- zero-dimensional solver -------------------------------------------

/// A closed point of projective space: homogeneous coordinates over the
/// residue field, scheme multiplicity, and residue degree over the prime
/// field.
#[derive(Clone, Debug)]
pub struct SolvedPoint {
    pub ctx: FieldCtx,
    pub coords: Vec<Elem>,
    pub multiplicity: usize,
    pub residue_degree: usize,
}

#[derive(Clone, Debug)]
pub struct ZeroDimSolution {
    /// Length of the scheme: sum of multiplicity times residue degree.
    pub length: usize,
    pub points: Vec<SolvedPoint>,
}

fn lagrange_interpolate(ctx: &FieldCtx, xs: &[Elem], ys: &[Elem]) -> UniPoly {
    let mut acc = UniPoly::zero(ctx);
    for (i, xi) in xs.iter().enumerate() {
        let mut num = UniPoly::constant(ctx, ys[i].clone());
        let mut den = ctx.one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let lin = UniPoly::new(ctx.clone(), vec![ctx.neg(xj), ctx.one()]);
            num = num.mul(&lin);
            den = ctx.mul(&den, &ctx.sub(xi, xj));
        }
        acc = acc.add(&num.scale(&ctx.inv(&den).unwrap()));
    }
    acc
}

fn random_invertible<R: Rng>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Mat {
    loop {
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|_| (0..n).map(|_| ctx.random(rng)).collect())
            .collect();
        let m = Mat::from_rows(ctx, rows);
        if !ctx.is_zero(&m.det()) {
            return m;
        }
    }
}

fn standard_monomials(nvars: usize, leads: &[Monomial], cap: usize) -> Option<Vec<Monomial>> {
    let mut out: Vec<Monomial> = vec![];
    let mut queue = vec![Monomial::one(nvars)];
    let mut seen: HashSet<Monomial> = HashSet::new();
    while let Some(m) = queue.pop() {
        if seen.contains(&m) || leads.iter().any(|l| l.divides(&m)) {
            continue;
        }
        seen.insert(m.clone());
        out.push(m.clone());
        if out.len() > cap {
            return None;
        }
        for i in 0..nvars {
            queue.push(m.mul(&Monomial::var(nvars, i)));
        }
    }
    out.sort();
    Some(out)
}

/// Solve a zero-dimensional homogeneous ideal over a prime field by the
/// eigenvector method on a random affine chart. Deterministic for a fixed
/// seed.
pub fn solve_zero_dim(ideal: &Ideal, seed: u64) -> Result<ZeroDimSolution, Error> {
    let ctx = &ideal.ctx;
    if ctx.characteristic() == 0 || ctx.degree() != 1 {
        return Err(Error::InvalidInput(
            "the solver works over prime fields".into(),
        ));
    }
    let n = ideal.nvars;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x50_1e_5e_ed);
    let mut last_err = Error::RetryExhausted("no chart attempted".into());
    for _chart in 0..5 {
        let a = random_invertible(ctx, n, &mut rng);
        match solve_on_chart(ideal, &a, &mut rng) {
            Ok(sol) => return Ok(sol),
            Err(e) => last_err = e,
        }
    }
    Err(Error::RetryExhausted(format!(
        "zero-dimensional solve failed on 5 charts; last error: {last_err}"
    )))
}

fn solve_on_chart<R: Rng>(
    ideal: &Ideal,
    a: &Mat,
    rng: &mut R,
) -> Result<ZeroDimSolution, Error> {
    let ctx = &ideal.ctx;
    let n = ideal.nvars;
    let rows = columns_as_rows(a);
    // substitute x = A y, then set y_{n-1} = 1
    let affine_gens: Vec<Poly> = ideal
        .gens
        .iter()
        .map(|g| {
            let h = g.substitute_linear(&rows)?;
            Ok(dehomogenize_last(&h))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let m = n - 1;
    let gb = buchberger(&Ideal::new(ctx, m, affine_gens))?;
    if gb.gens.iter().any(|g| g.total_degree() == Some(0)) {
        return Err(Error::NonGeneric("chart misses every point".into()));
    }
    let leads = gb.lead_monomials();
    let basis = standard_monomials(m, &leads, 4000)
        .ok_or_else(|| Error::NonGeneric("chart is not zero-dimensional".into()))?;
    let length = basis.len();
    let idx_of: std::collections::HashMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let one_pos = idx_of[&Monomial::one(m)];
    'mult: for _try in 0..4 {
        // multiplication matrix of a random linear form u
        let u = Poly::from_terms(
            ctx,
            m,
            (0..m)
                .map(|i| (Monomial::var(m, i), ctx.random(rng)))
                .collect(),
        );
        let mut mu = Mat::zero(ctx, length, length);
        let nf_cols: Vec<Poly> = basis
            .iter()
            .map(|b| normal_form(&u.mul_term(b, &ctx.one()), &gb.gens))
            .collect();
        for (c, nf) in nf_cols.iter().enumerate() {
            for (mono, coef) in &nf.terms {
                let r = *idx_of
                    .get(mono)
                    .ok_or_else(|| Error::NonGeneric("normal form left the basis".into()))?;
                *mu.at_mut(r, c) = coef.clone();
            }
        }
        // characteristic polynomial by evaluation and interpolation
        let p = ctx.characteristic();
        if (length as u64) + 1 > p {
            return Err(Error::InvalidInput(
                "field too small for interpolation".into(),
            ));
        }
        let xs: Vec<Elem> = (0..=length as u64).map(|v| ctx.from_i64(v as i64)).collect();
        let ys: Vec<Elem> = xs
            .iter()
            .map(|x| {
                let mut t = mu.clone();
                for d in 0..length {
                    *t.at_mut(d, d) = ctx.sub(x, mu.at(d, d));
                }
                for r in 0..length {
                    for c in 0..length {
                        if r != c {
                            *t.at_mut(r, c) = ctx.neg(mu.at(r, c));
                        }
                    }
                }
                t.det()
            })
            .collect();
        let charpoly = lagrange_interpolate(ctx, &xs, &ys);
        let factors = unipoly::factor_univariate(&charpoly)?;
        let mut points: Vec<SolvedPoint> = vec![];
        let mut accounted = 0usize;
        for (f, mult) in &factors {
            let d = f.degree().unwrap();
            let (kctx, lambda) = if d == 1 {
                // root of c1 x + c0
                let c0 = f.eval(&ctx.zero());
                let c1 = f.lead().unwrap().clone();
                (ctx.clone(), ctx.neg(&ctx.div(&c0, &c1)?))
            } else {
                let k = unipoly::ext_from_modulus(&f.monic())?;
                let lambda = match &k {
                    FieldCtx::Ext(_) => {
                        let mut v = vec![0u64; d];
                        v[1] = 1;
                        Elem::Ext(v)
                    }
                    _ => unreachable!(),
                };
                (k, lambda)
            };
            // left eigenvector: kernel of transpose(Mu) - lambda
            let mut mt = Mat::zero(&kctx, length, length);
            for r in 0..length {
                for c in 0..length {
                    let e = unipoly::embed(mu.at(c, r), ctx, &kctx)?;
                    *mt.at_mut(r, c) = if r == c { kctx.sub(&e, &lambda) } else { e };
                }
            }
            let ker = mt.kernel();
            if ker.len() != 1 {
                // eigenvalue shared by distinct points; new separating form
                continue 'mult;
            }
            let v = &ker[0];
            if kctx.is_zero(&v[one_pos]) {
                continue 'mult;
            }
            let inv1 = kctx.inv(&v[one_pos])?;
            let ev: Vec<Elem> = v.iter().map(|x| kctx.mul(x, &inv1)).collect();
            // affine coordinates: value of each variable under the
            // evaluation functional
            let mut ycoords: Vec<Elem> = (0..m)
                .map(|i| {
                    let nf = normal_form(&Poly::var(ctx, m, i), &gb.gens);
                    let mut acc = kctx.zero();
                    for (mono, coef) in &nf.terms {
                        let r = idx_of[mono];
                        let c = unipoly::embed(coef, ctx, &kctx)?;
                        acc = kctx.add(&acc, &kctx.mul(&c, &ev[r]));
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            ycoords.push(kctx.one());
            // back to the original coordinates: x = A y
            let coords: Vec<Elem> = (0..n)
                .map(|i| {
                    let mut acc = kctx.zero();
                    for (j, y) in ycoords.iter().enumerate() {
                        let aij = unipoly::embed(a.at(i, j), ctx, &kctx)?;
                        acc = kctx.add(&acc, &kctx.mul(&aij, y));
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            accounted += mult * d;
            points.push(SolvedPoint {
                ctx: kctx,
                coords,
                multiplicity: *mult,
                residue_degree: d,
            });
        }
        if accounted != length {
            continue 'mult;
        }
        points.sort_by_key(|p| (p.residue_degree, p.multiplicity));
        return Ok(ZeroDimSolution { length, points });
    }
    Err(Error::NonGeneric(
        "no separating linear form found on this chart".into(),
    ))
}

fn dehomogenize_last(p: &Poly) -> Poly {
    let n = p.nvars;
    let terms = p
        .terms
        .iter()
        .map(|(mono, c)| (Monomial(mono.0[..n - 1].to_vec()), c.clone()))
        .collect();
    Poly::from_terms(&p.ctx, n - 1, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_names;

    fn ctx() -> FieldCtx {
        FieldCtx::prime(10007).unwrap()
    }

    fn parse(c: &FieldCtx, n: usize, s: &str) -> Poly {
        Poly::parse(c, &default_names(n), s).unwrap()
    }

    #[test]
    fn groebner_of_twisted_cubic() {
        // projective twisted cubic in P^3
        let c = ctx();
        let gens = vec![
            parse(&c, 4, "x0*x2 - x1^2"),
            parse(&c, 4, "x0*x3 - x1*x2"),
            parse(&c, 4, "x1*x3 - x2^2"),
        ];
        let gb = buchberger(&Ideal::new(&c, 4, gens)).unwrap();
        assert_eq!(gb.gens.len(), 3);
        let h = hilbert(&gb).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.degree, 3);
        // Hilbert function of a degree-3 rational normal curve: 3d+1
        for d in 1..6 {
            assert_eq!(h.value(d), 3 * d as i128 + 1);
        }
        assert!(gb.contains(&parse(&c, 4, "x0*x2*x3 - x1^2*x3")));
        assert!(!gb.contains(&parse(&c, 4, "x0*x3 - x2^2")));
    }

    #[test]
    fn groebner_idempotent_and_order_independent() {
        let c = ctx();
        let gens = vec![
            parse(&c, 3, "x0^2 + x1*x2"),
            parse(&c, 3, "x0*x1 - x2^2"),
        ];
        let gb1 = buchberger(&Ideal::new(&c, 3, gens.clone())).unwrap();
        let gb2 = buchberger(&Ideal::new(&c, 3, gb1.gens.clone())).unwrap();
        assert_eq!(gb1, gb2);
        let mut rev = gens;
        rev.reverse();
        let gb3 = buchberger(&Ideal::new(&c, 3, rev)).unwrap();
        assert_eq!(gb1, gb3);
    }

    #[test]
    fn normal_form_is_linear_and_zero_on_ideal() {
        let c = ctx();
        let gens = vec![parse(&c, 3, "x0^2 - x1*x2"), parse(&c, 3, "x1^2 - x0*x2")];
        let gb = buchberger(&Ideal::new(&c, 3, gens.clone())).unwrap();
        let f = parse(&c, 3, "x0^3 + x1^3 + x2^3");
        let g = parse(&c, 3, "x0*x1*x2");
        let nf_sum = normal_form(&f.add(&g), &gb.gens);
        let sum_nf = normal_form(&f, &gb.gens).add(&normal_form(&g, &gb.gens));
        assert_eq!(nf_sum, sum_nf);
        let member = gens[0].mul(&f).add(&gens[1].mul(&g));
        assert!(normal_form(&member, &gb.gens).is_zero());
    }

    #[test]
    fn hilbert_of_hypersurface_and_empty() {
        let c = ctx();
        let gb = buchberger(&Ideal::new(&c, 4, vec![parse(&c, 4, "x0^3 + x1^3 + x2^3 + x3^3")]))
            .unwrap();
        let h = hilbert(&gb).unwrap();
        assert_eq!((h.dim, h.degree), (2, 3));
        // irrelevant ideal: empty projective scheme
        let gens = (0..4).map(|i| Poly::var(&c, 4, i)).collect();
        let gb = buchberger(&Ideal::new(&c, 4, gens)).unwrap();
        assert!(is_projectively_empty(&gb).unwrap());
        // a nonempty finite scheme is not projectively empty
        let gens = vec![parse(&c, 2, "x0*x1")];
        let gb = buchberger(&Ideal::new(&c, 2, gens)).unwrap();
        assert!(!is_projectively_empty(&gb).unwrap());
        let h = hilbert(&gb).unwrap();
        assert_eq!((h.dim, h.degree), (0, 2));
    }

    #[test]
    fn saturate_removes_embedded_component() {
        let c = ctx();
        // I = (x0) cap (x0^2, x1) = (x0^2, x0*x1); saturating by x1 leaves (x0)
        let gens = vec![parse(&c, 3, "x0^2"), parse(&c, 3, "x0*x1")];
        let ell = LinForm::new(&c, vec![c.zero(), c.one(), c.zero()]);
        let sat = saturate_by_linear(&Ideal::new(&c, 3, gens), &ell).unwrap();
        let gb = buchberger(&sat).unwrap();
        assert_eq!(gb.gens.len(), 1);
        assert_eq!(gb.gens[0], parse(&c, 3, "x0"));
        // the embedded component at (0:0:1) survives a generic form
        let gens = vec![parse(&c, 3, "x0^2"), parse(&c, 3, "x0*x1")];
        let ell = LinForm::new(&c, vec![c.from_i64(3), c.from_i64(5), c.from_i64(7)]);
        let sat = saturate_by_linear(&Ideal::new(&c, 3, gens.clone()), &ell).unwrap();
        let gb = buchberger(&sat).unwrap();
        let gb0 = buchberger(&Ideal::new(&c, 3, gens)).unwrap();
        assert_eq!(gb, gb0);
        // an irrelevant embedded component does get removed
        let gens = vec![
            parse(&c, 3, "x0^2"),
            parse(&c, 3, "x0*x1"),
            parse(&c, 3, "x0*x2"),
        ];
        let ell = LinForm::new(&c, vec![c.from_i64(3), c.from_i64(5), c.from_i64(7)]);
        let sat = saturate_by_linear(&Ideal::new(&c, 3, gens), &ell).unwrap();
        let gb = buchberger(&sat).unwrap();
        assert_eq!(gb.gens.len(), 1);
        assert_eq!(gb.gens[0], parse(&c, 3, "x0"));
    }

    #[test]
    fn graded_piece_dimensions() {
        let c = ctx();
        let gens = vec![parse(&c, 3, "x0^2 - x1*x2")];
        let gb = buchberger(&Ideal::new(&c, 3, gens)).unwrap();
        assert_eq!(graded_piece(&gb, 1).len(), 0);
        assert_eq!(graded_piece(&gb, 2).len(), 1);
        // degree 3 piece of a principal quadric ideal: 3 monomial multiples
        assert_eq!(graded_piece(&gb, 3).len(), 3);
    }

    #[test]
    fn solve_rational_points() {
        let c = ctx();
        // V(x0^2 - x1^2, x0 x2 - x1 x2) in P^2 with x2 generic:
        // points (1 : 1 : t) union (1 : -1 : 0) plus (0:0:1)
        let gens = vec![
            parse(&c, 3, "x0^2 - x1^2"),
            parse(&c, 3, "x0*x2 - x1*x2"),
            parse(&c, 3, "x0*x1 - x1^2"),
        ];
        // intersect with a generic quadric to cut dimension
        let gb = buchberger(&Ideal::new(&c, 3, gens.clone())).unwrap();
        let h = hilbert(&gb).unwrap();
        assert_eq!(h.dim, 1);
        // simpler direct zero-dimensional example: three coordinate points
        let gens = vec![
            parse(&c, 3, "x0*x1"),
            parse(&c, 3, "x0*x2"),
            parse(&c, 3, "x1*x2"),
        ];
        let sol = solve_zero_dim(&Ideal::new(&c, 3, gens), 7).unwrap();
        assert_eq!(sol.length, 3);
        assert_eq!(sol.points.len(), 3);
        for p in &sol.points {
            assert_eq!(p.multiplicity, 1);
            assert_eq!(p.residue_degree, 1);
            let nz: Vec<usize> = (0..3).filter(|&i| !c.is_zero(&p.coords[i])).collect();
            assert_eq!(nz.len(), 1, "expected a coordinate point");
        }
    }

    #[test]
    fn solve_irrational_pair() {
        let c = FieldCtx::prime(10007).unwrap();
        // x0^2 = 5 x1^2 in P^1; 5 is a non-square mod 10007
        let mut is_sq = false;
        for t in 1..10007u64 {
            if (t * t) % 10007 == 5 {
                is_sq = true;
                break;
            }
        }
        assert!(!is_sq);
        let gens = vec![parse(&c, 2, "x0^2 - 5*x1^2")];
        let sol = solve_zero_dim(&Ideal::new(&c, 2, gens), 11).unwrap();
        assert_eq!(sol.length, 2);
        assert_eq!(sol.points.len(), 1);
        let p = &sol.points[0];
        assert_eq!(p.residue_degree, 2);
        // the point satisfies the equation in its residue field
        let k = &p.ctx;
        let lhs = k.mul(&p.coords[0], &p.coords[0]);
        let rhs = k.mul(&k.from_i64(5), &k.mul(&p.coords[1], &p.coords[1]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn solve_counts_multiplicity() {
        let c = ctx();
        // double point: (x0 - x1)^2 = 0 in P^1
        let gens = vec![parse(&c, 2, "x0^2 - 2*x0*x1 + x1^2")];
        let sol = solve_zero_dim(&Ideal::new(&c, 2, gens), 13).unwrap();
        assert_eq!(sol.length, 2);
        assert_eq!(sol.points.len(), 1);
        assert_eq!(sol.points[0].multiplicity, 2);
        let p = &sol.points[0];
        assert_eq!(p.coords[0], p.coords[1]);
    }
}
