//! The end-to-end pipeline: random genus-8 K3 instances, their apolar and
//! Pfaffian cubics, the length-10 apolar subscheme attached to a secant
//! line of the surface, exact power-sum presentations, the 10:1 and 6:1
//! incidence counts, the fixed 10-point rank example, and the degree
//! bookkeeping for the preimages of linear spaces under the Cremona
//! transformation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apolarity::{
    self, apolar_profile, conjugate_expand, dual_socle_generator, powersum_certify,
    terracini_rank, CubicForm,
};
use crate::error::Error;
use crate::field::{Elem, FieldCtx};
use crate::groebner::{
    buchberger, graded_piece, hilbert, is_projectively_empty, normal_form, saturate_by_linear,
    solve_zero_dim, Ideal, ZeroDimSolution,
};
use crate::linalg::{Mat, Subspace};
use crate::pluecker::{
    contact_cone_matrix, cremona_phi, pair_index, pfaffian6_poly, quadric_data_of_line,
    quadric_table, rank_support, rank_support_dual, signed_quadric_table, two_by_two_minors,
    DualTwoVector, TwoVector, N15,
};
use crate::poly::{LinForm, Monomial, Poly};
use crate::unipoly::{self, UniPoly};

/// Cap on the degree of the compositum used for conjugate expansion.
pub const MAX_COMPOSITUM: usize = 60;

/// A genus-8 K3 surface instance: a general 9-dimensional subspace of the
/// dual Pluecker space, its perpendicular 6-space, and the two associated
/// cubics in six variables.
#[derive(Clone, Debug)]
pub struct K3Instance {
    pub ctx: FieldCtx,
    pub seed: u64,
    /// dim 9 subspace of the dual 15-space; S is the dual Grassmannian
    /// sliced by it.
    pub l_s: Subspace,
    /// dim 6 subspace of the 15-space, the annihilator of l_s.
    pub p_s: Subspace,
    /// the 15 Pluecker quadrics in the 6 coordinates of p_s.
    pub restricted_quadrics: Vec<Poly>,
    /// apolar cubic: dual socle generator of the restricted quadrics.
    pub f: CubicForm,
    /// Pfaffian cubic: the 6x6 Pfaffian restricted to p_s.
    pub m_p: CubicForm,
    /// the 15 dual Pluecker quadrics in the 9 coordinates of l_s.
    pub s_ideal: Ideal,
}

fn random_subspace<R: Rng>(ctx: &FieldCtx, ambient: usize, dim: usize, rng: &mut R) -> Subspace {
    loop {
        let rows: Vec<Vec<Elem>> = (0..dim)
            .map(|_| (0..ambient).map(|_| ctx.random(rng)).collect())
            .collect();
        let s = Subspace::from_rows(ctx, ambient, rows);
        if s.dim() == dim {
            return s;
        }
    }
}

/// Sample a K3 instance deterministically from (seed, prime ctx), gated by
/// the instance invariants with bounded retries.
pub fn k3_random(seed: u64, ctx: &FieldCtx) -> Result<K3Instance, Error> {
    k3_random_with_retries(seed, ctx, 50)
}

pub fn k3_random_with_retries(
    seed: u64,
    ctx: &FieldCtx,
    retries: usize,
) -> Result<K3Instance, Error> {
    if ctx.characteristic() == 0 || ctx.degree() != 1 || ctx.characteristic() <= 3 {
        return Err(Error::InvalidInput(
            "instances are sampled over prime fields with p > 3".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..retries {
        let l_s = random_subspace(ctx, N15, 9, &mut rng);
        match instance_from_subspace(seed, ctx, l_s) {
            Ok(inst) => return Ok(inst),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::RetryExhausted(format!(
        "no admissible instance in {retries} samples (last: {last})"
    )))
}

/// Build (and validate) an instance from an explicit 9-dimensional subspace
/// of the dual 15-space.  Used both by random sampling and when reloading a
/// stored instance.
pub fn instance_from_subspace(
    seed: u64,
    ctx: &FieldCtx,
    l_s: Subspace,
) -> Result<K3Instance, Error> {
    if l_s.dim() != 9 || l_s.ambient != N15 {
        return Err(Error::InvalidInput(
            "expected a 9-dimensional subspace of the 15-space".into(),
        ));
    }
    let quadrics = quadric_table(ctx);
    let p_s = l_s.annihilator();
    debug_assert_eq!(p_s.dim(), 6);
    // the 6-space must miss the Grassmannian
    let restricted: Vec<Poly> = quadrics
        .iter()
        .map(|q| q.substitute_linear(&p_s.basis))
        .collect::<Result<_, _>>()?;
    let gb = buchberger(&Ideal::new(ctx, 6, restricted.clone()))?;
    if !is_projectively_empty(&gb)? {
        return Err(Error::NonGeneric("6-space meets the Grassmannian".into()));
    }
    let f = dual_socle_generator(&restricted)
        .map_err(|e| Error::NonGeneric(format!("socle: {e}")))?;
    let profile = apolar_profile(&f)?;
    if profile.h != [1, 6, 6, 1] {
        return Err(Error::NonGeneric(format!("profile {:?}", profile.h)));
    }
    let m_p_poly = pfaffian6_poly(ctx).substitute_linear(&p_s.basis)?;
    let m_p = CubicForm::new(m_p_poly)
        .map_err(|_| Error::NonGeneric("degenerate Pfaffian restriction".into()))?;
    // the surface: dual quadrics restricted to l_s, dim 2 degree 14
    let s_gens: Vec<Poly> = quadrics
        .iter()
        .map(|q| q.substitute_linear(&l_s.basis))
        .collect::<Result<_, _>>()?;
    let s_ideal = Ideal::new(ctx, 9, s_gens);
    let sh = hilbert(&buchberger(&s_ideal)?)?;
    if (sh.dim, sh.degree) != (2, 14) {
        return Err(Error::NonGeneric(format!(
            "surface invariants ({}, {})",
            sh.dim, sh.degree
        )));
    }
    Ok(K3Instance {
        ctx: ctx.clone(),
        seed,
        l_s,
        p_s,
        restricted_quadrics: restricted,
        f,
        m_p,
        s_ideal,
    })
}

/// A point of the surface in ambient dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPoint {
    pub coords: Vec<Elem>,
}

/// Collect prime-field points of S by slicing with random codimension-2
/// subspaces and solving the resulting length-14 schemes.
pub fn s_points(inst: &K3Instance, count: usize, seed: u64) -> Result<Vec<SPoint>, Error> {
    let ctx = &inst.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5_90_17_75);
    let mut found: Vec<SPoint> = vec![];
    for attempt in 0..40 {
        if found.len() >= count {
            break;
        }
        let mut gens = inst.s_ideal.gens.clone();
        for _ in 0..2 {
            gens.push(Poly::from_terms(
                ctx,
                9,
                (0..9)
                    .map(|i| (Monomial::var(9, i), ctx.random(&mut rng)))
                    .collect(),
            ));
        }
        let sol = match solve_zero_dim(&Ideal::new(ctx, 9, gens), seed.wrapping_add(attempt)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if sol.length != 14 {
            continue;
        }
        for p in &sol.points {
            if p.residue_degree != 1 || p.multiplicity != 1 {
                continue;
            }
            // ambient coordinates: combination of the l_s basis
            let coords: Vec<Elem> = (0..N15)
                .map(|k| {
                    let mut acc = ctx.zero();
                    for (i, c) in p.coords.iter().enumerate() {
                        acc = ctx.add(&acc, &ctx.mul(c, &inst.l_s.basis[i][k]));
                    }
                    acc
                })
                .collect();
            let pt = SPoint { coords };
            if found.iter().any(|q| projectively_equal(ctx, &q.coords, &pt.coords)) {
                continue;
            }
            // sanity: rank 2 and in l_s
            let dv = DualTwoVector::new(ctx, pt.coords.clone());
            let (rank, _, _) = rank_support_dual(&dv)?;
            if rank != 2 {
                return Err(Error::CheckFailed("surface point is not rank 2".into()));
            }
            found.push(pt);
            if found.len() >= count {
                break;
            }
        }
    }
    if found.len() < count {
        return Err(Error::RetryExhausted(format!(
            "found only {} rational surface points in 40 slices",
            found.len()
        )));
    }
    Ok(found)
}

fn projectively_equal(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> bool {
    let i = match a.iter().position(|c| !ctx.is_zero(c)) {
        Some(i) => i,
        None => return false,
    };
    if ctx.is_zero(&b[i]) {
        return false;
    }
    let r = ctx.div(&b[i], &a[i]).unwrap();
    a.iter().zip(b).all(|(x, y)| *y == ctx.mul(&r, x))
}

/// A proper secant line of the surface, spanned by two of its points.
#[derive(Clone, Debug)]
pub struct SecantLine {
    pub a1: DualTwoVector,
    pub a2: DualTwoVector,
}

impl SecantLine {
    pub fn new(ctx: &FieldCtx, p1: &[Elem], p2: &[Elem]) -> Result<SecantLine, Error> {
        let a1 = DualTwoVector::new(ctx, p1.to_vec());
        let a2 = DualTwoVector::new(ctx, p2.to_vec());
        let (r1, s1, _) = rank_support_dual(&a1)?;
        let (r2, s2, _) = rank_support_dual(&a2)?;
        if r1 != 2 || r2 != 2 {
            return Err(Error::InvalidInput("secant endpoints must have rank 2".into()));
        }
        if s1.sum(&s2).dim() != 4 {
            return Err(Error::NonGeneric(
                "supports do not span a 4-space; line is not a proper secant".into(),
            ));
        }
        Ok(SecantLine { a1, a2 })
    }
}

/// The 11 quadrics on the 6-space cutting out the length-10 subscheme of a
/// secant line: linear functionals vanishing on the polar 3-space,
/// composed with the signed quadric map and restricted to p_s.
pub fn gamma_generators(
    inst: &K3Instance,
    line: &SecantLine,
    ctx: &FieldCtx,
) -> Result<Vec<Poly>, Error> {
    let a1 = DualTwoVector::new(ctx, embed_vec(&line.a1.coords, &line.a1.ctx, ctx)?);
    let a2 = DualTwoVector::new(ctx, embed_vec(&line.a2.coords, &line.a2.ctx, ctx)?);
    let data = quadric_data_of_line(&a1, &a2)?;
    let functionals = data.p_line.annihilator();
    if functionals.dim() != 11 {
        return Err(Error::NonGeneric("polar 3-space is degenerate".into()));
    }
    let signed = signed_quadric_table(ctx);
    let basis: Vec<Vec<Elem>> = inst
        .p_s
        .basis
        .iter()
        .map(|row| embed_vec(row, &inst.ctx, ctx))
        .collect::<Result<_, _>>()?;
    let mut out = vec![];
    for w in &functionals.basis {
        let mut q = Poly::zero(ctx, N15);
        for (k, c) in w.iter().enumerate() {
            q = q.add(&signed[k].scale(c));
        }
        out.push(q.substitute_linear(&basis)?);
    }
    Ok(out)
}

fn embed_vec(v: &[Elem], source: &FieldCtx, target: &FieldCtx) -> Result<Vec<Elem>, Error> {
    if source == target {
        return Ok(v.to_vec());
    }
    v.iter().map(|c| unipoly::embed(c, source, target)).collect()
}

/// The length-10 apolar subscheme of a secant line, fully solved.
#[derive(Clone, Debug)]
pub struct GammaScheme {
    pub line: SecantLine,
    pub generators: Vec<Poly>,
    pub solution: ZeroDimSolution,
}

pub fn gamma_of_secant(inst: &K3Instance, line: &SecantLine) -> Result<GammaScheme, Error> {
    let ctx = &inst.ctx;
    if line.a1.ctx != *ctx {
        return Err(Error::CtxMismatch("secant line over a different field".into()));
    }
    let gens = gamma_generators(inst, line, ctx)?;
    let gb = buchberger(&Ideal::new(ctx, 6, gens.clone()))?;
    let h = hilbert(&gb)?;
    if h.dim != 0 {
        return Err(Error::NonGeneric(format!(
            "subscheme has projective dimension {}",
            h.dim
        )));
    }
    if h.degree != 10 {
        return Err(Error::NonGeneric(format!(
            "subscheme has length {}, expected 10",
            h.degree
        )));
    }
    let solution = solve_zero_dim(&Ideal::new(ctx, 6, gens.clone()), inst.seed)?;
    if solution.length != 10 {
        return Err(Error::NonGeneric(format!(
            "solver length {} does not match 10",
            solution.length
        )));
    }
    // every point satisfies the generators and lies on the Pfaffian cubic
    for p in &solution.points {
        for g in &gens {
            if !p.ctx.is_zero(&g.evaluate_in(&p.ctx, &p.coords)?) {
                return Err(Error::CheckFailed("solved point misses a generator".into()));
            }
        }
        if !p.ctx.is_zero(&inst.m_p.poly.evaluate_in(&p.ctx, &p.coords)?) {
            return Err(Error::CheckFailed(
                "solved point is off the Pfaffian cubic".into(),
            ));
        }
    }
    Ok(GammaScheme {
        line: line.clone(),
        generators: gens,
        solution,
    })
}

/// An exact power-sum presentation of the apolar cubic.
#[derive(Clone, Debug)]
pub struct PowerSumPresentation {
    pub ctx: FieldCtx,
    pub points: Vec<Vec<Elem>>,
    pub lambdas: Vec<Elem>,
}

pub fn decompose(inst: &K3Instance, gamma: &GammaScheme) -> Result<PowerSumPresentation, Error> {
    for p in &gamma.solution.points {
        if p.multiplicity != 1 {
            return Err(Error::NonGeneric("subscheme is not reduced".into()));
        }
    }
    let closed: Vec<(FieldCtx, Vec<Elem>)> = gamma
        .solution
        .points
        .iter()
        .map(|p| (p.ctx.clone(), p.coords.clone()))
        .collect();
    let (big, points) = conjugate_expand(&inst.ctx, &closed, MAX_COMPOSITUM)?;
    if points.len() != 10 {
        return Err(Error::CheckFailed(format!(
            "conjugate expansion yielded {} points",
            points.len()
        )));
    }
    let ps = powersum_certify(&big, &points, &inst.f)?;
    if ps.rank != 10 {
        return Err(Error::NonGeneric(format!(
            "cube span has rank {}, expected 10",
            ps.rank
        )));
    }
    if !ps.exact {
        return Err(Error::CheckFailed(
            "power-sum residual is nonzero; presentation failed".into(),
        ));
    }
    Ok(PowerSumPresentation {
        ctx: big,
        points,
        lambdas: ps.lambdas,
    })
}

/// Report of the 10:1 direction: the subscheme consists of 10 distinct
/// points, all of rank 4 on the Pfaffian cubic.
pub struct TenfoldReport {
    pub distinct: bool,
    pub on_pfaffian: bool,
    pub all_rank4: bool,
}

impl TenfoldReport {
    pub fn ok(&self) -> bool {
        self.distinct && self.on_pfaffian && self.all_rank4
    }
}

pub fn tenfold_check(inst: &K3Instance, gamma: &GammaScheme) -> Result<TenfoldReport, Error> {
    let closed: Vec<(FieldCtx, Vec<Elem>)> = gamma
        .solution
        .points
        .iter()
        .map(|p| (p.ctx.clone(), p.coords.clone()))
        .collect();
    let (big, points) = conjugate_expand(&inst.ctx, &closed, MAX_COMPOSITUM)?;
    let mut distinct = points.len() == 10
        && gamma.solution.points.iter().all(|p| p.multiplicity == 1);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if projectively_equal(&big, &points[i], &points[j]) {
                distinct = false;
            }
        }
    }
    let mut on_pfaffian = true;
    let mut all_rank4 = true;
    let basis: Vec<Vec<Elem>> = inst
        .p_s
        .basis
        .iter()
        .map(|row| embed_vec(row, &inst.ctx, &big))
        .collect::<Result<_, _>>()?;
    let m_p = inst.m_p.poly.embed_ctx(&big)?;
    for pt in &points {
        if !big.is_zero(&m_p.evaluate(pt)?) {
            on_pfaffian = false;
        }
        // ambient 15-space coordinates and skew rank
        let amb: Vec<Elem> = (0..N15)
            .map(|k| {
                let mut acc = big.zero();
                for (i, c) in pt.iter().enumerate() {
                    acc = big.add(&acc, &big.mul(c, &basis[i][k]));
                }
                acc
            })
            .collect();
        let (rank, _, _) = rank_support(&TwoVector::new(&big, amb))?;
        if rank != 4 {
            all_rank4 = false;
        }
    }
    Ok(TenfoldReport {
        distinct,
        on_pfaffian,
        all_rank4,
    })
}

/// Sample a prime-field point of the Pfaffian cubic in the 6 coordinates
/// of p_s, by intersecting random lines with the cubic.
pub fn f_prime_point<R: Rng>(inst: &K3Instance, rng: &mut R) -> Result<Vec<Elem>, Error> {
    let ctx = &inst.ctx;
    for _ in 0..200 {
        let a: Vec<Elem> = (0..6).map(|_| ctx.random(rng)).collect();
        let b: Vec<Elem> = (0..6).map(|_| ctx.random(rng)).collect();
        // restrict the cubic to the line a + t b by sampling at 4 points
        // and interpolating the univariate cubic
        let xs: Vec<Elem> = (0..4).map(|v| ctx.from_i64(v)).collect();
        let mut ys = vec![];
        for x in &xs {
            let pt: Vec<Elem> = a
                .iter()
                .zip(&b)
                .map(|(u, v)| ctx.add(u, &ctx.mul(x, v)))
                .collect();
            ys.push(inst.m_p.poly.evaluate(&pt)?);
        }
        // Lagrange through 4 samples
        let mut uni = UniPoly::zero(ctx);
        for (i, xi) in xs.iter().enumerate() {
            let mut num = UniPoly::constant(ctx, ys[i].clone());
            let mut den = ctx.one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    num = num.mul(&UniPoly::new(ctx.clone(), vec![ctx.neg(xj), ctx.one()]));
                    den = ctx.mul(&den, &ctx.sub(xi, xj));
                }
            }
            uni = uni.add(&num.scale(&ctx.inv(&den)?));
        }
        if uni.is_zero() {
            continue;
        }
        let factors = unipoly::factor_univariate(&uni)?;
        for (fac, _) in factors {
            if fac.degree() == Some(1) {
                let c0 = fac.eval(&ctx.zero());
                let c1 = fac.lead().unwrap().clone();
                let t = ctx.neg(&ctx.div(&c0, &c1)?);
                let pt: Vec<Elem> = a
                    .iter()
                    .zip(&b)
                    .map(|(u, v)| ctx.add(u, &ctx.mul(&t, v)))
                    .collect();
                if pt.iter().all(|c| ctx.is_zero(c)) {
                    continue;
                }
                // require rank 4 in the ambient space (off the Grassmannian)
                let amb = ambient_of(inst, &pt)?;
                let (rank, _, _) = rank_support(&TwoVector::new(ctx, amb))?;
                if rank == 4 {
                    return Ok(pt);
                }
            }
        }
    }
    Err(Error::RetryExhausted(
        "no rational Pfaffian-cubic point found".into(),
    ))
}

fn ambient_of(inst: &K3Instance, pt: &[Elem]) -> Result<Vec<Elem>, Error> {
    let ctx = &inst.ctx;
    Ok((0..N15)
        .map(|k| {
            let mut acc = ctx.zero();
            for (i, c) in pt.iter().enumerate() {
                acc = ctx.add(&acc, &ctx.mul(c, &inst.p_s.basis[i][k]));
            }
            acc
        })
        .collect())
}

/// Per-line record of the 6:1 check.
pub struct IncidenceLine {
    pub endpoints: (usize, usize),
    pub member: bool,
}

/// Report of the 6:1 incidence check at a probe point of the Pfaffian
/// cubic.
pub struct IncidenceReport {
    /// probe in the 6 coordinates of p_s.
    pub probe: Vec<Elem>,
    /// residue degrees of the 4 scroll points.
    pub scroll_degrees: Vec<usize>,
    pub split: bool,
    pub lines: Vec<IncidenceLine>,
}

impl IncidenceReport {
    pub fn all_member(&self) -> bool {
        self.lines.len() == 6 && self.lines.iter().all(|l| l.member)
    }
}

pub fn sixfold_incidence(inst: &K3Instance, probe: &[Elem]) -> Result<IncidenceReport, Error> {
    let ctx = &inst.ctx;
    if probe.len() != 6 {
        return Err(Error::DimensionMismatch("probe needs 6 coordinates".into()));
    }
    if !ctx.is_zero(&inst.m_p.poly.evaluate(probe)?) {
        return Err(Error::InvalidInput("probe is not on the Pfaffian cubic".into()));
    }
    let amb = ambient_of(inst, probe)?;
    let g = TwoVector::new(ctx, amb);
    let (rank, _, _) = rank_support(&g)?;
    if rank != 4 {
        return Err(Error::InvalidInput(format!(
            "probe has rank {rank}, expected 4"
        )));
    }
    // tangent space and contact-cone matrix at the image point
    let alpha = cremona_phi(&g)?;
    let alpha_tv = TwoVector::new(ctx, alpha.coords.clone());
    let cone = contact_cone_matrix(&alpha_tv)?;
    let window = cone.tangent.intersect(&inst.l_s);
    if window.dim() != 4 {
        return Err(Error::NonGeneric(format!(
            "tangent window has dimension {}, expected 4",
            window.dim()
        )));
    }
    // scroll equations restricted to the window
    let minors = two_by_two_minors(&cone.n_mat);
    let restricted: Vec<Poly> = minors
        .iter()
        .map(|m| m.substitute_linear(&window.basis))
        .collect::<Result<_, _>>()?;
    let gb = buchberger(&Ideal::new(ctx, 4, restricted.clone()))?;
    let h = hilbert(&gb)?;
    if h.dim != 0 || h.degree != 4 {
        return Err(Error::NonGeneric(format!(
            "scroll slice has (dim, degree) = ({}, {}), expected (0, 4)",
            h.dim, h.degree
        )));
    }
    let sol = solve_zero_dim(&Ideal::new(ctx, 4, restricted), inst.seed ^ 0x6f01)?;
    if sol.length != 4 || sol.points.iter().any(|p| p.multiplicity != 1) {
        return Err(Error::NonGeneric("scroll slice is not 4 reduced points".into()));
    }
    let scroll_degrees: Vec<usize> = sol.points.iter().map(|p| p.residue_degree).collect();
    let split = scroll_degrees.iter().all(|&d| d == 1);
    // expand to 4 actual points over the compositum, in window coordinates
    let closed: Vec<(FieldCtx, Vec<Elem>)> = sol
        .points
        .iter()
        .map(|p| (p.ctx.clone(), p.coords.clone()))
        .collect();
    let (big, pts4) = conjugate_expand(ctx, &closed, MAX_COMPOSITUM)?;
    if pts4.len() != 4 {
        return Err(Error::NonGeneric("expected 4 scroll points".into()));
    }
    // ambient dual coordinates of the 4 surface points
    let window_basis: Vec<Vec<Elem>> = window
        .basis
        .iter()
        .map(|row| embed_vec(row, ctx, &big))
        .collect::<Result<_, _>>()?;
    let dual_points: Vec<Vec<Elem>> = pts4
        .iter()
        .map(|p| {
            (0..N15)
                .map(|k| {
                    let mut acc = big.zero();
                    for (i, c) in p.iter().enumerate() {
                        acc = big.add(&acc, &big.mul(c, &window_basis[i][k]));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    // each lies on the surface: rank 2 and inside l_s by construction
    for dp in &dual_points {
        let (r, _, _) = rank_support_dual(&DualTwoVector::new(&big, dp.clone()))?;
        if r != 2 {
            return Err(Error::CheckFailed("scroll point is not rank 2".into()));
        }
    }
    // the 6 secant lines and membership of the probe in each subscheme
    let probe_big = embed_vec(probe, ctx, &big)?;
    let mut lines = vec![];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let line = SecantLine::new(&big, &dual_points[i], &dual_points[j])?;
            let gens = gamma_generators(inst, &line, &big)?;
            let member = gens
                .iter()
                .map(|q| q.evaluate(&probe_big))
                .collect::<Result<Vec<_>, _>>()?
                .iter()
                .all(|v| big.is_zero(v));
            lines.push(IncidenceLine {
                endpoints: (i, j),
                member,
            });
        }
    }
    Ok(IncidenceReport {
        probe: probe.to_vec(),
        scroll_degrees,
        split,
        lines,
    })
}

// ---- the fixed 10-point example ----------------------------------------

/// The two 2x4 matrices of linear forms whose combined 2x2 minors cut out
/// 10 points in projective 5-space.
pub fn ten_point_matrices(ctx: &FieldCtx) -> [Vec<Vec<Poly>>; 2] {
    let v = |i: usize| Poly::var(ctx, 6, i);
    let a = vec![
        vec![v(0), v(2), v(4), v(0).add(&v(5))],
        vec![v(1), v(3), v(5), v(3).add(&v(4))],
    ];
    let b = vec![
        vec![v(0), v(1), v(1).add(&v(2)), v(1).add(&v(5))],
        vec![v(2), v(3), v(4).sub(&v(5)), v(0).add(&v(3))],
    ];
    [a, b]
}

pub struct TenPointReport {
    pub length: i64,
    pub dim: i64,
    pub shared_minor: bool,
    pub terracini: usize,
    pub distinct_points: bool,
}

impl TenPointReport {
    pub fn ok(&self) -> bool {
        self.length == 10 && self.dim == 0 && self.shared_minor && self.terracini == 56
    }
}

/// Verify the fixed example: the two matrices drop rank along 10 points,
/// the matrices share the minor x0 x3 - x1 x2, and no cubic hypersurface
/// is singular along the 10 points.
pub fn lemma_ten_points(ctx: &FieldCtx) -> Result<TenPointReport, Error> {
    let [a, b] = ten_point_matrices(ctx);
    let mut gens = two_by_two_minors(&a);
    let minors_b = two_by_two_minors(&b);
    let shared = gens[0].clone(); // columns (0,1) of the first matrix
    let shared_minor = minors_b.iter().any(|m| {
        m == &shared || m == &shared.neg()
    });
    gens.extend(minors_b);
    let gb = buchberger(&Ideal::new(ctx, 6, gens.clone()))?;
    let h = hilbert(&gb)?;
    if ctx.characteristic() > 0 {
        // solve, expand conjugates, and apply the tangent-rank criterion
        let sol = solve_zero_dim(&Ideal::new(ctx, 6, gens), 318)?;
        let closed: Vec<(FieldCtx, Vec<Elem>)> = sol
            .points
            .iter()
            .map(|p| (p.ctx.clone(), p.coords.clone()))
            .collect();
        let (big, pts) = conjugate_expand(ctx, &closed, MAX_COMPOSITUM)?;
        let mut distinct = pts.len() == 10;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if projectively_equal(&big, &pts[i], &pts[j]) {
                    distinct = false;
                }
            }
        }
        let terracini = terracini_rank(&big, &pts)?;
        Ok(TenPointReport {
            length: h.degree,
            dim: h.dim,
            shared_minor,
            terracini,
            distinct_points: distinct,
        })
    } else {
        // over the rationals: reducedness via a squarefree minimal
        // polynomial, then the dual formulation of the rank condition
        let distinct = rational_scheme_reduced(&Ideal::new(ctx, 6, gens.clone()))?;
        let terracini = rational_tangent_rank(&Ideal::new(ctx, 6, gens))?;
        Ok(TenPointReport {
            length: h.degree,
            dim: h.dim,
            shared_minor,
            terracini,
            distinct_points: distinct,
        })
    }
}

/// A zero-dimensional projective scheme over the rationals is reduced when
/// the multiplication operator by a generic linear form on a generic
/// affine chart has a squarefree characteristic polynomial.
fn rational_scheme_reduced(ideal: &Ideal) -> Result<bool, Error> {
    let ctx = &ideal.ctx;
    let n = ideal.nvars;
    let mut rng = ChaCha8Rng::seed_from_u64(318318);
    // generic chart: substitute an invertible integer matrix, set last = 1
    'chart: for _ in 0..5 {
        let a_rows: Vec<Vec<Elem>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| ctx.from_i64(rng.gen_range(-9i64..10)))
                    .collect()
            })
            .collect();
        let a = Mat::from_rows(ctx, a_rows);
        if ctx.is_zero(&a.det()) {
            continue;
        }
        let cols: Vec<Vec<Elem>> = (0..n)
            .map(|j| (0..n).map(|i| a.at(i, j).clone()).collect())
            .collect();
        let affine: Vec<Poly> = ideal
            .gens
            .iter()
            .map(|g| {
                let h = g.substitute_linear(&cols)?;
                Ok(dehomog(&h))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let gb = buchberger(&Ideal::new(ctx, n - 1, affine))?;
        let leads: Vec<Monomial> = gb.gens.iter().map(|g| g.lead().unwrap().0.clone()).collect();
        let basis = match standard_monomials_pub(n - 1, &leads, 100) {
            Some(b) => b,
            None => continue 'chart,
        };
        let len = basis.len();
        let idx: std::collections::HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let u = Poly::from_terms(
            ctx,
            n - 1,
            (0..n - 1)
                .map(|i| (Monomial::var(n - 1, i), ctx.from_i64(rng.gen_range(1i64..50))))
                .collect(),
        );
        let mut mu = Mat::zero(ctx, len, len);
        for (c, bm) in basis.iter().enumerate() {
            let nf = normal_form(&u.mul_term(bm, &ctx.one()), &gb.gens);
            for (m, co) in &nf.terms {
                *mu.at_mut(idx[m], c) = co.clone();
            }
        }
        // characteristic polynomial by interpolation
        let xs: Vec<Elem> = (0..=len as i64).map(|v| ctx.from_i64(v)).collect();
        let ys: Vec<Elem> = xs
            .iter()
            .map(|x| {
                let mut t = mu.clone();
                for d in 0..len {
                    *t.at_mut(d, d) = ctx.sub(x, mu.at(d, d));
                }
                for r in 0..len {
                    for c in 0..len {
                        if r != c {
                            *t.at_mut(r, c) = ctx.neg(mu.at(r, c));
                        }
                    }
                }
                t.det()
            })
            .collect();
        let mut cp = UniPoly::zero(ctx);
        for (i, xi) in xs.iter().enumerate() {
            let mut num = UniPoly::constant(ctx, ys[i].clone());
            let mut den = ctx.one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    num = num.mul(&UniPoly::new(ctx.clone(), vec![ctx.neg(xj), ctx.one()]));
                    den = ctx.mul(&den, &ctx.sub(xi, xj));
                }
            }
            cp = cp.add(&num.scale(&ctx.inv(&den)?));
        }
        let g = cp.gcd(&cp.derivative());
        return Ok(g.degree() == Some(0) && len == 10);
    }
    Err(Error::RetryExhausted("no generic chart found".into()))
}

fn dehomog(p: &Poly) -> Poly {
    let n = p.nvars;
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| (Monomial(m.0[..n - 1].to_vec()), c.clone()))
        .collect();
    Poly::from_terms(&p.ctx, n - 1, terms)
}

fn standard_monomials_pub(nvars: usize, leads: &[Monomial], cap: usize) -> Option<Vec<Monomial>> {
    let mut out: Vec<Monomial> = vec![];
    let mut queue = vec![Monomial::one(nvars)];
    let mut seen = std::collections::HashSet::new();
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

/// Dual form of the tangent-span rank for a reduced scheme of 10 points:
/// rank 56 means the only cubic whose six partials all vanish on the
/// scheme is zero. Works over any field without solving for points.
fn rational_tangent_rank(ideal: &Ideal) -> Result<usize, Error> {
    let ctx = &ideal.ctx;
    let ell = LinForm::new(
        ctx,
        (0..6).map(|i| ctx.from_i64(2 * i as i64 + 3)).collect(),
    );
    let sat = saturate_by_linear(ideal, &ell)?;
    let gb = buchberger(&sat)?;
    let quadrics = graded_piece(&gb, 2);
    // subspace of the 21-dim quadric space
    let rows: Vec<Vec<Elem>> = quadrics
        .iter()
        .map(|q| apolarity::coeff_vector(q, 2))
        .collect();
    let qspace = Subspace::from_rows(ctx, 21, rows);
    let complement_checks = qspace.annihilator();
    // unknown cubic: 56 coefficients; constraints: every functional in the
    // annihilator applied to each partial derivative
    let cubics = crate::groebner::monomials_of_degree(6, 3);
    let mut rows: Vec<Vec<Elem>> = vec![];
    for i in 0..6 {
        let d = Poly::var(ctx, 6, i);
        for func in &complement_checks.basis {
            let mut row = vec![ctx.zero(); cubics.len()];
            for (col, mono) in cubics.iter().enumerate() {
                let mp = Poly::from_terms(ctx, 6, vec![(mono.clone(), ctx.one())]);
                let partial = d.apply_diff(&mp)?;
                let vec2 = apolarity::coeff_vector(&partial, 2);
                let mut acc = ctx.zero();
                for (x, y) in vec2.iter().zip(func) {
                    acc = ctx.add(&acc, &ctx.mul(x, y));
                }
                row[col] = acc;
            }
            rows.push(row);
        }
    }
    Ok(Mat::from_rows(ctx, rows).rank())
}

// ---- degrees of Cremona preimages --------------------------------------

pub struct DegreeCheck {
    pub name: String,
    pub expected: (i64, i64),
    pub observed: (i64, i64),
    pub containment_ok: bool,
}

impl DegreeCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.observed && self.containment_ok
    }
}

/// The preimage-degree computations: the cubic scroll over a line, the two
/// kinds of planes, and the degree-10 locus of a polar 3-space.
pub fn degree_suite(ctx: &FieldCtx) -> Result<Vec<DegreeCheck>, Error> {
    let q = quadric_table(ctx);
    let x = |i: usize, j: usize| Poly::var(ctx, N15, pair_index(i, j));
    let mut out = vec![];

    // line preimage: minors of a 2x3 matrix inside a codimension-6 space
    {
        let rows = [
            [x(1, 3), x(1, 4), x(1, 5)],
            [x(2, 3), x(2, 4), x(2, 5)],
        ];
        let mut gens = vec![];
        for a in 0..3 {
            for b in (a + 1)..3 {
                gens.push(rows[0][a].mul(&rows[1][b]).sub(&rows[0][b].mul(&rows[1][a])));
            }
        }
        for (i, j) in [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2)] {
            gens.push(x(i, j));
        }
        let gb = buchberger(&Ideal::new(ctx, N15, gens))?;
        let h = hilbert(&gb)?;
        // every quadric except the two defining the line vanishes here
        let keep = [pair_index(0, 1), pair_index(0, 2)];
        let containment_ok = q
            .iter()
            .enumerate()
            .filter(|(k, _)| !keep.contains(k))
            .all(|(_, qq)| normal_form(qq, &gb.gens).is_zero());
        out.push(DegreeCheck {
            name: "line_preimage_scroll".into(),
            expected: (6, 3),
            observed: (h.dim, h.degree),
            containment_ok,
        });
    }

    // plane of the first kind: 3x3 minors pattern (2x2 minors of the 3x3)
    {
        let rows = [
            [x(0, 3), x(0, 4), x(0, 5)],
            [x(1, 3), x(1, 4), x(1, 5)],
            [x(2, 3), x(2, 4), x(2, 5)],
        ];
        let mut gens = vec![];
        for r1 in 0..3 {
            for r2 in (r1 + 1)..3 {
                for c1 in 0..3 {
                    for c2 in (c1 + 1)..3 {
                        gens.push(
                            rows[r1][c1]
                                .mul(&rows[r2][c2])
                                .sub(&rows[r1][c2].mul(&rows[r2][c1])),
                        );
                    }
                }
            }
        }
        gens.push(x(0, 1));
        gens.push(x(0, 2));
        gens.push(x(1, 2));
        let gb = buchberger(&Ideal::new(ctx, N15, gens))?;
        let h = hilbert(&gb)?;
        let keep = [pair_index(0, 1), pair_index(0, 2), pair_index(1, 2)];
        let containment_ok = q
            .iter()
            .enumerate()
            .filter(|(k, _)| !keep.contains(k))
            .all(|(_, qq)| normal_form(qq, &gb.gens).is_zero());
        out.push(DegreeCheck {
            name: "plane_preimage_first_kind".into(),
            expected: (7, 6),
            observed: (h.dim, h.degree),
            containment_ok,
        });
    }

    // plane of the second kind: two quadrics in a codimension-5 space
    {
        let mut gens = vec![q[pair_index(0, 4)].clone(), q[pair_index(0, 5)].clone()];
        for (i, j) in [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)] {
            gens.push(x(i, j));
        }
        let gb = buchberger(&Ideal::new(ctx, N15, gens))?;
        let h = hilbert(&gb)?;
        let keep = [pair_index(0, 1), pair_index(0, 2), pair_index(0, 3)];
        let containment_ok = q
            .iter()
            .enumerate()
            .filter(|(k, _)| !keep.contains(k))
            .all(|(_, qq)| normal_form(qq, &gb.gens).is_zero());
        out.push(DegreeCheck {
            name: "plane_preimage_second_kind".into(),
            expected: (7, 4),
            observed: (h.dim, h.degree),
            containment_ok,
        });
    }

    // polar 3-space preimage: 11 quadrics plus the two hyperplanes
    {
        let excluded = [
            pair_index(0, 2),
            pair_index(0, 3),
            pair_index(1, 2),
            pair_index(1, 3),
        ];
        let mut gens: Vec<Poly> = q
            .iter()
            .enumerate()
            .filter(|(k, _)| !excluded.contains(k))
            .map(|(_, qq)| qq.clone())
            .collect();
        gens.push(x(0, 1));
        gens.push(x(2, 3));
        let gb = buchberger(&Ideal::new(ctx, N15, gens))?;
        let h = hilbert(&gb)?;
        // the same locus is where both contact matrices drop rank
        let n01 = vec![
            vec![x(0, 2), x(0, 3), x(0, 4), x(0, 5)],
            vec![x(1, 2), x(1, 3), x(1, 4), x(1, 5)],
        ];
        let n23 = vec![
            vec![x(0, 2), x(1, 2), x(2, 4), x(2, 5)],
            vec![x(0, 3), x(1, 3), x(3, 4), x(3, 5)],
        ];
        let mut alt = two_by_two_minors(&n01);
        alt.extend(two_by_two_minors(&n23));
        alt.push(x(0, 1));
        alt.push(x(2, 3));
        let gb_alt = buchberger(&Ideal::new(ctx, N15, alt))?;
        let containment_ok = gb_alt.gens.iter().all(|g| normal_form(g, &gb.gens).is_zero())
            && gb.gens.iter().all(|g| normal_form(g, &gb_alt.gens).is_zero());
        out.push(DegreeCheck {
            name: "polar_threespace_preimage".into(),
            expected: (7, 10),
            observed: (h.dim, h.degree),
            containment_ok,
        });
    }
    Ok(out)
}

/// Sanity computation: the Grassmannian ideal itself has dimension 8 and
/// degree 14.
pub fn grassmannian_invariants(ctx: &FieldCtx) -> Result<(i64, i64), Error> {
    let gb = buchberger(&Ideal::new(ctx, N15, quadric_table(ctx)))?;
    let h = hilbert(&gb)?;
    Ok((h.dim, h.degree))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> FieldCtx {
        FieldCtx::prime(10007).unwrap()
    }

    #[test]
    fn grassmannian_dim_degree() {
        assert_eq!(grassmannian_invariants(&ctx()).unwrap(), (8, 14));
    }

    #[test]
    fn instance_seed_one() {
        let c = ctx();
        let inst = k3_random(1, &c).unwrap();
        assert_eq!(apolar_profile(&inst.f).unwrap().h, [1, 6, 6, 1]);
        let sh = hilbert(&buchberger(&inst.s_ideal).unwrap()).unwrap();
        assert_eq!((sh.dim, sh.degree), (2, 14));
        // determinism
        let inst2 = k3_random(1, &c).unwrap();
        assert_eq!(inst.f.poly, inst2.f.poly);
        assert_eq!(inst.l_s.basis, inst2.l_s.basis);
    }

    #[test]
    fn pipeline_decompose() {
        let c = ctx();
        let inst = k3_random(1, &c).unwrap();
        let pts = s_points(&inst, 2, 1).unwrap();
        let line = SecantLine::new(&c, &pts[0].coords, &pts[1].coords).unwrap();
        let gamma = gamma_of_secant(&inst, &line).unwrap();
        assert_eq!(gamma.solution.length, 10);
        let pres = decompose(&inst, &gamma).unwrap();
        assert_eq!(pres.points.len(), 10);
        let ten = tenfold_check(&inst, &gamma).unwrap();
        assert!(ten.ok());
    }

    #[test]
    fn incidence_six_to_one() {
        let c = ctx();
        let inst = k3_random(1, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut done = 0;
        for _ in 0..12 {
            let probe = f_prime_point(&inst, &mut rng).unwrap();
            match sixfold_incidence(&inst, &probe) {
                Ok(rep) => {
                    assert_eq!(rep.lines.len(), 6);
                    assert!(rep.all_member());
                    done += 1;
                    if done >= 2 {
                        break;
                    }
                }
                Err(Error::NonGeneric(_)) => continue,
                Err(e) => panic!("unexpected: {e}"),
            }
        }
        assert!(done >= 1, "no transverse probe found");
    }

    #[test]
    fn ten_points_fixed_example_prime() {
        let rep = lemma_ten_points(&ctx()).unwrap();
        assert!(rep.ok(), "length {} dim {} terracini {}", rep.length, rep.dim, rep.terracini);
        assert!(rep.distinct_points);
    }

    #[test]
    fn ten_points_fixed_example_rational() {
        let rep = lemma_ten_points(&FieldCtx::Rationals).unwrap();
        assert!(rep.ok(), "length {} dim {} terracini {}", rep.length, rep.dim, rep.terracini);
        assert!(rep.distinct_points);
    }

    #[test]
    fn degree_suite_all() {
        for check in degree_suite(&ctx()).unwrap() {
            assert!(
                check.ok(),
                "{}: expected {:?}, observed {:?}, containment {}",
                check.name,
                check.expected,
                check.observed,
                check.containment_ok
            );
        }
    }

    #[test]
    fn relation_counts() {
        let c = ctx();
        let inst = k3_random(1, &c).unwrap();
        let count_f =
            apolarity::quadratic_relation_count(&inst.restricted_quadrics).unwrap();
        assert!(count_f >= 9, "apolar quadrics: {count_f} relations");
        // apolar quadrics of the Pfaffian cubic
        let prof = apolar_profile(&inst.m_p).unwrap();
        let quadrics: Vec<Poly> = prof
            .perp2
            .basis
            .iter()
            .map(|row| {
                let monos = crate::groebner::monomials_of_degree(6, 2);
                Poly::from_terms(
                    &c,
                    6,
                    monos
                        .iter()
                        .zip(row)
                        .map(|(m, co)| (m.clone(), co.clone()))
                        .collect(),
                )
            })
            .collect();
        let count_fp = apolarity::quadratic_relation_count(&quadrics).unwrap();
        assert_eq!(count_fp, 0);
    }
}
