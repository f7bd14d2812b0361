//! Dense exact linear algebra over a field context: reduced row echelon
//! form, rank, kernels, solving, and the `Subspace` type used for L_S, P_S,
//! Lagrangian spaces and tangent spaces.

use crate::error::Error;
use crate::field::{Elem, FieldCtx};

/// Row-major dense matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub ctx: FieldCtx,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Mat {
    pub fn zero(ctx: &FieldCtx, rows: usize, cols: usize) -> Mat {
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Mat {
        let mut m = Mat::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ctx.one();
        }
        m
    }

    pub fn from_rows(ctx: &FieldCtx, rows: Vec<Vec<Elem>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat {
            ctx: ctx.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let ctx = &self.ctx;
        let mut out = Mat::zero(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if ctx.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ctx.mul(a, other.at(k, j));
                    *out.at_mut(i, j) = ctx.add(out.at(i, j), &t);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        let ctx = &self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for j in 0..self.cols {
                    acc = ctx.add(&acc, &ctx.mul(self.at(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let ctx = self.ctx.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !ctx.is_zero(self.at(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = ctx.inv(self.at(r, c)).unwrap();
            for j in c..self.cols {
                *self.at_mut(r, j) = ctx.mul(self.at(r, j), &inv);
            }
            for i in 0..self.rows {
                if i == r || ctx.is_zero(self.at(i, c)) {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let t = ctx.mul(&f, self.at(r, j));
                    *self.at_mut(i, j) = ctx.sub(self.at(i, j), &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right null space {x : M x = 0}.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let ctx = self.ctx.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = vec![];
        for &fc in &free {
            let mut v = vec![ctx.zero(); self.cols];
            v[fc] = ctx.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(m.at(pi, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of M x = b, or None if inconsistent.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let ctx = self.ctx.clone();
        let mut aug = Mat::zero(&ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![ctx.zero(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(pi, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix; errors when singular.
    pub fn inverse(&self) -> Result<Mat, Error> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ctx = self.ctx.clone();
        let mut aug = Mat::zero(&ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = ctx.one();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        let mut inv = Mat::zero(&ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    /// Exact determinant by fraction-free-ish elimination (field division).
    pub fn det(&self) -> Elem {
        assert_eq!(self.rows, self.cols);
        let ctx = self.ctx.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ctx.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !ctx.is_zero(m.at(i, c))) else {
                return ctx.zero();
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(c * n + j, pr * n + j);
                }
                det = ctx.neg(&det);
            }
            det = ctx.mul(&det, m.at(c, c));
            let inv = ctx.inv(m.at(c, c)).unwrap();
            for i in (c + 1)..n {
                if ctx.is_zero(m.at(i, c)) {
                    continue;
                }
                let f = ctx.mul(m.at(i, c), &inv);
                for j in c..n {
                    let t = ctx.mul(&f, m.at(c, j));
                    *m.at_mut(i, j) = ctx.sub(m.at(i, j), &t);
                }
            }
        }
        det
    }
}

/// An exact linear subspace of a coordinate space, stored as a reduced
/// row-echelon basis so equality testing is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ctx: FieldCtx,
    pub ambient: usize,
    /// RREF basis rows; length = dim.
    pub basis: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn from_rows(ctx: &FieldCtx, ambient: usize, rows: Vec<Vec<Elem>>) -> Subspace {
        let mut m = Mat::from_rows(ctx, rows);
        if m.rows == 0 {
            return Subspace {
                ctx: ctx.clone(),
                ambient,
                basis: vec![],
            };
        }
        assert_eq!(m.cols, ambient);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace {
            ctx: ctx.clone(),
            ambient,
            basis,
        }
    }

    pub fn full(ctx: &FieldCtx, ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![ctx.zero(); ambient];
                v[i] = ctx.one();
                v
            })
            .collect();
        Subspace::from_rows(ctx, ambient, rows)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Mat::from_rows(&self.ctx, rows).rank() == self.dim()
    }

    /// Coordinates of v in the basis of this subspace, if v lies in it.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let m = Mat::from_rows(&self.ctx, self.basis.clone()).transpose();
        let sol = m.solve(v)?;
        // verify (solve only checks consistency of the system)
        Some(sol)
    }

    /// The annihilator {y : sum_j basis[i][j] y_j = 0 for all i}.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(&self.ctx, self.ambient);
        }
        let m = Mat::from_rows(&self.ctx, self.basis.clone());
        Subspace::from_rows(&self.ctx, self.ambient, m.kernel())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.clone());
        Subspace::from_rows(&self.ctx, self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.annihilator()
            .sum(&other.annihilator())
            .annihilator()
    }
}
