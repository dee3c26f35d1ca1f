//! Dense symmetric matrices, a cyclic Jacobi eigensolver, and the
//! positive semidefinite projection built on it.
//!
//! Matrices here are tiny (the lifted dimension of a form with m plain
//! symbols is m + 4), so simplicity and numerical robustness win over
//! asymptotics: symmetric storage is a packed upper triangle, and the
//! eigensolver is classic cyclic Jacobi with two-sided rotations.

use qz_forms::round::{add_down, add_up, mul_down, mul_up};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error(
        "eigensolver stalled: off-diagonal norm {off_norm:e} after {sweeps} sweeps (matrix norm {norm:e})"
    )]
    NoConvergence {
        off_norm: f64,
        norm: f64,
        sweeps: usize,
    },
}

/// A symmetric matrix stored as its packed upper triangle, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            upper: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    /// Entrywise `self + k·other`.
    pub fn add_scaled(&self, other: &SymMatrix, k: f64) -> SymMatrix {
        debug_assert_eq!(self.n, other.n);
        let upper = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| a + k * b)
            .collect();
        SymMatrix { n: self.n, upper }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add_scaled(other, -1.0)
    }

    pub fn scaled(&self, k: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            upper: self.upper.iter().map(|a| k * a).collect(),
        }
    }

    /// Entrywise clamp into `[lower, upper]`.
    pub fn clamp_box(&self, lower: &SymMatrix, upper: &SymMatrix) -> SymMatrix {
        debug_assert_eq!(self.n, lower.n);
        debug_assert_eq!(self.n, upper.n);
        let data = self
            .upper
            .iter()
            .zip(lower.upper.iter().zip(&upper.upper))
            .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
            .collect();
        SymMatrix {
            n: self.n,
            upper: data,
        }
    }

    /// Entrywise positive part `max(A, 0)`.
    pub fn entrywise_pos(&self) -> SymMatrix {
        SymMatrix {
            n: self.n,
            upper: self.upper.iter().map(|v| v.max(0.0)).collect(),
        }
    }

    /// Entrywise negative part `max(−A, 0)` (so `A = A₊ − A₋`).
    pub fn entrywise_neg(&self) -> SymMatrix {
        SymMatrix {
            n: self.n,
            upper: self.upper.iter().map(|v| (-v).max(0.0)).collect(),
        }
    }

    pub fn add_diag(&mut self, v: f64) {
        for i in 0..self.n {
            let k = self.idx(i, i);
            self.upper[k] += v;
        }
    }

    /// Frobenius norm (off-diagonal entries counted twice).
    pub fn frob_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j);
                let w = if i == j { 1.0 } else { 2.0 };
                s += w * v * v;
            }
        }
        s.sqrt()
    }

    pub fn frob_dist(&self, other: &SymMatrix) -> f64 {
        self.sub(other).frob_norm()
    }

    /// `tr(A·B)` in plain arithmetic (diagnostics only).
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let w = if i == j { 1.0 } else { 2.0 };
                s += w * self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    /// Upper bound on `tr(A·B)`: every term and every accumulation
    /// rounds up. The ×2 weight on off-diagonal terms is exact.
    pub fn trace_product_up(&self, other: &SymMatrix) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let t = mul_up(self.get(i, j), other.get(i, j));
                let t = if i == j { t } else { 2.0 * t };
                s = add_up(s, t);
            }
        }
        s
    }

    /// Lower bound on `tr(A·B)`.
    pub fn trace_product_down(&self, other: &SymMatrix) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let t = mul_down(self.get(i, j), other.get(i, j));
                let t = if i == j { t } else { 2.0 * t };
                s = add_down(s, t);
            }
        }
        s
    }

    pub fn min_eigenvalue(&self) -> Result<f64, EigenError> {
        Ok(self
            .jacobi_eigen()?
            .values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    /// Full eigendecomposition by cyclic Jacobi rotations. Stops once
    /// the off-diagonal Frobenius norm falls below 1e−12·‖S‖; failing
    /// that within 50 sweeps (which takes NaN input or severe
    /// pathology — Jacobi converges quadratically) is an error.
    pub fn jacobi_eigen(&self) -> Result<Eigen, EigenError> {
        let n = self.n;
        let mut a = Dense::from_sym(self);
        let mut v = Dense::identity(n);
        let norm = self.frob_norm().max(f64::MIN_POSITIVE);
        let rotate_above = 1e-14 * norm;
        let stop = 1e-12 * norm;
        let mut rotations = 0usize;
        let mut sweeps = 0usize;
        loop {
            let off_norm = a.offdiag_norm();
            if off_norm <= stop {
                let values = (0..n).map(|i| a.get(i, i)).collect();
                return Ok(Eigen {
                    values,
                    vectors: v,
                    off_norm,
                    rotations,
                });
            }
            if sweeps == 50 {
                return Err(EigenError::NoConvergence {
                    off_norm,
                    norm,
                    sweeps,
                });
            }
            sweeps += 1;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.abs() <= rotate_above {
                        continue;
                    }
                    rotations += 1;
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = if theta.abs() > 1e150 {
                        // Avoid overflow in θ²; the rotation is tiny anyway.
                        1.0 / (2.0 * theta)
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    a.rotate_sym(p, q, c, s, t);
                    v.rotate_cols(p, q, c, s);
                }
            }
        }
    }

    /// Projection onto the positive semidefinite cone: negative
    /// eigenvalues are clamped to zero and the matrix is rebuilt from
    /// the eigenbasis.
    pub fn project_psd(&self) -> Result<SymMatrix, EigenError> {
        let eig = self.jacobi_eigen()?;
        let n = self.n;
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for (k, &lam) in eig.values.iter().enumerate() {
                    if lam > 0.0 {
                        s += lam * eig.vectors.get(i, k) * eig.vectors.get(j, k);
                    }
                }
                out.set(i, j, s);
            }
        }
        Ok(out)
    }
}

/// Eigendecomposition result; `vectors` holds eigenvectors as columns in
/// the order of `values`. `off_norm` is the residual off-diagonal mass
/// at the stopping point and `rotations` the number of Jacobi rotations
/// applied; together they bound how far `values` can sit from the true
/// spectrum (zero rotations on an exactly diagonal input means the
/// values are exact).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Dense,
    pub off_norm: f64,
    pub rotations: usize,
}

/// A small dense square matrix (row-major), used for eigenvector
/// accumulation and the working copy inside Jacobi sweeps.
#[derive(Debug, Clone)]
pub struct Dense {
    n: usize,
    a: Vec<f64>,
}

impl Dense {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Dense { n, a }
    }

    pub fn from_sym(m: &SymMatrix) -> Self {
        let n = m.n();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = m.get(i, j);
            }
        }
        Dense { n, a }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    fn offdiag_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = self.get(i, j);
                s += 2.0 * v * v;
            }
        }
        s.sqrt()
    }

    /// Two-sided Jacobi rotation `J(p,q)ᵀ A J(p,q)` of a symmetric matrix.
    fn rotate_sym(&mut self, p: usize, q: usize, c: f64, s: f64, t: f64) {
        let apq = self.get(p, q);
        let app = self.get(p, p);
        let aqq = self.get(q, q);
        self.set(p, p, app - t * apq);
        self.set(q, q, aqq + t * apq);
        self.set(p, q, 0.0);
        self.set(q, p, 0.0);
        for k in 0..self.n {
            if k == p || k == q {
                continue;
            }
            let akp = self.get(k, p);
            let akq = self.get(k, q);
            let new_kp = c * akp - s * akq;
            let new_kq = s * akp + c * akq;
            self.set(k, p, new_kp);
            self.set(p, k, new_kp);
            self.set(k, q, new_kq);
            self.set(q, k, new_kq);
        }
    }

    /// Right-multiplication by the rotation, updating columns p and q.
    fn rotate_cols(&mut self, p: usize, q: usize, c: f64, s: f64) {
        for k in 0..self.n {
            let vkp = self.get(k, p);
            let vkq = self.get(k, q);
            self.set(k, p, c * vkp - s * vkq);
            self.set(k, q, s * vkp + c * vkq);
        }
    }
}
