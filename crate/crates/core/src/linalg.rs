//! Small dense linear-algebra helpers shared by the GP and objective code.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Diagonal jitter levels tried in order when a Cholesky factorization fails.
pub const JITTER_LEVELS: [f64; 4] = [0.0, 1e-10, 1e-6, 1e-4];

/// A Cholesky factor together with the jitter that had to be added.
#[derive(Debug, Clone)]
pub struct JitteredCholesky {
    pub factor: Cholesky<f64, Dyn>,
    pub jitter: f64,
}

impl JitteredCholesky {
    /// Factorizes `a`, escalating diagonal jitter through [`JITTER_LEVELS`].
    pub fn new(a: &DMatrix<f64>, context: &str) -> Result<Self> {
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical {
                context: format!("{context}: non-finite matrix entry"),
                attempted: vec![],
            });
        }
        let n = a.nrows();
        let mut attempted = Vec::with_capacity(JITTER_LEVELS.len());
        for &jitter in JITTER_LEVELS.iter() {
            attempted.push(jitter);
            let mut m = a.clone();
            for i in 0..n {
                m[(i, i)] += jitter;
            }
            if let Some(factor) = Cholesky::new(m) {
                let l = factor.l_dirty();
                if (0..n).all(|i| l[(i, i)] > 0.0 && l[(i, i)].is_finite()) {
                    return Ok(Self { factor, jitter });
                }
            }
        }
        Err(Error::Numerical { context: context.to_string(), attempted })
    }

    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.factor.solve(b)
    }

    pub fn solve_mat(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.factor.solve(b)
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.factor.inverse()
    }

    /// `ln |A + jitter I|`.
    pub fn log_det(&self) -> f64 {
        let l = self.factor.l_dirty();
        2.0 * (0..l.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>()
    }

    /// Solves `L x = b` for the lower factor only.
    pub fn solve_lower(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.factor
            .l_dirty()
            .solve_lower_triangular(b)
            .expect("cholesky factor has a positive diagonal")
    }
}

/// Symmetrizes in place: `a <- (a + a^T) / 2`.
pub fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// `sum_ij a_ij b_ij`.
pub fn frobenius_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}
