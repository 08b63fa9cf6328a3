//! A memory-based GP whose mean and kernel are looked up from stored sample moments.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::pretrain::MatchingMoments;
use crate::Point;

/// Nearest-neighbour lookup GP over a set of stored inputs.
///
/// On the stored inputs it reproduces the sample mean and covariance exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalGp {
    inputs: Vec<Point>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    noise: f64,
}

impl EmpiricalGp {
    pub fn dim(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    /// Index of the stored input nearest to `x` (Euclidean, lowest index on ties).
    pub fn nearest(&self, x: &[f64]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, p) in self.inputs.iter().enumerate() {
            let d: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    fn check(&self, xs: &[Point]) -> Result<()> {
        match xs.iter().find(|x| x.len() != self.dim()) {
            Some(_) => Err(Error::input("point dimension does not match the stored inputs")),
            None => Ok(()),
        }
    }

    pub fn mean_vector(&self, xs: &[Point]) -> Result<DVector<f64>> {
        self.check(xs)?;
        Ok(DVector::from_iterator(xs.len(), xs.iter().map(|x| self.mean[self.nearest(x)])))
    }

    pub fn kernel_matrix(&self, xs: &[Point], xs2: &[Point]) -> Result<DMatrix<f64>> {
        self.check(xs)?;
        self.check(xs2)?;
        let a: Vec<usize> = xs.iter().map(|x| self.nearest(x)).collect();
        let b: Vec<usize> = xs2.iter().map(|x| self.nearest(x)).collect();
        Ok(DMatrix::from_fn(a.len(), b.len(), |i, j| self.cov[(a[i], b[j])]))
    }
}

/// Lookup GP reproducing `(mu_tilde, k_tilde)` on the matching inputs, with zero noise.
pub fn empirical_gp(moments: &MatchingMoments) -> Result<EmpiricalGp> {
    if moments.m() == 0 {
        return Err(Error::input("empirical GP needs at least one stored input"));
    }
    Ok(EmpiricalGp {
        inputs: moments.inputs.clone(),
        mean: moments.mu_tilde.clone(),
        cov: moments.k_tilde.clone(),
        noise: 0.0,
    })
}
