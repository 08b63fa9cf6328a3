use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::Point;

/// Sample moments of the observations on inputs shared by every task.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingMoments {
    /// `M` shared inputs.
    pub inputs: Vec<Point>,
    /// `M x N`, column `i` holds task `i`.
    pub observations: DMatrix<f64>,
    pub mu_tilde: DVector<f64>,
    pub k_tilde: DMatrix<f64>,
    pub n_tasks: usize,
}

impl MatchingMoments {
    pub fn m(&self) -> usize {
        self.inputs.len()
    }

    /// Restricts to a subset of the matching inputs, recomputing nothing
    /// (the moments of a subset are the corresponding sub-blocks).
    pub fn select(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        Self {
            inputs: idx.iter().map(|&i| self.inputs[i].clone()).collect(),
            observations: DMatrix::from_fn(k, self.n_tasks, |r, c| self.observations[(idx[r], c)]),
            mu_tilde: DVector::from_fn(k, |r, _| self.mu_tilde[idx[r]]),
            k_tilde: DMatrix::from_fn(k, k, |r, c| self.k_tilde[(idx[r], idx[c])]),
            n_tasks: self.n_tasks,
        }
    }
}

/// Sample mean `y 1 / N` and biased covariance `(y - mu 1^T)(y - mu 1^T)^T / N`.
///
/// With `unbiased`, the covariance is rescaled by `N / (N - 1)` (needs `N >= 2`).
pub fn estimate_moments(inputs: Vec<Point>, y: DMatrix<f64>, unbiased: bool) -> Result<MatchingMoments> {
    let (m, n) = y.shape();
    if m == 0 || n == 0 {
        return Err(Error::input("moments need at least one input and one task"));
    }
    if inputs.len() != m {
        return Err(Error::input(format!("{} inputs but {} observation rows", inputs.len(), m)));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("observation matrix has non-finite entries"));
    }
    if unbiased && n < 2 {
        return Err(Error::input("unbiased covariance needs at least two tasks"));
    }
    let mu = DVector::from_fn(m, |r, _| y.row(r).sum() / n as f64);
    let mut centered = y.clone();
    for c in 0..n {
        let mut col = centered.column_mut(c);
        col -= &mu;
    }
    let scale = if unbiased { 1.0 / (n as f64 - 1.0) } else { 1.0 / n as f64 };
    let mut k = &centered * centered.transpose() * scale;
    crate::linalg::symmetrize(&mut k);
    Ok(MatchingMoments { inputs, observations: y, mu_tilde: mu, k_tilde: k, n_tasks: n })
}
