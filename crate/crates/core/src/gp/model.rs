//! Finite marginals, posterior conditioning, and the per-task marginal likelihood.

use nalgebra::{DMatrix, DVector};

use super::empirical::EmpiricalGp;
use super::params::GpParams;
use crate::error::{Error, Result};
use crate::linalg::JitteredCholesky;
use crate::Point;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Anything that can act as a GP prior: a mean function, a kernel, and a noise variance.
pub trait GpPrior: Send + Sync {
    fn dim(&self) -> usize;
    fn mean_vector(&self, xs: &[Point]) -> Result<DVector<f64>>;
    fn kernel_matrix(&self, xs: &[Point], xs2: &[Point]) -> Result<DMatrix<f64>>;
    fn noise_variance(&self) -> f64;

    /// `k(x, x)` for each point.
    fn kernel_diag(&self, xs: &[Point]) -> Result<Vec<f64>> {
        xs.iter()
            .map(|x| {
                let one = std::slice::from_ref(x);
                Ok(self.kernel_matrix(one, one)?[(0, 0)])
            })
            .collect()
    }
}

impl GpPrior for GpParams {
    fn dim(&self) -> usize {
        GpParams::dim(self)
    }
    fn mean_vector(&self, xs: &[Point]) -> Result<DVector<f64>> {
        GpParams::mean_vector(self, xs)
    }
    fn kernel_matrix(&self, xs: &[Point], xs2: &[Point]) -> Result<DMatrix<f64>> {
        GpParams::kernel_matrix(self, xs, xs2)
    }
    fn noise_variance(&self) -> f64 {
        GpParams::noise_variance(self)
    }
    fn kernel_diag(&self, xs: &[Point]) -> Result<Vec<f64>> {
        self.check_finite()?;
        // Stationary: k(x, x) = amplitude^2 everywhere.
        let a2 = self.amplitude().powi(2);
        match xs.iter().find(|x| x.len() != GpParams::dim(self)) {
            Some(_) => Err(Error::input("point dimension does not match the model")),
            None => Ok(vec![a2; xs.len()]),
        }
    }
}

/// A trained parametric GP or a memory-based lookup GP.
#[derive(Debug, Clone, PartialEq)]
pub enum GpModel {
    Parametric(GpParams),
    Empirical(EmpiricalGp),
}

impl GpPrior for GpModel {
    fn dim(&self) -> usize {
        match self {
            GpModel::Parametric(p) => GpPrior::dim(p),
            GpModel::Empirical(e) => e.dim(),
        }
    }
    fn mean_vector(&self, xs: &[Point]) -> Result<DVector<f64>> {
        match self {
            GpModel::Parametric(p) => GpPrior::mean_vector(p, xs),
            GpModel::Empirical(e) => e.mean_vector(xs),
        }
    }
    fn kernel_matrix(&self, xs: &[Point], xs2: &[Point]) -> Result<DMatrix<f64>> {
        match self {
            GpModel::Parametric(p) => GpPrior::kernel_matrix(p, xs, xs2),
            GpModel::Empirical(e) => e.kernel_matrix(xs, xs2),
        }
    }
    fn noise_variance(&self) -> f64 {
        match self {
            GpModel::Parametric(p) => GpPrior::noise_variance(p),
            GpModel::Empirical(e) => e.noise_variance(),
        }
    }
}

/// Mean vector and covariance matrix of a finite-dimensional Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMarginal {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianMarginal {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    /// `log N(y; mean, cov)`, factorizing with jitter escalation.
    pub fn log_density(&self, y: &DVector<f64>) -> Result<f64> {
        let chol = JitteredCholesky::new(&self.cov, "marginal covariance")?;
        let r = y - &self.mean;
        let alpha = chol.solve_vec(&r);
        Ok(-0.5 * r.dot(&alpha) - 0.5 * chol.log_det() - 0.5 * self.len() as f64 * LN_2PI)
    }
}

/// Observations `(x_t, y_t)` of one function.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservationSet {
    pub xs: Vec<Point>,
    pub ys: Vec<f64>,
}

impl ObservationSet {
    pub fn new(xs: Vec<Point>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::input(format!("{} inputs but {} outputs", xs.len(), ys.len())));
        }
        if let Some(y) = ys.iter().find(|y| !y.is_finite()) {
            return Err(Error::input(format!("non-finite observation {y}")));
        }
        if let Some(x) = xs.first() {
            let d = x.len();
            if xs.iter().any(|p| p.len() != d) {
                return Err(Error::input("inputs have inconsistent dimensions"));
            }
        }
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn push(&mut self, x: Point, y: f64) {
        self.xs.push(x);
        self.ys.push(y);
    }

    /// Subset by index, in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self { xs: idx.iter().map(|&i| self.xs[i].clone()).collect(), ys: idx.iter().map(|&i| self.ys[i]).collect() }
    }
}

/// `N(mu(X), k(X, X) + noise I)`.
pub fn prior_marginal(model: &dyn GpPrior, xs: &[Point]) -> Result<GaussianMarginal> {
    if xs.is_empty() {
        return Err(Error::input("prior marginal needs at least one point"));
    }
    let mean = model.mean_vector(xs)?;
    let mut cov = model.kernel_matrix(xs, xs)?;
    let s2 = model.noise_variance();
    for i in 0..xs.len() {
        cov[(i, i)] += s2;
    }
    Ok(GaussianMarginal { mean, cov })
}

/// `log p(y | X)` under the prior marginal.
pub fn log_marginal_likelihood(model: &dyn GpPrior, data: &ObservationSet) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::input("marginal likelihood needs at least one observation"));
    }
    let marginal = prior_marginal(model, &data.xs)?;
    marginal.log_density(&DVector::from_column_slice(&data.ys))
}

/// A GP conditioned on observations.
pub struct PosteriorGp<'a> {
    prior: &'a dyn GpPrior,
    data: ObservationSet,
    chol: Option<JitteredCholesky>,
    alpha: DVector<f64>,
}

impl std::fmt::Debug for PosteriorGp<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PosteriorGp").field("n", &self.data.len()).finish()
    }
}

/// Conditions `model` on `data`, caching the factorization of `k(x_T) + noise I`.
pub fn condition<'a>(model: &'a dyn GpPrior, data: ObservationSet) -> Result<PosteriorGp<'a>> {
    if data.is_empty() {
        return Ok(PosteriorGp { prior: model, data, chol: None, alpha: DVector::zeros(0) });
    }
    if data.xs.iter().any(|x| x.len() != model.dim()) {
        return Err(Error::input("observation dimension does not match the model"));
    }
    let marginal = prior_marginal(model, &data.xs)?;
    let chol = JitteredCholesky::new(&marginal.cov, "posterior conditioning")?;
    let r = DVector::from_column_slice(&data.ys) - marginal.mean;
    let alpha = chol.solve_vec(&r);
    Ok(PosteriorGp { prior: model, data, chol: Some(chol), alpha })
}

impl<'a> PosteriorGp<'a> {
    pub fn prior(&self) -> &'a dyn GpPrior {
        self.prior
    }

    pub fn data(&self) -> &ObservationSet {
        &self.data
    }

    /// Largest observed value, if any.
    pub fn best_y(&self) -> Option<f64> {
        self.data.ys.iter().cloned().fold(None, |m, y| Some(m.map_or(y, |m: f64| m.max(y))))
    }

    /// Latent posterior `(mu_D(X), k_D(X, X))`.
    pub fn predict(&self, xs: &[Point]) -> Result<GaussianMarginal> {
        let mut mean = self.prior.mean_vector(xs)?;
        let mut cov = self.prior.kernel_matrix(xs, xs)?;
        if let Some(chol) = &self.chol {
            let k_tx = self.prior.kernel_matrix(&self.data.xs, xs)?;
            mean += k_tx.transpose() * &self.alpha;
            let v = chol.solve_lower(&k_tx);
            cov -= v.transpose() * v;
            crate::linalg::symmetrize(&mut cov);
        }
        Ok(GaussianMarginal { mean, cov })
    }

    /// Posterior of noisy observations: latent covariance plus `noise I`.
    pub fn predict_observed(&self, xs: &[Point]) -> Result<GaussianMarginal> {
        let mut m = self.predict(xs)?;
        let s2 = self.prior.noise_variance();
        for i in 0..xs.len() {
            m.cov[(i, i)] += s2;
        }
        Ok(m)
    }

    /// Latent posterior means and variances (variances clamped at zero).
    pub fn predict_diag(&self, xs: &[Point]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mean = self.prior.mean_vector(xs)?;
        let diag = self.prior.kernel_diag(xs)?;
        let Some(chol) = &self.chol else {
            return Ok((mean.iter().cloned().collect(), diag));
        };
        let k_tx = self.prior.kernel_matrix(&self.data.xs, xs)?;
        let mu = mean + k_tx.transpose() * &self.alpha;
        let v = chol.solve_lower(&k_tx);
        let var = (0..xs.len()).map(|j| (diag[j] - v.column(j).norm_squared()).max(0.0)).collect();
        Ok((mu.iter().cloned().collect(), var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_model(noise: f64) -> GpParams {
        GpParams::const_matern(0.0, 1.0, &[1.0], noise).unwrap()
    }

    #[test]
    fn single_point_marginal() {
        let m = prior_marginal(&unit_model(0.01), &[vec![0.3]]).unwrap();
        assert!((m.cov[(0, 0)] - 1.01).abs() < 1e-15);
        assert!(prior_marginal(&unit_model(0.01), &[]).is_err());
    }

    #[test]
    fn standard_normal_log_likelihoods() {
        let mut p = unit_model(1.0);
        p.set_noise_variance(0.0);
        let at0 = log_marginal_likelihood(&p, &ObservationSet::new(vec![vec![0.0]], vec![0.0]).unwrap()).unwrap();
        let at1 = log_marginal_likelihood(&p, &ObservationSet::new(vec![vec![0.0]], vec![1.0]).unwrap()).unwrap();
        assert!((at0 - (-0.918_938_533_204_672_7)).abs() < 1e-12);
        assert!((at1 - (-1.418_938_533_204_672_7)).abs() < 1e-12);
    }

    #[test]
    fn empty_data_predicts_the_prior() {
        let p = GpParams::const_matern(0.4, 1.3, &[0.5, 0.2], 0.05).unwrap();
        let post = condition(&p, ObservationSet::default()).unwrap();
        let xs = vec![vec![0.1, 0.2], vec![0.7, 0.4]];
        assert_eq!(post.predict_observed(&xs).unwrap(), prior_marginal(&p, &xs).unwrap());
        let latent = post.predict(&xs).unwrap();
        assert_eq!(latent.cov, p.kernel_matrix(&xs, &xs).unwrap());
    }

    #[test]
    fn one_observation_closed_form() {
        let p = unit_model(0.1);
        let post = condition(&p, ObservationSet::new(vec![vec![0.0]], vec![1.0]).unwrap()).unwrap();
        let k10 = (1.0 + 3f64.sqrt()) * (-(3f64.sqrt())).exp();
        let m = post.predict(&[vec![1.0]]).unwrap();
        assert!((m.mean[0] - k10 / 1.1).abs() < 1e-14);
        assert!((m.cov[(0, 0)] - (1.0 - k10 * k10 / 1.1)).abs() < 1e-14);
        let (mu, var) = post.predict_diag(&[vec![1.0]]).unwrap();
        assert!((mu[0] - m.mean[0]).abs() < 1e-15 && (var[0] - m.cov[(0, 0)]).abs() < 1e-15);
    }

    #[test]
    fn interpolates_at_zero_noise() {
        let mut p = GpParams::const_matern(0.0, 1.0, &[0.3], 1.0).unwrap();
        p.set_noise_variance(0.0);
        let xs = vec![vec![0.1], vec![0.5], vec![0.8]];
        let ys = vec![0.3, -1.2, 0.7];
        let post = condition(&p, ObservationSet::new(xs.clone(), ys.clone()).unwrap()).unwrap();
        let (mu, var) = post.predict_diag(&xs).unwrap();
        for i in 0..3 {
            assert!((mu[i] - ys[i]).abs() < 1e-6);
            assert!(var[i] <= 1e-6);
        }
    }
}
