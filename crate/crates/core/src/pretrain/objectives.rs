//! Multi-task NLL, empirical KL, pseudo-KL, and the combined NLL + lambda KL objective.
//!
//! Every objective is a function of the model marginal `N(mu, K)` with
//! `K = k(X, X) + noise I`, so gradients are formed as `dL/dK` and `dL/dmu`
//! and pushed back to the flat parameters by [`GpParams::backprop_marginal`].

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::moments::MatchingMoments;
use crate::data::MultiTaskDataset;
use crate::error::{Error, Result};
use crate::gp::{prior_marginal, GpParams, GpPrior, ObservationSet};
use crate::linalg::JitteredCholesky;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Eigenvalues below this fraction of the largest count as zero when ranking `k_tilde`.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Which variant of the KL term to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KlForm {
    /// The full divergence; pseudo-KL when `k_tilde` is rank deficient.
    #[default]
    Full,
    /// `1/2 (tr(K^-1 K~) + (mu - mu~)^T K^-1 (mu - mu~) + ln|K|)`: the full form
    /// with every parameter-independent term dropped.
    Minimization,
}

/// Negative log marginal likelihood of one task, and optionally its gradient.
pub fn task_nll(params: &GpParams, obs: &ObservationSet, want_grad: bool) -> Result<(f64, Option<Vec<f64>>)> {
    if obs.is_empty() {
        return Err(Error::input("task has no observations"));
    }
    let marginal = prior_marginal(params, &obs.xs)?;
    let chol = JitteredCholesky::new(&marginal.cov, "task marginal covariance")?;
    let r = DVector::from_column_slice(&obs.ys) - &marginal.mean;
    let alpha = chol.solve_vec(&r);
    let n = obs.len() as f64;
    let value = 0.5 * r.dot(&alpha) + 0.5 * chol.log_det() + 0.5 * n * LN_2PI;
    if !want_grad {
        return Ok((value, None));
    }
    let mut d_cov = chol.inverse();
    d_cov -= &alpha * alpha.transpose();
    d_cov *= 0.5;
    let d_mean = -alpha;
    Ok((value, Some(params.backprop_marginal(&obs.xs, &d_cov, &d_mean))))
}

fn sum_tasks(params: &GpParams, dataset: &MultiTaskDataset, want_grad: bool) -> Result<(f64, Vec<f64>)> {
    let parts: Vec<Result<(f64, Option<Vec<f64>>)>> = dataset
        .tasks
        .par_iter()
        .map(|t| task_nll(params, &t.observations, want_grad).map_err(|e| e.in_task(&t.name)))
        .collect();
    let mut total = 0.0;
    let mut grad = vec![0.0; if want_grad { params.as_flat().len() } else { 0 }];
    // Summed in task order so results do not depend on scheduling.
    for part in parts {
        let (v, g) = part?;
        total += v;
        if let Some(g) = g {
            grad.iter_mut().zip(g).for_each(|(a, b)| *a += b);
        }
    }
    Ok((total, grad))
}

/// `-sum_i log p(D_i | mu, k, noise)`.
pub fn nll_objective(params: &GpParams, dataset: &MultiTaskDataset) -> Result<f64> {
    if dataset.tasks.is_empty() {
        return Err(Error::input("dataset has no tasks"));
    }
    Ok(sum_tasks(params, dataset, false)?.0)
}

pub fn nll_value_and_grad(params: &GpParams, dataset: &MultiTaskDataset) -> Result<(f64, Vec<f64>)> {
    if dataset.tasks.is_empty() {
        return Err(Error::input("dataset has no tasks"));
    }
    sum_tasks(params, dataset, true)
}

/// Terms shared by every KL variant.
struct KlParts {
    trace: f64,
    quad: f64,
    log_det_k: f64,
    chol: JitteredCholesky,
    alpha: DVector<f64>,
    m: usize,
}

fn kl_parts(model: &dyn GpPrior, moments: &MatchingMoments) -> Result<KlParts> {
    let marginal = prior_marginal(model, &moments.inputs)?;
    let chol = JitteredCholesky::new(&marginal.cov, "model marginal on matching inputs")?;
    let d = &marginal.mean - &moments.mu_tilde;
    let alpha = chol.solve_vec(&d);
    let trace = chol.solve_mat(&moments.k_tilde).trace();
    Ok(KlParts { trace, quad: d.dot(&alpha), log_det_k: chol.log_det(), chol, alpha, m: moments.m() })
}

/// Numerical rank of `k_tilde` and the log pseudo-determinant over the retained eigenvalues.
pub fn moment_rank(k_tilde: &DMatrix<f64>) -> Result<(usize, f64)> {
    let eig = k_tilde.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Err(Error::DegenerateMoments { threshold: RANK_THRESHOLD });
    }
    let cut = RANK_THRESHOLD * max;
    let kept: Vec<f64> = eig.eigenvalues.iter().cloned().filter(|&l| l > cut).collect();
    Ok((kept.len(), kept.iter().map(|l| l.ln()).sum()))
}

/// Pseudo-KL from a possibly degenerate `N(mu~, K~)` to the model marginal.
///
/// With `K~ = A A^T` of rank `R`, `ln|A^T A|` is the sum of the logs of the retained
/// eigenvalues. Can be negative.
pub fn pseudo_kl(model: &dyn GpPrior, moments: &MatchingMoments) -> Result<f64> {
    let (r, log_pdet) = moment_rank(&moments.k_tilde)?;
    let p = kl_parts(model, moments)?;
    let deficit = (p.m - r) as f64;
    Ok(0.5 * (p.trace + p.quad + p.log_det_k - log_pdet - r as f64 + deficit * LN_2PI))
}

/// Empirical KL divergence `KL(N(mu~, K~) || N(mu, K))`, dispatching to
/// [`pseudo_kl`] when `K~` is rank deficient.
pub fn kl_objective(model: &dyn GpPrior, moments: &MatchingMoments) -> Result<f64> {
    kl_objective_with(model, moments, KlForm::Full)
}

pub fn kl_objective_with(model: &dyn GpPrior, moments: &MatchingMoments, form: KlForm) -> Result<f64> {
    match form {
        KlForm::Minimization => {
            let p = kl_parts(model, moments)?;
            Ok(0.5 * (p.trace + p.quad + p.log_det_k))
        }
        KlForm::Full => {
            let (r, _) = moment_rank(&moments.k_tilde)?;
            if r < moments.m() {
                return pseudo_kl(model, moments);
            }
            let Ok(kt) = JitteredCholesky::new(&moments.k_tilde, "sample covariance") else {
                return pseudo_kl(model, moments);
            };
            if kt.jitter > 0.0 {
                return pseudo_kl(model, moments);
            }
            let p = kl_parts(model, moments)?;
            Ok(0.5 * (p.trace + p.quad + p.log_det_k - kt.log_det() - p.m as f64))
        }
    }
}

/// KL with `eps` added to the diagonals of both `K` and `K~`, making `K~` full rank.
pub fn kl_epsilon(model: &dyn GpPrior, moments: &MatchingMoments, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::input("epsilon must be positive"));
    }
    let m = moments.m();
    let mut marginal = prior_marginal(model, &moments.inputs)?;
    let mut kt = moments.k_tilde.clone();
    for i in 0..m {
        marginal.cov[(i, i)] += eps;
        kt[(i, i)] += eps;
    }
    let chol = JitteredCholesky::new(&marginal.cov, "model marginal on matching inputs")?;
    let kt_chol = JitteredCholesky::new(&kt, "regularized sample covariance")?;
    let d = &marginal.mean - &moments.mu_tilde;
    let quad = d.dot(&chol.solve_vec(&d));
    let trace = chol.solve_mat(&kt).trace();
    Ok(0.5 * (trace + quad + chol.log_det() - kt_chol.log_det() - m as f64))
}

/// Value (in the requested form) and gradient of the KL term.
///
/// All forms share `dL/dK = (K^-1 - K^-1 K~ K^-1 - a a^T) / 2` and `dL/dmu = a`
/// with `a = K^-1 (mu - mu~)`.
pub fn kl_value_and_grad(params: &GpParams, moments: &MatchingMoments, form: KlForm) -> Result<(f64, Vec<f64>)> {
    let value = kl_objective_with(params, moments, form)?;
    let p = kl_parts(params, moments)?;
    let k_inv = p.chol.inverse();
    let mut d_cov = &k_inv - &k_inv * &moments.k_tilde * &k_inv - &p.alpha * p.alpha.transpose();
    d_cov *= 0.5;
    Ok((value, params.backprop_marginal(&moments.inputs, &d_cov, &p.alpha)))
}

/// `nll + lambda * kl` (the normalizer of the implied prior is constant and omitted).
pub fn combined_objective(
    params: &GpParams,
    dataset: &MultiTaskDataset,
    moments: &MatchingMoments,
    lambda: f64,
) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::input("lambda must be non-negative"));
    }
    let nll = nll_objective(params, dataset)?;
    if lambda == 0.0 {
        return Ok(nll);
    }
    Ok(nll + lambda * kl_objective(params, moments)?)
}

pub fn combined_value_and_grad(
    params: &GpParams,
    dataset: &MultiTaskDataset,
    moments: &MatchingMoments,
    lambda: f64,
) -> Result<(f64, Vec<f64>)> {
    let (nll, mut grad) = nll_value_and_grad(params, dataset)?;
    if lambda == 0.0 {
        return Ok((nll, grad));
    }
    let (kl, kg) = kl_value_and_grad(params, moments, KlForm::Full)?;
    grad.iter_mut().zip(kg).for_each(|(a, b)| *a += lambda * b);
    Ok((nll + lambda * kl, grad))
}
