//! Information gain and the best-sample regret bounds for meta BO with GP-UCB and PI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::GpPrior;
use crate::linalg::JitteredCholesky;
use crate::Point;

/// `1/2 log|I + k(A)/noise|` for the points in `a`.
pub fn information_gain(model: &dyn GpPrior, a: &[Point]) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    let s2 = model.noise_variance();
    let mut m = model.kernel_matrix(a, a)? / s2;
    for i in 0..a.len() {
        m[(i, i)] += 1.0;
    }
    Ok(0.5 * JitteredCholesky::new(&m, "information gain")?.log_det())
}

/// Greedy approximation of the maximum information gain over `t`-subsets of `candidates`.
///
/// Each round adds the candidate with the largest gain (lowest index on ties). The
/// result is exact when `t` equals the number of candidates.
pub fn rho_t(model: &dyn GpPrior, candidates: &[Point], t: usize) -> Result<f64> {
    if t > candidates.len() {
        return Err(Error::input(format!("T = {t} exceeds the {} candidates", candidates.len())));
    }
    if !(model.noise_variance() > 0.0) {
        return Err(Error::domain("information gain needs a positive noise variance"));
    }
    if t == candidates.len() {
        return information_gain(model, candidates);
    }
    let mut chosen: Vec<Point> = Vec::with_capacity(t);
    let mut used = vec![false; candidates.len()];
    let mut value = 0.0;
    for _ in 0..t {
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in candidates.iter().enumerate() {
            if used[i] {
                continue;
            }
            chosen.push(c.clone());
            let g = information_gain(model, &chosen)?;
            chosen.pop();
            if best.is_none_or(|(_, b)| g > b) {
                best = Some((i, g));
            }
        }
        let (i, g) = best.expect("t <= number of candidates");
        used[i] = true;
        chosen.push(candidates[i].clone());
        value = g;
    }
    Ok(value)
}

/// Inputs to the regret-bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretBoundInputs {
    /// Number of training tasks.
    pub n: usize,
    /// Number of BO iterations.
    pub t: usize,
    pub delta: f64,
    /// Upper bound on the prior variance over the domain.
    pub c: f64,
    pub sigma2: f64,
    pub rho_t: f64,
    /// PI only: target value, at least the true maximum.
    pub f_star_hat: Option<f64>,
    /// PI only: posterior mean and variance at the maximizer after `tau - 1` steps.
    pub mu_at_xstar: Option<f64>,
    pub k_at_xstar: Option<f64>,
    /// PI only: the iteration `tau` in `1..=t`; defaults to `t`.
    pub tau: Option<usize>,
    /// PI only: largest observed value, checked against `f_star_hat`.
    pub observed_max: Option<f64>,
}

impl RegretBoundInputs {
    pub fn new(n: usize, t: usize, delta: f64, c: f64, sigma2: f64, rho_t: f64) -> Self {
        Self { n, t, delta, c, sigma2, rho_t, f_star_hat: None, mu_at_xstar: None, k_at_xstar: None, tau: None, observed_max: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::domain(format!("need 0 < delta < 1, got {}", self.delta)));
        }
        if self.t < 1 {
            return Err(Error::domain("need T >= 1"));
        }
        let need = 4.0 * (6.0 / self.delta).ln() + self.t as f64 + 2.0;
        if !(self.n as f64 >= need) {
            return Err(Error::domain(format!("need N >= 4 log(6/delta) + T + 2 = {need}, got N = {}", self.n)));
        }
        if !(self.c > 0.0) || !(self.sigma2 > 0.0) {
            return Err(Error::domain("need c > 0 and sigma2 > 0"));
        }
        if !(self.rho_t >= 0.0) {
            return Err(Error::domain("need rho_T >= 0"));
        }
        Ok(())
    }
}

fn iota(n: f64, t: f64, delta: f64) -> f64 {
    let l6 = (6.0 / delta).ln();
    (6.0 * (n - 3.0 + t + 2.0 * (t * l6).sqrt() + 2.0 * l6) / (delta * n * (n - t - 1.0))).sqrt()
}

fn b(n: f64, t: f64, delta: f64) -> f64 {
    (6.0 / delta).ln() / (n - t)
}

fn width(i: &RegretBoundInputs) -> f64 {
    (2.0 * i.c * i.rho_t / (i.t as f64 * (1.0 + i.c / i.sigma2).ln()) + i.sigma2).sqrt()
}

/// Best-sample simple-regret bound for GP-UCB.
pub fn regret_bound_ucb(i: &RegretBoundInputs) -> Result<f64> {
    i.validate()?;
    let (n, t) = (i.n as f64, i.t as f64);
    let io = iota(n, t, i.delta);
    let bb = b(n, t, i.delta);
    let l3 = (2.0 * (3.0 / i.delta).ln()).sqrt();
    let eta = (io + l3) / (1.0 - 2.0 * bb.sqrt()).sqrt() * (1.0 + 2.0 * bb.sqrt() + 2.0 * bb).sqrt() + io + l3;
    Ok(eta * width(i) - l3 * i.sigma2 / (i.c + i.sigma2).sqrt())
}

/// Best-sample simple-regret bound for PI with target `f_star_hat`.
pub fn regret_bound_pi(i: &RegretBoundInputs) -> Result<f64> {
    i.validate()?;
    let (Some(f_star), Some(mu), Some(k)) = (i.f_star_hat, i.mu_at_xstar, i.k_at_xstar) else {
        return Err(Error::domain("PI bound needs f_star_hat, mu_at_xstar and k_at_xstar"));
    };
    if let Some(m) = i.observed_max {
        if !(f_star >= m) {
            return Err(Error::domain(format!("need f_star_hat >= observed maximum {m}, got {f_star}")));
        }
    }
    if !(k >= 0.0) {
        return Err(Error::domain("need k(x*) >= 0"));
    }
    let tau = i.tau.unwrap_or(i.t);
    if tau < 1 || tau > i.t {
        return Err(Error::domain(format!("need 1 <= tau <= T, got tau = {tau}")));
    }
    let n = i.n as f64;
    let io = iota(n, tau as f64, i.delta);
    let bb = b(n, tau as f64, i.delta);
    let l = (2.0 * (3.0 / (2.0 * i.delta)).ln()).sqrt();
    let eta = ((f_star - mu) / (k + i.sigma2).sqrt() + io) * ((1.0 + 2.0 * bb.sqrt() + 2.0 * bb) / (1.0 - 2.0 * bb.sqrt())).sqrt()
        + io
        + l;
    Ok(eta * width(i) - l * i.sigma2 / (2.0 * (i.c + i.sigma2).sqrt()))
}
