use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    #[default]
    Analytic,
    FiniteDifference,
}

/// A scalar objective over a flat parameter vector.
pub trait DifferentiableObjective: Sync {
    fn value(&self, theta: &[f64]) -> Result<f64>;

    /// Value and gradient. The default differences [`DifferentiableObjective::value`].
    fn value_and_grad(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let v = self.value(theta)?;
        Ok((v, finite_difference_gradient(|t| self.value(t), theta)?))
    }
}

/// Wraps a closure as an objective without an analytic gradient.
pub struct FnObjective<F>(pub F);

impl<F> DifferentiableObjective for FnObjective<F>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    fn value(&self, theta: &[f64]) -> Result<f64> {
        (self.0)(theta)
    }
}

/// Step used for coordinate `i`: `1e-5 * (1 + |theta_i|)`.
pub fn fd_step(theta_i: f64) -> f64 {
    1e-5 * (1.0 + theta_i.abs())
}

/// Central finite differences.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> Result<f64>, theta: &[f64]) -> Result<Vec<f64>> {
    let mut t = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        let h = fd_step(theta[i]);
        t[i] = theta[i] + h;
        let up = f(&t)?;
        t[i] = theta[i] - h;
        let down = f(&t)?;
        t[i] = theta[i];
        for v in [up, down] {
            if !v.is_finite() {
                return Err(Error::Evaluation { index: i, value: v });
            }
        }
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Gradient of `objective` at `theta` in the requested mode.
pub fn objective_gradient(objective: &dyn DifferentiableObjective, theta: &[f64], mode: GradientMode) -> Result<Vec<f64>> {
    let v = objective.value(theta)?;
    if !v.is_finite() {
        return Err(Error::Evaluation { index: usize::MAX, value: v });
    }
    match mode {
        GradientMode::Analytic => Ok(objective.value_and_grad(theta)?.1),
        GradientMode::FiniteDifference => finite_difference_gradient(|t| objective.value(t), theta),
    }
}
