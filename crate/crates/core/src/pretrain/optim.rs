//! Unconstrained minimizers used for pre-training.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::Result;

/// One line of the training log.
#[derive(Debug, Clone, PartialEq)]
pub struct IterLog {
    pub iter: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub wall_ms: u128,
}

impl IterLog {
    /// `iter, objective, grad_norm, wall_ms`.
    pub fn csv_line(&self) -> String {
        format!("{}, {:?}, {:?}, {}", self.iter, self.objective, self.grad_norm, self.wall_ms)
    }
}

pub const LOG_HEADER: &str = "iter, objective, grad_norm, wall_ms";

#[derive(Debug, Clone)]
pub struct OptOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Limited-memory BFGS with Armijo backtracking.
///
/// Every accepted step strictly decreases the objective. Evaluation errors during
/// the line search are treated as an infinite objective.
pub fn lbfgs(
    f: &dyn Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
    x0: Vec<f64>,
    max_iters: usize,
    tol: f64,
    on_iter: &mut dyn FnMut(&IterLog),
) -> Result<OptOutcome> {
    const MEMORY: usize = 10;
    const C1: f64 = 1e-4;
    let start = Instant::now();
    let (mut fx, mut g) = f(&x0)?;
    let mut x = x0;
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        let gnorm = norm(&g);
        if gnorm == 0.0 || !gnorm.is_finite() {
            converged = gnorm == 0.0;
            break;
        }
        // Two-loop recursion.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        let gamma = history.back().map_or(1.0 / gnorm.max(1.0), |(s, y, _)| dot(s, y) / dot(y, y));
        q.iter_mut().for_each(|v| *v *= gamma);
        for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut dir: Vec<f64> = q.into_iter().map(|v| -v).collect();
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            history.clear();
            dir = g.iter().map(|v| -v / gnorm.max(1.0)).collect();
            slope = dot(&g, &dir);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..50 {
            let xn: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            if let Ok((fn_, gn)) = f(&xn) {
                if fn_.is_finite() && fn_ <= fx + C1 * step * slope && fn_ < fx {
                    accepted = Some((xn, fn_, gn));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            if history.is_empty() {
                break;
            }
            history.clear();
            continue;
        };
        iterations += 1;
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            if history.len() == MEMORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        let rel = (fx - fn_) / fx.abs().max(1.0);
        x = xn;
        fx = fn_;
        g = gn;
        on_iter(&IterLog { iter: iterations, objective: fx, grad_norm: norm(&g), wall_ms: start.elapsed().as_millis() });
        if rel < tol {
            converged = true;
            break;
        }
    }
    Ok(OptOutcome { x, value: fx, iterations, converged })
}

/// Adam with step size `lr / sqrt(t)` on stochastic gradients from `f(t, x)`.
///
/// Returns the final iterate; the caller decides acceptance on the full objective.
pub fn decaying_adam(
    f: &mut dyn FnMut(usize, &[f64]) -> Result<(f64, Vec<f64>)>,
    x0: Vec<f64>,
    max_iters: usize,
    lr: f64,
    on_iter: &mut dyn FnMut(&IterLog),
) -> Result<Vec<f64>> {
    const B1: f64 = 0.9;
    const B2: f64 = 0.999;
    let start = Instant::now();
    let mut x = x0;
    let mut m = vec![0.0; x.len()];
    let mut v = vec![0.0; x.len()];
    for t in 1..=max_iters {
        let (fx, g) = f(t, &x)?;
        if !fx.is_finite() || g.iter().any(|gi| !gi.is_finite()) {
            break;
        }
        let step = lr / (t as f64).sqrt();
        let (c1, c2) = (1.0 - B1.powi(t as i32), 1.0 - B2.powi(t as i32));
        for i in 0..x.len() {
            m[i] = B1 * m[i] + (1.0 - B1) * g[i];
            v[i] = B2 * v[i] + (1.0 - B2) * g[i] * g[i];
            x[i] -= step * (m[i] / c1) / ((v[i] / c2).sqrt() + 1e-8);
        }
        on_iter(&IterLog { iter: t, objective: fx, grad_norm: norm(&g), wall_ms: start.elapsed().as_millis() });
    }
    Ok(x)
}
