use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gradient::{DifferentiableObjective, GradientMode};
use super::moments::MatchingMoments;
use super::objectives::{
    combined_objective, combined_value_and_grad, kl_objective, kl_value_and_grad, nll_objective, nll_value_and_grad,
    KlForm,
};
use super::optim::{decaying_adam, lbfgs, IterLog};
use crate::data::{extract_matching, MultiTaskDataset, Task, MATCH_TOL};
use crate::error::{Error, Result};
use crate::gp::{Architecture, GpParams, ParamLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Nll,
    Kl,
    NllPlusKl,
}

impl ObjectiveKind {
    pub fn needs_matching(self) -> bool {
        !matches!(self, ObjectiveKind::Nll)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchSize {
    Full,
    Points(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub objective: ObjectiveKind,
    pub lambda: f64,
    pub max_iters: usize,
    pub batch: BatchSize,
    pub seed: u64,
    pub gradient_mode: GradientMode,
    pub convergence_tol: f64,
    /// Base step size for mini-batch training.
    pub learning_rate: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            objective: ObjectiveKind::Nll,
            lambda: 10.0,
            max_iters: 200,
            batch: BatchSize::Full,
            seed: 0,
            gradient_mode: GradientMode::Analytic,
            convergence_tol: 1e-8,
            learning_rate: 0.05,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(Error::validation("lambda must be non-negative"));
        }
        if self.max_iters == 0 {
            return Err(Error::validation("max_iters must be positive"));
        }
        if self.batch == BatchSize::Points(0) {
            return Err(Error::validation("batch size must be positive"));
        }
        Ok(())
    }
}

/// The training objective as a function of the flat parameter vector.
pub struct TrainingObjective<'a> {
    pub arch: Architecture,
    pub dim: usize,
    pub kind: ObjectiveKind,
    pub lambda: f64,
    pub dataset: &'a MultiTaskDataset,
    pub moments: Option<&'a MatchingMoments>,
}

impl TrainingObjective<'_> {
    fn params(&self, theta: &[f64]) -> Result<GpParams> {
        GpParams::from_flat(self.arch, self.dim, theta.to_vec())
    }

    fn moments(&self) -> Result<&MatchingMoments> {
        self.moments.ok_or(Error::NoMatchingData { n_tasks: self.dataset.n_tasks(), tol: MATCH_TOL })
    }

    pub fn analytic(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let p = self.params(theta)?;
        match self.kind {
            ObjectiveKind::Nll => nll_value_and_grad(&p, self.dataset),
            ObjectiveKind::Kl => kl_value_and_grad(&p, self.moments()?, KlForm::Full),
            ObjectiveKind::NllPlusKl => combined_value_and_grad(&p, self.dataset, self.moments()?, self.lambda),
        }
    }
}

impl DifferentiableObjective for TrainingObjective<'_> {
    fn value(&self, theta: &[f64]) -> Result<f64> {
        let p = self.params(theta)?;
        match self.kind {
            ObjectiveKind::Nll => nll_objective(&p, self.dataset),
            ObjectiveKind::Kl => kl_objective(&p, self.moments()?),
            ObjectiveKind::NllPlusKl => combined_objective(&p, self.dataset, self.moments()?, self.lambda),
        }
    }

    fn value_and_grad(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.analytic(theta)
    }
}

/// Result of a pre-training run.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub params: GpParams,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub log: Vec<IterLog>,
}

/// Seeded initialization: log-amplitude, log-lengthscales, and log-noise uniform
/// in `(-1, 1)`; network weights uniform in `+-1/sqrt(fan_in)`; mean offset at `mean`.
pub fn initial_params(arch: Architecture, dim: usize, mean: f64, rng: &mut impl Rng) -> GpParams {
    let l = ParamLayout::new(arch, dim);
    let mut theta = vec![0.0; l.len];
    let mut uni = |scale: f64| (rng.random::<f64>() * 2.0 - 1.0) * scale;
    let in_scale = 1.0 / (dim as f64).sqrt();
    for i in l.feature_weights.clone().chain(l.feature_biases.clone()) {
        theta[i] = uni(in_scale);
    }
    let hidden_scale = 1.0 / (crate::gp::MLP_WIDTH as f64).sqrt();
    for i in l.mean_weights.clone() {
        theta[i] = uni(hidden_scale);
    }
    theta[l.mean_offset] = mean;
    theta[l.log_amplitude] = uni(1.0);
    for i in l.log_lengthscales.clone() {
        theta[i] = uni(1.0);
    }
    theta[l.log_noise] = uni(1.0);
    GpParams::from_flat(arch, dim, theta).expect("layout length matches")
}

fn sample_mean(dataset: &MultiTaskDataset) -> f64 {
    let (s, n) = dataset.all_ys().fold((0.0, 0usize), |(s, n), y| (s + y, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

const MAX_INIT_ATTEMPTS: usize = 10;

/// Pre-trains from a seeded random initialization.
pub fn pretrain(dataset: &MultiTaskDataset, arch: Architecture, config: &TrainConfig) -> Result<TrainReport> {
    pretrain_logged(dataset, arch, config, &mut |_| {})
}

pub fn pretrain_logged(
    dataset: &MultiTaskDataset,
    arch: Architecture,
    config: &TrainConfig,
    on_iter: &mut dyn FnMut(&IterLog),
) -> Result<TrainReport> {
    config.validate()?;
    let moments = prepare(dataset, config)?;
    let objective = TrainingObjective {
        arch,
        dim: dataset.dim(),
        kind: config.objective,
        lambda: config.lambda,
        dataset,
        moments: moments.as_ref(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mean = sample_mean(dataset);
    let mut last = String::new();
    for _ in 0..MAX_INIT_ATTEMPTS {
        let init = initial_params(arch, dataset.dim(), mean, &mut rng);
        match objective.value(init.as_flat()) {
            Ok(v) if v.is_finite() => return optimize(&objective, init, v, config, &mut rng, on_iter),
            Ok(v) => last = format!("objective is {v}"),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::Initialization { attempts: MAX_INIT_ATTEMPTS, last })
}

/// Pre-trains starting from the given parameters.
pub fn pretrain_from(dataset: &MultiTaskDataset, init: GpParams, config: &TrainConfig) -> Result<TrainReport> {
    config.validate()?;
    if init.dim() != dataset.dim() {
        return Err(Error::input("initial parameters do not match the dataset dimension"));
    }
    let moments = prepare(dataset, config)?;
    let objective = TrainingObjective {
        arch: init.arch,
        dim: dataset.dim(),
        kind: config.objective,
        lambda: config.lambda,
        dataset,
        moments: moments.as_ref(),
    };
    let v = objective.value(init.as_flat())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    optimize(&objective, init, v, config, &mut rng, &mut |_| {})
}

fn prepare(dataset: &MultiTaskDataset, config: &TrainConfig) -> Result<Option<MatchingMoments>> {
    if dataset.tasks.is_empty() || dataset.tasks.iter().any(|t| t.observations.is_empty()) {
        return Err(Error::input("every task needs at least one observation"));
    }
    let needs = config.objective.needs_matching() && !(config.objective == ObjectiveKind::NllPlusKl && config.lambda == 0.0);
    if !needs {
        return Ok(None);
    }
    if dataset.n_tasks() < 2 {
        return Err(Error::NoMatchingData { n_tasks: dataset.n_tasks(), tol: MATCH_TOL });
    }
    extract_matching(dataset, MATCH_TOL).map(Some)
}

fn optimize(
    objective: &TrainingObjective<'_>,
    init: GpParams,
    initial_objective: f64,
    config: &TrainConfig,
    rng: &mut ChaCha8Rng,
    on_iter: &mut dyn FnMut(&IterLog),
) -> Result<TrainReport> {
    let mut log = Vec::new();
    let mut record = |l: &IterLog| {
        on_iter(l);
        log.push(l.clone());
    };
    let (theta, iterations, converged) = match config.batch {
        BatchSize::Full => {
            let eval = |t: &[f64]| -> Result<(f64, Vec<f64>)> {
                match config.gradient_mode {
                    GradientMode::Analytic => objective.analytic(t),
                    GradientMode::FiniteDifference => {
                        let v = objective.value(t)?;
                        Ok((v, super::gradient::finite_difference_gradient(|x| objective.value(x), t)?))
                    }
                }
            };
            let out = lbfgs(&eval, init.as_flat().to_vec(), config.max_iters, config.convergence_tol, &mut record)?;
            (out.x, out.iterations, out.converged)
        }
        BatchSize::Points(b) => {
            let mut step = |_: usize, t: &[f64]| -> Result<(f64, Vec<f64>)> {
                let ds = subsample_dataset(objective.dataset, b, rng);
                let mm = objective.moments.map(|m| subsample_moments(m, b, rng));
                let sub = TrainingObjective { dataset: &ds, moments: mm.as_ref(), ..*objective };
                match config.gradient_mode {
                    GradientMode::Analytic => sub.analytic(t),
                    GradientMode::FiniteDifference => {
                        let v = sub.value(t)?;
                        Ok((v, super::gradient::finite_difference_gradient(|x| sub.value(x), t)?))
                    }
                }
            };
            let x = decaying_adam(&mut step, init.as_flat().to_vec(), config.max_iters, config.learning_rate, &mut record)?;
            (x, config.max_iters, false)
        }
    };
    let candidate = GpParams::from_flat(init.arch, init.dim(), theta)?;
    let final_value = objective.value(candidate.as_flat()).unwrap_or(f64::INFINITY);
    // Never return something worse than the starting point.
    let (params, final_objective) = if final_value <= initial_objective {
        (candidate, final_value)
    } else {
        (init, initial_objective)
    };
    Ok(TrainReport { params, initial_objective, final_objective, iterations, converged, log })
}

/// `b` points per task without replacement (all points when a task has fewer).
fn subsample_dataset(dataset: &MultiTaskDataset, b: usize, rng: &mut ChaCha8Rng) -> MultiTaskDataset {
    let tasks = dataset
        .tasks
        .iter()
        .map(|t| {
            let n = t.observations.len();
            if n <= b {
                return t.clone();
            }
            let mut idx = sample(rng, n, b).into_vec();
            idx.sort_unstable();
            Task { name: t.name.clone(), observations: t.observations.select(&idx), raw: Vec::new() }
        })
        .collect();
    MultiTaskDataset { search_space: dataset.search_space.clone(), output_warping: dataset.output_warping, tasks }
}

fn subsample_moments(m: &MatchingMoments, b: usize, rng: &mut ChaCha8Rng) -> MatchingMoments {
    if m.m() <= b {
        return m.clone();
    }
    let mut idx = sample(rng, m.m(), b).into_vec();
    idx.sort_unstable();
    m.select(&idx)
}
