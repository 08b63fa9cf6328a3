//! The optimization loop and its baselines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::Oracle;
use super::trace::{BoStep, BoTrace};
use crate::acquisition::{maximize, AcquisitionSpec, Domain};
use crate::data::{MultiTaskDataset, INFEASIBLE_VALUE};
use crate::error::{Error, Result};
use crate::gp::{condition, Architecture, GpParams, GpPrior, ObservationSet};
use crate::pretrain::{pretrain, pretrain_from, ObjectiveKind, TrainConfig};
use crate::space::SearchSpace;
use crate::Point;

pub const METHOD_RANDOM: &str = "rand";
pub const METHOD_STBO: &str = "stbo";

/// Re-fit budget for the single-task baseline.
pub const STBO_REFIT_ITERS: usize = 100;

/// Box on amplitude and lengthscales for single-task re-fits, and the noise floor.
/// Without it the likelihood of a handful of points is unbounded.
pub const STBO_SCALE_RANGE: (f64, f64) = (1e-3, 1e3);
pub const STBO_NOISE_FLOOR: f64 = 1e-6;

fn streams(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut noise = ChaCha8Rng::seed_from_u64(seed);
    noise.set_stream(0);
    let mut choice = ChaCha8Rng::seed_from_u64(seed);
    choice.set_stream(1);
    (noise, choice)
}

fn observe(oracle: &dyn Oracle, x: &[f64], index: Option<usize>, rng: &mut ChaCha8Rng) -> Result<f64> {
    Ok(oracle.evaluate(x, index, rng)?.unwrap_or(INFEASIBLE_VALUE))
}

fn uniform_choice(oracle: &dyn Oracle, rng: &mut ChaCha8Rng) -> Result<(Point, Option<usize>)> {
    match oracle.domain() {
        Domain::Candidates(c) => {
            if c.is_empty() {
                return Err(Error::input("candidate set is empty"));
            }
            let i = rng.random_range(0..c.len());
            Ok((c[i].clone(), Some(i)))
        }
        Domain::UnitBox(d) => Ok(((0..d).map(|_| rng.random::<f64>()).collect(), None)),
    }
}

/// Runs `t_iters` rounds with a frozen prior, starting from no data.
pub fn run_bo(
    model: &dyn GpPrior,
    oracle: &dyn Oracle,
    spec: &AcquisitionSpec,
    t_iters: usize,
    seed: u64,
    method_tag: &str,
) -> Result<BoTrace> {
    if model.dim() != oracle.dim() {
        return Err(Error::input(format!("model has dimension {} but the objective has {}", model.dim(), oracle.dim())));
    }
    let (mut noise_rng, mut choice_rng) = streams(seed);
    let mut data = ObservationSet::default();
    let mut steps = Vec::with_capacity(t_iters);
    for _ in 0..t_iters {
        let posterior = condition(model, data.clone())?;
        let choice = maximize(spec, &posterior, oracle.domain(), choice_rng.random())?;
        let y = observe(oracle, &choice.x, choice.index, &mut noise_rng)?;
        let f_true = oracle.true_value(&choice.x, choice.index);
        data.push(choice.x.clone(), y);
        steps.push(BoStep { x: choice.x, y, acq_value: choice.value, f_true });
    }
    Ok(BoTrace::from_steps(steps, oracle.f_max(), seed, method_tag))
}

/// Uniform random search over the candidates (with replacement) or the unit box.
pub fn run_random(oracle: &dyn Oracle, t_iters: usize, seed: u64) -> Result<BoTrace> {
    let (mut noise_rng, mut choice_rng) = streams(seed);
    let mut steps = Vec::with_capacity(t_iters);
    for _ in 0..t_iters {
        let (x, index) = uniform_choice(oracle, &mut choice_rng)?;
        let y = observe(oracle, &x, index, &mut noise_rng)?;
        let f_true = oracle.true_value(&x, index);
        steps.push(BoStep { x, y, acq_value: f64::NAN, f_true });
    }
    Ok(BoTrace::from_steps(steps, oracle.f_max(), seed, METHOD_RANDOM))
}

/// Bookkeeping from a single-task run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StboLog {
    /// Number of observations used by each re-fit.
    pub refit_sizes: Vec<usize>,
    /// Iterations at which the re-fit failed and the previous parameters were kept.
    pub failed_refits: Vec<usize>,
}

/// Single-task baseline: re-fits the GP by maximum likelihood on the task's own
/// data before every acquisition after the first, which is uniform.
pub fn run_stbo(arch: Architecture, oracle: &dyn Oracle, spec: &AcquisitionSpec, t_iters: usize, seed: u64) -> Result<BoTrace> {
    run_stbo_logged(arch, oracle, spec, t_iters, seed).map(|(t, _)| t)
}

pub fn run_stbo_logged(
    arch: Architecture,
    oracle: &dyn Oracle,
    spec: &AcquisitionSpec,
    t_iters: usize,
    seed: u64,
) -> Result<(BoTrace, StboLog)> {
    let (mut noise_rng, mut choice_rng) = streams(seed);
    let d = oracle.dim();
    let mut data = ObservationSet::default();
    let mut steps = Vec::with_capacity(t_iters);
    let mut log = StboLog::default();
    let mut params: Option<GpParams> = None;
    let config = TrainConfig { objective: ObjectiveKind::Nll, max_iters: STBO_REFIT_ITERS, seed, ..Default::default() };
    for t in 0..t_iters {
        let (x, index, acq_value) = if t == 0 {
            let (x, i) = uniform_choice(oracle, &mut choice_rng)?;
            (x, i, f64::NAN)
        } else {
            log.refit_sizes.push(data.len());
            match refit(&data, d, arch, params.clone(), &config) {
                Ok(p) => params = Some(p),
                Err(e) => {
                    log::warn!("single-task re-fit at iteration {} failed, keeping previous parameters: {e}", t + 1);
                    log.failed_refits.push(t + 1);
                }
            }
            let choice_seed: u64 = choice_rng.random();
            match &params {
                Some(p) => {
                    let posterior = condition(p, data.clone())?;
                    let c = maximize(spec, &posterior, oracle.domain(), choice_seed)?;
                    (c.x, c.index, c.value)
                }
                None => {
                    let (x, i) = uniform_choice(oracle, &mut choice_rng)?;
                    (x, i, f64::NAN)
                }
            }
        };
        let y = observe(oracle, &x, index, &mut noise_rng)?;
        let f_true = oracle.true_value(&x, index);
        data.push(x.clone(), y);
        steps.push(BoStep { x, y, acq_value, f_true });
    }
    Ok((BoTrace::from_steps(steps, oracle.f_max(), seed, METHOD_STBO), log))
}

fn refit(data: &ObservationSet, d: usize, arch: Architecture, warm: Option<GpParams>, config: &TrainConfig) -> Result<GpParams> {
    let ds = MultiTaskDataset::from_observations(SearchSpace::unit(d), vec![("task".to_string(), data.clone())])?;
    let report = match warm {
        Some(p) => pretrain_from(&ds, p, config)?,
        None => pretrain(&ds, arch, config)?,
    };
    let p = clamp_scales(report.params)?;
    let post = condition(&p, data.clone())?;
    let (mu, var) = post.predict_diag(&data.xs)?;
    if mu.iter().chain(&var).any(|v| !v.is_finite()) {
        return Err(Error::Numerical { context: "re-fitted posterior is not finite".into(), attempted: vec![] });
    }
    Ok(p)
}

fn clamp_scales(p: GpParams) -> Result<GpParams> {
    let l = p.layout();
    let (lo, hi) = (STBO_SCALE_RANGE.0.ln(), STBO_SCALE_RANGE.1.ln());
    let mut t = p.as_flat().to_vec();
    for i in std::iter::once(l.log_amplitude).chain(l.log_lengthscales.clone()) {
        t[i] = t[i].clamp(lo, hi);
    }
    t[l.log_noise] = t[l.log_noise].clamp(STBO_NOISE_FLOOR.ln(), hi);
    GpParams::from_flat(p.arch, p.dim(), t)
}

/// `R_T = f_max - f(x_hat)`, using the noiseless value at the recommendation when known.
pub fn simple_regret(trace: &BoTrace, f_max: f64) -> Result<f64> {
    let tau = trace.best_index().ok_or_else(|| Error::input("simple regret of an empty trace"))?;
    let s = &trace.steps[tau];
    Ok(f_max - s.f_true.unwrap_or(s.y))
}
