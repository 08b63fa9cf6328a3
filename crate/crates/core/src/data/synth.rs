//! Synthetic multi-task data drawn from a known GP, plus held-out test functions.
//!
//! Training tasks are exact joint samples of the GP marginal at each task's inputs.
//! Test functions must be evaluable anywhere in the box, so they are random-feature
//! realizations of the same GP, with the maximum located on a dense grid and then
//! polished by coordinate search.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::MultiTaskDataset;
use crate::error::{Error, Result};
use crate::gp::{Architecture, GpParams, KernelFamily, ObservationSet};
use crate::linalg::JitteredCholesky;
use crate::space::SearchSpace;
use crate::Point;

/// Default number of random features per test function.
pub const DEFAULT_FEATURES: usize = 1024;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub n_tasks: usize,
    pub points_per_task: usize,
    /// True GP parameters; their noise variance is the observation noise.
    pub params: GpParams,
    /// Fraction of each task's points placed on inputs shared by every task.
    pub matched_fraction: f64,
    pub n_test_functions: usize,
    /// Grid points per dimension for locating test-function maxima.
    pub grid_per_dim: Option<usize>,
    pub n_features: usize,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(n_tasks: usize, points_per_task: usize, params: GpParams, seed: u64) -> Self {
        Self {
            n_tasks,
            points_per_task,
            params,
            matched_fraction: 0.5,
            n_test_functions: 0,
            grid_per_dim: None,
            n_features: DEFAULT_FEATURES,
            seed,
        }
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn matched_count(&self) -> usize {
        (self.matched_fraction * self.points_per_task as f64).round() as usize
    }

    fn grid(&self) -> usize {
        self.grid_per_dim.unwrap_or_else(|| default_grid_per_dim(self.dim()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tasks == 0 || self.points_per_task == 0 {
            return Err(Error::validation("need at least one task and one point per task"));
        }
        if !(0.0..=1.0).contains(&self.matched_fraction) {
            return Err(Error::validation("matched fraction must lie in [0, 1]"));
        }
        if self.n_test_functions > 0 && self.n_features == 0 {
            return Err(Error::validation("test functions need at least one random feature"));
        }
        self.params.check_finite()
    }
}

/// 200 points per dimension up to d = 2, then about 1e5 grid points in total.
pub fn default_grid_per_dim(d: usize) -> usize {
    if d <= 2 {
        200
    } else {
        ((1e5f64).powf(1.0 / d as f64).floor() as usize).max(2)
    }
}

/// Random-feature realization of a GP sample path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub name: String,
    pub architecture: Architecture,
    pub dim: usize,
    pub theta: Vec<f64>,
    /// Frequencies for unit lengthscales, one row per feature.
    pub frequencies: Vec<Vec<f64>>,
    pub phases: Vec<f64>,
    pub weights: Vec<f64>,
    pub f_max: f64,
    pub argmax: Point,
}

impl TestFunction {
    pub fn params(&self) -> Result<GpParams> {
        GpParams::from_flat(self.architecture, self.dim, self.theta.clone())
    }

    /// Noiseless value at a point of the unit box.
    pub fn value(&self, x: &[f64]) -> f64 {
        let p = self.params().expect("test function parameters were validated at creation");
        self.value_with(&p, x)
    }

    fn value_with(&self, p: &GpParams, x: &[f64]) -> f64 {
        let z = p.features(x);
        let ls = p.lengthscales();
        let scale = p.amplitude() * (2.0 / self.phases.len() as f64).sqrt();
        let s: f64 = self
            .frequencies
            .iter()
            .zip(&self.phases)
            .zip(&self.weights)
            .map(|((w, b), g)| {
                let arg: f64 = w.iter().zip(&z).zip(&ls).map(|((wi, zi), l)| wi * zi / l).sum();
                g * (arg + b).cos()
            })
            .sum();
        p.mean_at(x) + scale * s
    }

    pub fn noise_variance(&self) -> f64 {
        self.params().map(|p| p.noise_variance()).unwrap_or(0.0)
    }
}

/// Everything a synthetic run produces.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub dataset: MultiTaskDataset,
    pub test_functions: Vec<TestFunction>,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform_point(rng: &mut impl Rng, d: usize) -> Point {
    (0..d).map(|_| rng.random::<f64>()).collect()
}

/// Draws one joint sample of `N(mu(X), k(X,X))` plus i.i.d. observation noise.
fn sample_task(params: &GpParams, xs: Vec<Point>, rng: &mut ChaCha8Rng) -> Result<ObservationSet> {
    let mean = params.mean_vector(&xs)?;
    let k = params.kernel_matrix(&xs, &xs)?;
    let chol = JitteredCholesky::new(&k, "synthetic task covariance")?;
    let z = DVector::from_iterator(xs.len(), (0..xs.len()).map(|_| rng.sample::<f64, _>(StandardNormal)));
    let f = mean + chol.factor.l() * z;
    let sd = params.noise_variance().sqrt();
    let ys = f.iter().map(|v| v + sd * rng.sample::<f64, _>(StandardNormal)).collect();
    ObservationSet::new(xs, ys)
}

/// Random-feature draw from the Matérn-3/2 spectral density (multivariate t, 3 dof).
fn draw_test_function(params: &GpParams, n_features: usize, grid: usize, name: String, rng: &mut ChaCha8Rng) -> Result<TestFunction> {
    let fdim = params.arch.feature_dim(params.dim());
    let chi = ChiSquared::new(3.0).expect("valid dof");
    let frequencies = match params.kernel {
        KernelFamily::Matern32 => (0..n_features)
            .map(|_| {
                let w: f64 = chi.sample(rng);
                let s = (3.0 / w).sqrt();
                (0..fdim).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect()
            })
            .collect(),
    };
    let phases = (0..n_features).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
    let weights = (0..n_features).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let mut tf = TestFunction {
        name,
        architecture: params.arch,
        dim: params.dim(),
        theta: params.as_flat().to_vec(),
        frequencies,
        phases,
        weights,
        f_max: f64::NEG_INFINITY,
        argmax: vec![],
    };
    let (argmax, f_max) = locate_maximum(&tf, params, grid);
    tf.argmax = argmax;
    tf.f_max = f_max;
    Ok(tf)
}

fn grid_point(mut idx: usize, grid: usize, d: usize) -> Point {
    (0..d)
        .map(|_| {
            let i = idx % grid;
            idx /= grid;
            if grid == 1 { 0.5 } else { i as f64 / (grid - 1) as f64 }
        })
        .collect()
}

fn locate_maximum(tf: &TestFunction, params: &GpParams, grid: usize) -> (Point, f64) {
    let d = tf.dim;
    let total = grid.pow(d as u32);
    let (best_idx, best_val) = (0..total)
        .into_par_iter()
        .map(|i| (i, tf.value_with(params, &grid_point(i, grid, d))))
        .reduce(|| (usize::MAX, f64::NEG_INFINITY), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    let mut x = grid_point(best_idx, grid, d);
    let mut fx = best_val;
    let mut step = 1.0 / grid.max(2) as f64;
    while step > 1e-7 {
        let mut improved = false;
        for q in 0..d {
            for dir in [-1.0, 1.0] {
                let mut y = x.clone();
                y[q] = (y[q] + dir * step).clamp(0.0, 1.0);
                let fy = tf.value_with(params, &y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Generates `N` training tasks from the true GP and the configured test functions.
pub fn synth_generate(config: &SynthConfig) -> Result<SynthOutput> {
    config.validate()?;
    let d = config.dim();
    let mut shared_rng = rng_for(config.seed, 0);
    let matched: Vec<Point> = (0..config.matched_count()).map(|_| uniform_point(&mut shared_rng, d)).collect();
    let tasks = (0..config.n_tasks)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(config.seed, 1 + i as u64);
            let mut xs = matched.clone();
            xs.extend((matched.len()..config.points_per_task).map(|_| uniform_point(&mut rng, d)));
            Ok((format!("task-{i:04}"), sample_task(&config.params, xs, &mut rng)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let dataset = MultiTaskDataset::from_observations(SearchSpace::unit(d), tasks)?;
    let grid = config.grid();
    let test_functions = (0..config.n_test_functions)
        .into_par_iter()
        .map(|j| {
            let mut rng = rng_for(config.seed, (1u64 << 32) + j as u64);
            draw_test_function(&config.params, config.n_features, grid, format!("test-{j:04}"), &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SynthOutput { dataset, test_functions })
}
