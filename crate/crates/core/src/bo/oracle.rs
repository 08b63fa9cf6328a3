//! Objectives the optimization loop can query.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::acquisition::Domain;
use crate::data::TestFunction;
use crate::error::{Error, Result};
use crate::Point;

/// A black-box function over either a finite table or the unit box.
///
/// `evaluate` returns `Ok(None)` for an infeasible trial.
pub trait Oracle: Sync {
    fn domain(&self) -> Domain<'_>;

    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[f64], index: Option<usize>, rng: &mut ChaCha8Rng) -> Result<Option<f64>>;

    /// Noiseless value, when the oracle knows it.
    fn true_value(&self, _x: &[f64], _index: Option<usize>) -> Option<f64> {
        None
    }

    fn f_max(&self) -> Option<f64> {
        None
    }
}

/// Offline lookup table of warped values, one per point.
#[derive(Debug, Clone)]
pub struct TableOracle {
    pub xs: Vec<Point>,
    pub ys: Vec<f64>,
}

impl TableOracle {
    pub fn new(xs: Vec<Point>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::input("lookup table is empty"));
        }
        if xs.len() != ys.len() {
            return Err(Error::input("lookup table has mismatched inputs and outputs"));
        }
        let d = xs[0].len();
        if xs.iter().any(|x| x.len() != d) {
            return Err(Error::input("lookup table inputs have inconsistent dimensions"));
        }
        Ok(Self { xs, ys })
    }

    fn lookup(&self, x: &[f64], index: Option<usize>) -> Option<f64> {
        match index {
            Some(i) => self.ys.get(i).copied(),
            None => self.xs.iter().position(|p| p.as_slice() == x).map(|i| self.ys[i]),
        }
    }
}

impl Oracle for TableOracle {
    fn domain(&self) -> Domain<'_> {
        Domain::Candidates(&self.xs)
    }

    fn dim(&self) -> usize {
        self.xs[0].len()
    }

    fn evaluate(&self, x: &[f64], index: Option<usize>, _rng: &mut ChaCha8Rng) -> Result<Option<f64>> {
        self.lookup(x, index).map(Some).ok_or_else(|| Error::input("point is not in the lookup table"))
    }

    fn true_value(&self, x: &[f64], index: Option<usize>) -> Option<f64> {
        self.lookup(x, index)
    }

    fn f_max(&self) -> Option<f64> {
        self.ys.iter().cloned().reduce(f64::max)
    }
}

/// A synthetic test function observed with Gaussian noise.
#[derive(Debug, Clone)]
pub struct SyntheticOracle {
    function: TestFunction,
    noise_sd: f64,
}

impl SyntheticOracle {
    pub fn new(function: TestFunction) -> Result<Self> {
        let noise_sd = function.params()?.noise_variance().sqrt();
        Ok(Self { function, noise_sd })
    }

    /// Observations without noise.
    pub fn noiseless(mut self) -> Self {
        self.noise_sd = 0.0;
        self
    }

    pub fn function(&self) -> &TestFunction {
        &self.function
    }
}

impl Oracle for SyntheticOracle {
    fn domain(&self) -> Domain<'_> {
        Domain::UnitBox(self.function.dim)
    }

    fn dim(&self) -> usize {
        self.function.dim
    }

    fn evaluate(&self, x: &[f64], _index: Option<usize>, rng: &mut ChaCha8Rng) -> Result<Option<f64>> {
        if x.len() != self.dim() {
            return Err(Error::input("point dimension does not match the test function"));
        }
        let eps: f64 = rng.sample(StandardNormal);
        Ok(Some(self.function.value(x) + self.noise_sd * eps))
    }

    fn true_value(&self, x: &[f64], _index: Option<usize>) -> Option<f64> {
        Some(self.function.value(x))
    }

    fn f_max(&self) -> Option<f64> {
        Some(self.function.f_max)
    }
}

/// Wraps a closure over the unit box.
pub struct FnOracle<F> {
    pub dim: usize,
    pub f: F,
    pub f_max: Option<f64>,
}

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&[f64]) -> Result<Option<f64>> + Sync,
{
    fn domain(&self) -> Domain<'_> {
        Domain::UnitBox(self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64], _index: Option<usize>, _rng: &mut ChaCha8Rng) -> Result<Option<f64>> {
        (self.f)(x)
    }

    fn f_max(&self) -> Option<f64> {
        self.f_max
    }
}
