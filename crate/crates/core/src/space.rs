//! Hyper-rectangular search spaces and the input warping onto the unit box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a raw dimension is mapped before the affine rescale to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    Linear,
    /// `v -> ln v`; requires `low > 0`.
    Log,
    /// `v -> ln(1 - v)`; requires `high < 1`.
    OneMinusLog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimSpec {
    pub name: String,
    pub low: f64,
    pub high: f64,
    pub scaling: Scaling,
}

impl DimSpec {
    pub fn linear(name: impl Into<String>, low: f64, high: f64) -> Self {
        Self { name: name.into(), low, high, scaling: Scaling::Linear }
    }

    fn transform(&self, v: f64) -> f64 {
        match self.scaling {
            Scaling::Linear => v,
            Scaling::Log => v.ln(),
            Scaling::OneMinusLog => (1.0 - v).ln(),
        }
    }

    fn inverse_transform(&self, u: f64) -> f64 {
        match self.scaling {
            Scaling::Linear => u,
            Scaling::Log => u.exp(),
            Scaling::OneMinusLog => 1.0 - u.exp(),
        }
    }

    /// Transformed bounds, ordered so that `lo < hi`.
    fn warped_bounds(&self) -> (f64, f64) {
        let a = self.transform(self.low);
        let b = self.transform(self.high);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Whether the transform reverses order (one-minus-log does).
    fn reversed(&self) -> bool {
        self.scaling == Scaling::OneMinusLog
    }

    fn validate(&self) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite()) || self.low >= self.high {
            return Err(Error::validation(format!(
                "dimension `{}`: need finite low < high, got [{}, {}]",
                self.name, self.low, self.high
            )));
        }
        match self.scaling {
            Scaling::Log if self.low <= 0.0 => Err(Error::validation(format!(
                "dimension `{}`: log scaling needs low > 0",
                self.name
            ))),
            Scaling::OneMinusLog if self.high >= 1.0 => Err(Error::validation(format!(
                "dimension `{}`: one-minus-log scaling needs high < 1",
                self.name
            ))),
            _ => Ok(()),
        }
    }
}

/// A compact hyper-rectangle of named dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub dims: Vec<DimSpec>,
}

impl SearchSpace {
    pub fn new(dims: Vec<DimSpec>) -> Result<Self> {
        let space = Self { dims };
        space.validate()?;
        Ok(space)
    }

    /// `[0, 1]^d` with linear dimensions named `x0, x1, ...`.
    pub fn unit(d: usize) -> Self {
        Self { dims: (0..d).map(|i| DimSpec::linear(format!("x{i}"), 0.0, 1.0)).collect() }
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::validation("search space has no dimensions"));
        }
        self.dims.iter().try_for_each(DimSpec::validate)
    }

    /// Maps a raw point to the unit box: per-dimension transform, then affine rescale.
    pub fn warp(&self, x_raw: &[f64]) -> Result<Vec<f64>> {
        if x_raw.len() != self.d() {
            return Err(Error::input(format!(
                "point has {} coordinates, search space has {}",
                x_raw.len(),
                self.d()
            )));
        }
        self.dims
            .iter()
            .zip(x_raw)
            .map(|(dim, &v)| {
                if !(v >= dim.low && v <= dim.high) {
                    return Err(Error::validation(format!(
                        "dimension `{}`: value {} outside [{}, {}]",
                        dim.name, v, dim.low, dim.high
                    )));
                }
                let (lo, hi) = dim.warped_bounds();
                let u = (dim.transform(v) - lo) / (hi - lo);
                Ok(if dim.reversed() { 1.0 - u } else { u })
            })
            .collect()
    }

    /// Exact inverse of [`SearchSpace::warp`] (up to rounding).
    pub fn unwarp(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.d() {
            return Err(Error::input(format!(
                "point has {} coordinates, search space has {}",
                point.len(),
                self.d()
            )));
        }
        self.dims
            .iter()
            .zip(point)
            .map(|(dim, &p)| {
                if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                    return Err(Error::validation(format!(
                        "dimension `{}`: warped value {} outside [0, 1]",
                        dim.name, p
                    )));
                }
                let u = if dim.reversed() { 1.0 - p } else { p };
                let (lo, hi) = dim.warped_bounds();
                let v = dim.inverse_transform(lo + u * (hi - lo));
                Ok(v.clamp(dim.low, dim.high))
            })
            .collect()
    }
}
