//! GP parameters stored as one flat, unconstrained vector with a named layout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::kernel::{scaled_sq_dist, KernelFamily};
use crate::error::{Error, Result};
use crate::Point;

/// Hidden width of the feature network used by [`Architecture::MlpMatern`].
pub const MLP_WIDTH: usize = 8;

/// First line of every model document.
pub const MODEL_DOC_HEADER: &str = "metagp-model v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    /// Constant mean and an ARD Matérn-3/2 kernel on raw inputs.
    ConstMatern,
    /// One tanh hidden layer of width 8 shared by a linear mean and a
    /// Matérn-3/2 kernel with one lengthscale per feature.
    #[serde(rename = "mlp8-matern")]
    MlpMatern,
}

impl Architecture {
    pub fn name(self) -> &'static str {
        match self {
            Architecture::ConstMatern => "const-matern",
            Architecture::MlpMatern => "mlp8-matern",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "const-matern" => Some(Architecture::ConstMatern),
            "mlp8-matern" => Some(Architecture::MlpMatern),
            _ => None,
        }
    }

    /// Dimension of the inputs the kernel sees.
    pub fn feature_dim(self, d: usize) -> usize {
        match self {
            Architecture::ConstMatern => d,
            Architecture::MlpMatern => MLP_WIDTH,
        }
    }
}

/// Offsets of each named block inside the flat parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLayout {
    pub arch: Architecture,
    pub dim: usize,
    pub feature_weights: Range<usize>,
    pub feature_biases: Range<usize>,
    pub mean_weights: Range<usize>,
    pub mean_offset: usize,
    pub log_amplitude: usize,
    pub log_lengthscales: Range<usize>,
    pub log_noise: usize,
    pub len: usize,
}

impl ParamLayout {
    pub fn new(arch: Architecture, dim: usize) -> Self {
        let (fw, fb, mw) = match arch {
            Architecture::ConstMatern => (0..0, 0..0, 0..0),
            Architecture::MlpMatern => {
                let w = MLP_WIDTH * dim;
                (0..w, w..w + MLP_WIDTH, w + MLP_WIDTH..w + 2 * MLP_WIDTH)
            }
        };
        let mean_offset = mw.end;
        let log_amplitude = mean_offset + 1;
        let nl = arch.feature_dim(dim);
        let log_lengthscales = log_amplitude + 1..log_amplitude + 1 + nl;
        let log_noise = log_lengthscales.end;
        Self {
            arch,
            dim,
            feature_weights: fw,
            feature_biases: fb,
            mean_weights: mw,
            mean_offset,
            log_amplitude,
            log_lengthscales,
            log_noise,
            len: log_noise + 1,
        }
    }
}

/// Mean, kernel, and noise parameters of a GP.
///
/// Positive quantities are stored as logs so any finite flat vector is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct GpParams {
    pub arch: Architecture,
    pub kernel: KernelFamily,
    dim: usize,
    theta: Vec<f64>,
}

impl GpParams {
    /// Unpacks a flat vector laid out per [`ParamLayout`].
    pub fn from_flat(arch: Architecture, dim: usize, theta: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("input dimension must be positive"));
        }
        let layout = ParamLayout::new(arch, dim);
        if theta.len() != layout.len {
            return Err(Error::input(format!(
                "{} parameters with d={} need {} values, got {}",
                arch.name(),
                dim,
                layout.len,
                theta.len()
            )));
        }
        Ok(Self { arch, kernel: KernelFamily::Matern32, dim, theta })
    }

    /// Constant-mean Matérn-3/2 parameters in natural units.
    pub fn const_matern(mean: f64, amplitude: f64, lengthscales: &[f64], noise_variance: f64) -> Result<Self> {
        if amplitude <= 0.0 || noise_variance < 0.0 || lengthscales.iter().any(|&l| l <= 0.0) {
            return Err(Error::Parameter("amplitude and lengthscales must be positive, noise non-negative".into()));
        }
        let mut theta = vec![mean, amplitude.ln()];
        theta.extend(lengthscales.iter().map(|l| l.ln()));
        theta.push(noise_variance.ln());
        Self::from_flat(Architecture::ConstMatern, lengthscales.len(), theta)
    }

    pub fn layout(&self) -> ParamLayout {
        ParamLayout::new(self.arch, self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self) -> f64 {
        self.theta[self.layout().log_amplitude].exp()
    }

    pub fn lengthscales(&self) -> Vec<f64> {
        self.theta[self.layout().log_lengthscales].iter().map(|v| v.exp()).collect()
    }

    pub fn noise_variance(&self) -> f64 {
        self.theta[self.layout().log_noise].exp()
    }

    pub fn mean_offset(&self) -> f64 {
        self.theta[self.layout().mean_offset]
    }

    pub fn set_noise_variance(&mut self, noise: f64) {
        let i = self.layout().log_noise;
        self.theta[i] = noise.ln();
    }

    /// Every entry finite, except `log_noise = -inf` (zero noise) which is allowed.
    pub fn check_finite(&self) -> Result<()> {
        let noise_at = self.layout().log_noise;
        let bad = |(i, v): &(usize, &f64)| !(v.is_finite() || (*i == noise_at && **v == f64::NEG_INFINITY));
        match self.theta.iter().enumerate().find(bad).map(|(i, _)| i) {
            Some(i) => Err(Error::Parameter(format!("parameter {} is {}", i, self.theta[i]))),
            None => Ok(()),
        }
    }

    fn check_points(&self, xs: &[Point]) -> Result<()> {
        match xs.iter().find(|x| x.len() != self.dim) {
            Some(x) => Err(Error::input(format!("point of dimension {} given to a d={} model", x.len(), self.dim))),
            None => Ok(()),
        }
    }

    /// Kernel inputs: the raw point, or the tanh feature layer.
    pub fn features(&self, x: &[f64]) -> Vec<f64> {
        match self.arch {
            Architecture::ConstMatern => x.to_vec(),
            Architecture::MlpMatern => {
                let l = self.layout();
                let w = &self.theta[l.feature_weights];
                let b = &self.theta[l.feature_biases];
                (0..MLP_WIDTH)
                    .map(|k| {
                        let row = &w[k * self.dim..(k + 1) * self.dim];
                        let h: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b[k];
                        h.tanh()
                    })
                    .collect()
            }
        }
    }

    fn mean_from_features(&self, z: &[f64]) -> f64 {
        let l = self.layout();
        let c = self.theta[l.mean_offset];
        match self.arch {
            Architecture::ConstMatern => c,
            Architecture::MlpMatern => {
                self.theta[l.mean_weights].iter().zip(z).map(|(w, v)| w * v).sum::<f64>() + c
            }
        }
    }

    pub fn mean_at(&self, x: &[f64]) -> f64 {
        self.mean_from_features(&self.features(x))
    }

    pub fn mean_vector(&self, xs: &[Point]) -> Result<DVector<f64>> {
        self.check_points(xs)?;
        Ok(DVector::from_iterator(xs.len(), xs.iter().map(|x| self.mean_at(x))))
    }

    pub fn kernel_at(&self, a: &[f64], b: &[f64]) -> f64 {
        let ls = self.lengthscales();
        let amp2 = self.amplitude().powi(2);
        amp2 * self.kernel.correlation(scaled_sq_dist(&self.features(a), &self.features(b), &ls))
    }

    pub fn kernel_matrix(&self, xs: &[Point], xs2: &[Point]) -> Result<DMatrix<f64>> {
        self.check_finite()?;
        self.check_points(xs)?;
        self.check_points(xs2)?;
        let ls = self.lengthscales();
        let amp2 = self.amplitude().powi(2);
        let za: Vec<Vec<f64>> = xs.iter().map(|x| self.features(x)).collect();
        let same = std::ptr::eq(xs, xs2);
        let zb: Vec<Vec<f64>> = if same { Vec::new() } else { xs2.iter().map(|x| self.features(x)).collect() };
        let zb = if same { &za } else { &zb };
        let mut k = DMatrix::zeros(xs.len(), xs2.len());
        for (i, a) in za.iter().enumerate() {
            for (j, b) in zb.iter().enumerate() {
                k[(i, j)] = amp2 * self.kernel.correlation(scaled_sq_dist(a, b, &ls));
            }
        }
        Ok(k)
    }

    /// Gradient of a scalar loss with respect to the flat parameters, given the
    /// loss gradients with respect to the marginal covariance `K(X,X) + noise I`
    /// and the mean vector at `xs`.
    pub fn backprop_marginal(&self, xs: &[Point], d_cov: &DMatrix<f64>, d_mean: &DVector<f64>) -> Vec<f64> {
        let l = self.layout();
        let n = xs.len();
        let mut grad = vec![0.0; l.len];
        let ls = self.lengthscales();
        let inv_ls2: Vec<f64> = ls.iter().map(|v| 1.0 / (v * v)).collect();
        let amp2 = self.amplitude().powi(2);
        let zs: Vec<Vec<f64>> = xs.iter().map(|x| self.features(x)).collect();
        let fdim = ls.len();
        let mut dz = vec![vec![0.0; fdim]; n];

        let mut trace = 0.0;
        for i in 0..n {
            trace += d_cov[(i, i)];
            for j in 0..n {
                let g = 0.5 * (d_cov[(i, j)] + d_cov[(j, i)]);
                if g == 0.0 {
                    continue;
                }
                let s2 = scaled_sq_dist(&zs[i], &zs[j], &ls);
                let kc = self.kernel.correlation(s2);
                let dk = amp2 * self.kernel.d_correlation_d_s2(s2);
                grad[l.log_amplitude] += g * 2.0 * amp2 * kc;
                for q in 0..fdim {
                    let delta = zs[i][q] - zs[j][q];
                    grad[l.log_lengthscales.start + q] += g * dk * (-2.0 * delta * delta * inv_ls2[q]);
                    dz[i][q] += 2.0 * g * dk * 2.0 * delta * inv_ls2[q];
                }
            }
        }
        grad[l.log_noise] = self.noise_variance() * trace;

        let gsum: f64 = d_mean.iter().sum();
        grad[l.mean_offset] = gsum;
        if self.arch == Architecture::MlpMatern {
            let w: Vec<f64> = self.theta[l.mean_weights.clone()].to_vec();
            for p in 0..n {
                for k in 0..MLP_WIDTH {
                    grad[l.mean_weights.start + k] += d_mean[p] * zs[p][k];
                    dz[p][k] += d_mean[p] * w[k];
                }
            }
            for p in 0..n {
                for k in 0..MLP_WIDTH {
                    let dh = dz[p][k] * (1.0 - zs[p][k] * zs[p][k]);
                    grad[l.feature_biases.start + k] += dh;
                    for q in 0..self.dim {
                        grad[l.feature_weights.start + k * self.dim + q] += dh * xs[p][q];
                    }
                }
            }
        }
        grad
    }

    /// Serializes to the versioned `key value...` text document.
    pub fn to_document(&self) -> String {
        self.to_document_with(&BTreeMap::new())
    }

    /// Like [`GpParams::to_document`] with extra numeric keys appended.
    pub fn to_document_with(&self, extras: &BTreeMap<String, Vec<f64>>) -> String {
        let l = self.layout();
        let mut out = String::new();
        let mut line = |key: &str, vals: &[f64]| {
            let _ = write!(out, "{key}");
            for v in vals {
                let _ = write!(out, " {v:?}");
            }
            out.push('\n');
        };
        line("dim", &[self.dim as f64]);
        if self.arch == Architecture::MlpMatern {
            line("feature_weights", &self.theta[l.feature_weights.clone()]);
            line("feature_biases", &self.theta[l.feature_biases.clone()]);
            line("mean_weights", &self.theta[l.mean_weights.clone()]);
        }
        line("mean_offset", &[self.theta[l.mean_offset]]);
        line("log_amplitude", &[self.theta[l.log_amplitude]]);
        line("log_lengthscales", &self.theta[l.log_lengthscales.clone()]);
        line("log_noise", &[self.theta[l.log_noise]]);
        for (k, v) in extras {
            line(k, v);
        }
        format!(
            "{MODEL_DOC_HEADER}\narchitecture {}\nkernel {}\n{out}",
            self.arch.name(),
            self.kernel.name()
        )
    }

    /// Parses a model document; unknown numeric keys are returned as extras.
    pub fn from_document(text: &str, path: &str) -> Result<(Self, BTreeMap<String, Vec<f64>>)> {
        let perr = |field: &str, message: String| Error::Parse { path: path.to_string(), field: field.to_string(), message };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        match lines.next() {
            Some(h) if h.trim() == MODEL_DOC_HEADER => {}
            other => return Err(perr("header", format!("expected `{MODEL_DOC_HEADER}`, found {other:?}"))),
        }
        let mut arch = None;
        let mut kernel = None;
        let mut values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for line in lines {
            let mut tokens = line.split_whitespace();
            let key = tokens.next().unwrap_or_default();
            match key {
                "architecture" => {
                    let name = tokens.next().unwrap_or_default();
                    arch = Some(Architecture::from_name(name).ok_or_else(|| perr(key, format!("unknown architecture `{name}`")))?);
                }
                "kernel" => {
                    let name = tokens.next().unwrap_or_default();
                    kernel = Some(KernelFamily::from_name(name).ok_or_else(|| perr(key, format!("unknown kernel `{name}`")))?);
                }
                _ => {
                    let nums = tokens
                        .map(|t| t.parse::<f64>().map_err(|e| perr(key, format!("`{t}`: {e}"))))
                        .collect::<Result<Vec<f64>>>()?;
                    if values.insert(key.to_string(), nums).is_some() {
                        return Err(perr(key, "duplicate key".into()));
                    }
                }
            }
        }
        let arch = arch.ok_or_else(|| perr("architecture", "missing".into()))?;
        let kernel = kernel.ok_or_else(|| perr("kernel", "missing".into()))?;
        let dim = match values.remove("dim").as_deref() {
            Some([d]) if *d >= 1.0 && d.fract() == 0.0 => *d as usize,
            other => return Err(perr("dim", format!("expected one positive integer, got {other:?}"))),
        };
        let layout = ParamLayout::new(arch, dim);
        let mut theta = vec![0.0; layout.len];
        let mut take = |key: &str, range: Range<usize>| -> Result<()> {
            let v = values.remove(key).ok_or_else(|| perr(key, "missing".into()))?;
            if v.len() != range.len() {
                return Err(perr(key, format!("expected {} values, got {}", range.len(), v.len())));
            }
            theta[range].copy_from_slice(&v);
            Ok(())
        };
        if arch == Architecture::MlpMatern {
            take("feature_weights", layout.feature_weights.clone())?;
            take("feature_biases", layout.feature_biases.clone())?;
            take("mean_weights", layout.mean_weights.clone())?;
        }
        take("mean_offset", layout.mean_offset..layout.mean_offset + 1)?;
        take("log_amplitude", layout.log_amplitude..layout.log_amplitude + 1)?;
        take("log_lengthscales", layout.log_lengthscales.clone())?;
        take("log_noise", layout.log_noise..layout.log_noise + 1)?;
        let mut params = GpParams::from_flat(arch, dim, theta)?;
        params.kernel = kernel;
        Ok((params, values))
    }
}
