//! Random problem generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use metagp_core::gp::{Architecture, GpParams, ParamLayout};
use metagp_core::Point;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn random_points(rng: &mut impl Rng, n: usize, d: usize) -> Vec<Point> {
    (0..n).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect()
}

/// Random parameters with log-scales in sensible ranges and noise in `[e^-4, e^-1]`.
pub fn random_params(rng: &mut impl Rng, arch: Architecture, d: usize) -> GpParams {
    let l = ParamLayout::new(arch, d);
    let mut theta: Vec<f64> = (0..l.len).map(|_| uniform(rng, -1.0, 1.0)).collect();
    theta[l.log_noise] = uniform(rng, -4.0, -1.0);
    for i in l.log_lengthscales.clone() {
        theta[i] = uniform(rng, -1.5, 0.5);
    }
    GpParams::from_flat(arch, d, theta).unwrap()
}

/// Kernel inputs computed from the layout by hand: raw inputs or `tanh(W x + b)`.
pub fn oracle_features(p: &GpParams, x: &[f64]) -> Vec<f64> {
    let l = p.layout();
    let t = p.as_flat();
    match p.arch {
        Architecture::ConstMatern => x.to_vec(),
        Architecture::MlpMatern => (0..8)
            .map(|h| {
                let mut s = t[l.feature_biases.start + h];
                for (j, xj) in x.iter().enumerate() {
                    s += t[l.feature_weights.start + h * l.dim + j] * xj;
                }
                s.tanh()
            })
            .collect(),
    }
}

pub fn oracle_mean(p: &GpParams, x: &[f64]) -> f64 {
    let l = p.layout();
    let t = p.as_flat();
    let z = oracle_features(p, x);
    let lin: f64 = match p.arch {
        Architecture::ConstMatern => 0.0,
        Architecture::MlpMatern => z.iter().enumerate().map(|(h, zh)| t[l.mean_weights.start + h] * zh).sum(),
    };
    lin + t[l.mean_offset]
}

pub fn oracle_kernel(p: &GpParams, a: &[f64], b: &[f64]) -> f64 {
    let l = p.layout();
    let t = p.as_flat();
    let (za, zb) = (oracle_features(p, a), oracle_features(p, b));
    let r2: f64 = za
        .iter()
        .zip(&zb)
        .enumerate()
        .map(|(i, (u, v))| ((u - v) / t[l.log_lengthscales.start + i].exp()).powi(2))
        .sum();
    let r = (3.0 * r2).sqrt();
    (2.0 * t[l.log_amplitude]).exp() * (1.0 + r) * (-r).exp()
}

pub fn oracle_cov(p: &GpParams, xs: &[Point], noise: bool) -> DMatrix<f64> {
    let s2 = if noise { p.noise_variance() } else { 0.0 };
    DMatrix::from_fn(xs.len(), xs.len(), |i, j| oracle_kernel(p, &xs[i], &xs[j]) + if i == j { s2 } else { 0.0 })
}

/// `log N(y; mu, cov)` from an explicit inverse and an LU determinant.
pub fn dense_logpdf(y: &DVector<f64>, mu: &DVector<f64>, cov: &DMatrix<f64>) -> f64 {
    let inv = cov.clone().try_inverse().expect("invertible");
    let r = y - mu;
    let quad = (r.transpose() * inv * &r)[(0, 0)];
    -0.5 * (quad + cov.determinant().ln() + y.len() as f64 * LN_2PI)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
