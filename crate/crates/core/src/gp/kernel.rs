//! Stationary kernel families, written as a profile of the scaled squared distance
//! `s2 = sum_i (x_i - x'_i)^2 / l_i^2`.

use serde::{Deserialize, Serialize};

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    /// `(1 + sqrt(3) r) exp(-sqrt(3) r)`.
    Matern32,
}

impl KernelFamily {
    /// Unit-amplitude correlation at scaled squared distance `s2`.
    pub fn correlation(self, s2: f64) -> f64 {
        match self {
            KernelFamily::Matern32 => {
                let r = s2.max(0.0).sqrt();
                (1.0 + SQRT3 * r) * (-SQRT3 * r).exp()
            }
        }
    }

    /// Derivative of [`KernelFamily::correlation`] with respect to `s2`.
    ///
    /// Finite at `s2 = 0` for every family here.
    pub fn d_correlation_d_s2(self, s2: f64) -> f64 {
        match self {
            KernelFamily::Matern32 => {
                let r = s2.max(0.0).sqrt();
                -1.5 * (-SQRT3 * r).exp()
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Matern32 => "matern32",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "matern32" => Some(KernelFamily::Matern32),
            _ => None,
        }
    }
}

/// Scaled squared distance between two feature vectors.
pub fn scaled_sq_dist(a: &[f64], b: &[f64], lengthscales: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(lengthscales)
        .map(|((x, y), l)| {
            let d = (x - y) / l;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matern32_unit_distance() {
        // (1 + sqrt3) exp(-sqrt3), evaluated independently.
        let expected = (1.0 + 3f64.sqrt()) * (-(3f64.sqrt())).exp();
        let k = KernelFamily::Matern32.correlation(1.0);
        assert!((k - expected).abs() < 1e-15);
        assert!((k - 0.483_357_724_6).abs() < 1e-9);
        assert_eq!(KernelFamily::Matern32.correlation(0.0), 1.0);
    }

    #[test]
    fn derivative_matches_difference() {
        let f = KernelFamily::Matern32;
        for &s2 in &[0.01, 0.3, 1.0, 4.0] {
            let h = 1e-6;
            let fd = (f.correlation(s2 + h) - f.correlation(s2 - h)) / (2.0 * h);
            assert!((fd - f.d_correlation_d_s2(s2)).abs() < 1e-7, "s2={s2}");
        }
    }
}
