//! Output transforms: the negative-log error-rate warp and the online softplus mapping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value assigned to infeasible evaluations by [`online_map`].
pub const INFEASIBLE_VALUE: f64 = -2.0;

/// How raw outputs in a dataset document become modeled values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputWarping {
    /// Values are used as stored.
    #[default]
    None,
    /// Error rates `r` become `-ln(r + 1e-10)`.
    NegLog,
    /// Per-task softplus mapping onto `(-2, 2]`, infeasible trials at `-2`.
    Softplus,
}

/// `r -> -ln(r + 1e-10)`: strictly decreasing, so maximizing it minimizes the error rate.
pub fn warp_output(error_rate: f64) -> Result<f64> {
    if !(error_rate >= 0.0) || !error_rate.is_finite() {
        return Err(Error::validation(format!("error rate must be finite and non-negative, got {error_rate}")));
    }
    Ok(-(error_rate + 1e-10).ln())
}

fn softplus(v: f64) -> f64 {
    if v > 30.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

/// Lower median: the smaller middle element on even counts.
pub fn lower_median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}

/// Maps feasible values through `softplus(y - median) / softplus(y_max - median) * 4 - 2`
/// and infeasible ones (`None`) to exactly `-2`.
///
/// A feasible value whose mapped image rounds to `-2` is returned as the next
/// float above it, so feasible and infeasible trials stay distinguishable.
pub fn online_map(values: &[Option<f64>]) -> Result<Vec<f64>> {
    let feasible: Vec<f64> = values.iter().flatten().cloned().collect();
    if feasible.is_empty() {
        return Err(Error::validation("online mapping needs at least one feasible value"));
    }
    if let Some(v) = feasible.iter().find(|v| !v.is_finite()) {
        return Err(Error::validation(format!("feasible value {v} is not finite")));
    }
    let median = lower_median(&feasible);
    let y_max = feasible.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let denom = softplus(y_max - median);
    Ok(values
        .iter()
        .map(|v| match v {
            Some(y) if *y == y_max => 2.0,
            Some(y) => (softplus(y - median) / denom * 4.0 - 2.0).max(INFEASIBLE_VALUE.next_up()),
            None => INFEASIBLE_VALUE,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warp_output_values() {
        assert!((warp_output(0.0).unwrap() - 23.025_850_929_940_457).abs() < 1e-9);
        assert!((warp_output(0.1).unwrap() - 2.302_585_092_004_045).abs() < 1e-9);
        assert!(warp_output(0.1).unwrap() > warp_output(0.2).unwrap());
        assert!(matches!(warp_output(-0.1), Err(Error::Validation(_))));
    }

    #[test]
    fn online_map_special_values() {
        let ys = [Some(0.3), None, Some(1.0), Some(0.5), Some(0.1)];
        let out = online_map(&ys).unwrap();
        assert_eq!(out[1], -2.0);
        assert_eq!(out[2], 2.0);
        // lower median of {0.1, 0.3, 0.5, 1.0} is 0.3
        let expected = 4.0 * 2f64.ln() / softplus(0.7) - 2.0;
        assert!((out[0] - expected).abs() < 1e-14);
        assert!(matches!(online_map(&[None, None]), Err(Error::Validation(_))));
    }
}
