use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoStep {
    pub x: Point,
    pub y: f64,
    /// Acquisition value at `x`; NaN for points not chosen by an acquisition.
    pub acq_value: f64,
    /// Noiseless objective value at `x`, when the oracle knows it.
    pub f_true: Option<f64>,
}

/// One optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoTrace {
    pub steps: Vec<BoStep>,
    /// The best observed input (earliest on ties); `None` for an empty run.
    pub recommendation: Option<Point>,
    /// `f_max - f(x_hat_t)` after each step, when `f_max` is known.
    pub regret_trace: Vec<f64>,
    pub seed: u64,
    pub method_tag: String,
}

impl BoTrace {
    /// Assembles a trace and derives the recommendation and regret sequence.
    pub fn from_steps(steps: Vec<BoStep>, f_max: Option<f64>, seed: u64, method_tag: impl Into<String>) -> Self {
        let mut regret_trace = Vec::new();
        let mut best: Option<usize> = None;
        for (i, s) in steps.iter().enumerate() {
            if best.is_none_or(|b| s.y > steps[b].y) {
                best = Some(i);
            }
            if let (Some(fm), Some(b)) = (f_max, best) {
                regret_trace.push(fm - steps[b].f_true.unwrap_or(steps[b].y));
            }
        }
        Self { recommendation: best.map(|b| steps[b].x.clone()), steps, regret_trace, seed, method_tag: method_tag.into() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Index `tau` of the recommendation: first maximizer of the observed values.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, s) in self.steps.iter().enumerate() {
            if best.is_none_or(|b| s.y > self.steps[b].y) {
                best = Some(i);
            }
        }
        best
    }

    /// `max_{s <= t} y_s` for every `t`.
    pub fn best_so_far(&self) -> Vec<f64> {
        self.steps
            .iter()
            .scan(f64::NEG_INFINITY, |m, s| {
                *m = m.max(s.y);
                Some(*m)
            })
            .collect()
    }

    /// Comma-separated `t,x_1..x_d,y,acq_value,best_so_far` with a header line.
    pub fn to_csv(&self) -> String {
        let d = self.steps.first().map_or(0, |s| s.x.len());
        let mut out = String::from("t");
        for j in 1..=d {
            out.push_str(&format!(",x_{j}"));
        }
        out.push_str(",y,acq_value,best_so_far\n");
        for (t, (s, b)) in self.steps.iter().zip(self.best_so_far()).enumerate() {
            out.push_str(&(t + 1).to_string());
            for v in &s.x {
                out.push_str(&format!(",{v:?}"));
            }
            out.push_str(&format!(",{:?},{:?},{:?}\n", s.y, s.acq_value, b));
        }
        out
    }
}

/// Parsed rows of a trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRows {
    pub xs: Vec<Point>,
    pub ys: Vec<f64>,
    pub acq_values: Vec<f64>,
    pub best_so_far: Vec<f64>,
}

/// Reads a trace written by [`BoTrace::to_csv`].
pub fn parse_trace_csv(text: &str, path: &str) -> Result<TraceRows> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err(path, "header", "file is empty"))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 4 || cols[0] != "t" || cols[cols.len() - 3..] != ["y", "acq_value", "best_so_far"] {
        return Err(parse_err(path, "header", "expected t,x_1..x_d,y,acq_value,best_so_far"));
    }
    let d = cols.len() - 4;
    let mut rows = TraceRows { xs: vec![], ys: vec![], acq_values: vec![], best_so_far: vec![] };
    for (i, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(path, &format!("row {}", i + 1), &e.to_string()))?;
        if vals.len() != cols.len() {
            return Err(parse_err(path, &format!("row {}", i + 1), "wrong number of columns"));
        }
        rows.xs.push(vals[1..1 + d].to_vec());
        rows.ys.push(vals[1 + d]);
        rows.acq_values.push(vals[2 + d]);
        rows.best_so_far.push(vals[3 + d]);
    }
    Ok(rows)
}

fn parse_err(path: &str, field: &str, message: &str) -> Error {
    Error::Parse { path: path.into(), field: field.into(), message: message.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(x: f64, y: f64) -> BoStep {
        BoStep { x: vec![x], y, acq_value: f64::NAN, f_true: Some(y) }
    }

    #[test]
    fn recommendation_is_earliest_best() {
        let t = BoTrace::from_steps(vec![step(0.1, 1.0), step(0.2, 3.0), step(0.3, 3.0), step(0.4, 2.0)], Some(4.0), 0, "x");
        assert_eq!(t.recommendation, Some(vec![0.2]));
        assert_eq!(t.best_index(), Some(1));
        assert_eq!(t.regret_trace, vec![3.0, 1.0, 1.0, 1.0]);
        assert_eq!(t.best_so_far(), vec![1.0, 3.0, 3.0, 3.0]);
    }

    #[test]
    fn csv_round_trip() {
        let t = BoTrace::from_steps(vec![step(0.1, -1.5), step(0.25, 0.5)], None, 0, "x");
        let rows = parse_trace_csv(&t.to_csv(), "mem").unwrap();
        assert_eq!(rows.ys, vec![-1.5, 0.5]);
        assert_eq!(rows.xs, vec![vec![0.1], vec![0.25]]);
        assert_eq!(rows.best_so_far, vec![-1.5, 0.5]);
        assert!(rows.acq_values[0].is_nan());
        assert!(parse_trace_csv("a,b\n", "mem").is_err());
    }

    #[test]
    fn empty_trace() {
        let t = BoTrace::from_steps(vec![], Some(1.0), 0, "x");
        assert!(t.recommendation.is_none() && t.regret_trace.is_empty());
        assert_eq!(t.to_csv(), "t,y,acq_value,best_so_far\n");
    }
}
