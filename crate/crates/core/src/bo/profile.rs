//! Performance profiles over best-so-far curves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::lower_median;
use crate::error::{Error, Result};

/// Best-so-far curve per method, then per task.
pub type Curves = BTreeMap<String, BTreeMap<String, Vec<f64>>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    /// Per task, the median across methods of the best value at this 1-based iteration.
    MedianAt(usize),
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    /// `median@K`.
    fn from_str(s: &str) -> Result<Self> {
        let k = s
            .strip_prefix("median@")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::input(format!("bad criterion `{s}` (expected median@K with K >= 1)")))?;
        Ok(Criterion::MedianAt(k))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub method: String,
    /// 1-based iteration.
    pub iter: usize,
    pub fraction: f64,
}

/// Per-task threshold values.
pub fn criterion_values(curves: &Curves, criterion: Criterion) -> Result<BTreeMap<String, f64>> {
    let (len, tasks) = check(curves)?;
    let Criterion::MedianAt(k) = criterion;
    if k == 0 || k > len {
        return Err(Error::input(format!("criterion iteration {k} outside 1..={len}")));
    }
    Ok(tasks
        .into_iter()
        .map(|task| {
            let vals: Vec<f64> = curves.values().map(|per| per[&task][k - 1]).collect();
            (task, lower_median(&vals))
        })
        .collect())
}

/// Fraction of tasks on which each method's best value at each iteration reaches
/// the criterion (ties count as reaching it).
pub fn performance_profile(curves: &Curves, criterion: Criterion) -> Result<Vec<ProfileRow>> {
    let (len, tasks) = check(curves)?;
    let thresholds = criterion_values(curves, criterion)?;
    let mut rows = Vec::with_capacity(curves.len() * len);
    for (method, per) in curves {
        for t in 0..len {
            let hits = tasks.iter().filter(|task| per[*task][t] >= thresholds[*task]).count();
            rows.push(ProfileRow { method: method.clone(), iter: t + 1, fraction: hits as f64 / tasks.len() as f64 });
        }
    }
    Ok(rows)
}

/// Comma-separated `method,iter,fraction` with a header line.
pub fn profile_to_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("method,iter,fraction\n");
    for r in rows {
        out.push_str(&format!("{},{},{:?}\n", r.method, r.iter, r.fraction));
    }
    out
}

fn check(curves: &Curves) -> Result<(usize, Vec<String>)> {
    let first = curves.values().next().ok_or_else(|| Error::input("no methods"))?;
    let tasks: Vec<String> = first.keys().cloned().collect();
    if tasks.is_empty() {
        return Err(Error::input("no tasks"));
    }
    let len = first[&tasks[0]].len();
    if len == 0 {
        return Err(Error::input("curves are empty"));
    }
    for (m, per) in curves {
        if per.keys().ne(tasks.iter()) {
            return Err(Error::input(format!("method `{m}` does not cover the same tasks")));
        }
        if per.values().any(|c| c.len() != len) {
            return Err(Error::input(format!("method `{m}` has curves of a different length")));
        }
    }
    Ok((len, tasks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curves(entries: &[(&str, &str, &[f64])]) -> Curves {
        let mut c = Curves::new();
        for (m, t, v) in entries {
            c.entry(m.to_string()).or_default().insert(t.to_string(), v.to_vec());
        }
        c
    }

    #[test]
    fn self_comparison_flips_when_final_value_reached() {
        let c = curves(&[("a", "t", &[0.1, 0.5, 0.9, 0.9])]);
        let rows = performance_profile(&c, Criterion::MedianAt(4)).unwrap();
        let f: Vec<f64> = rows.iter().map(|r| r.fraction).collect();
        assert_eq!(f, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn identical_methods_identical_fractions() {
        let c = curves(&[("a", "t1", &[1.0, 2.0]), ("a", "t2", &[0.0, 3.0]), ("b", "t1", &[1.0, 2.0]), ("b", "t2", &[0.0, 3.0])]);
        let rows = performance_profile(&c, Criterion::MedianAt(2)).unwrap();
        assert_eq!(rows[..2].iter().map(|r| r.fraction).collect::<Vec<_>>(), rows[2..].iter().map(|r| r.fraction).collect::<Vec<_>>());
    }

    #[test]
    fn mismatches_error() {
        let c = curves(&[("a", "t1", &[1.0, 2.0]), ("b", "t1", &[1.0])]);
        assert!(performance_profile(&c, Criterion::MedianAt(1)).is_err());
        let c = curves(&[("a", "t1", &[1.0])]);
        assert!(performance_profile(&c, Criterion::MedianAt(2)).is_err());
        assert!("median@0".parse::<Criterion>().is_err());
        assert_eq!("median@7".parse::<Criterion>().unwrap(), Criterion::MedianAt(7));
    }
}
