use nalgebra::DMatrix;

use super::dataset::MultiTaskDataset;
use crate::error::{Error, Result};
use crate::pretrain::{estimate_moments, MatchingMoments};

/// Default tolerance (max-abs, warped coordinates) for treating inputs as shared.
pub const MATCH_TOL: f64 = 1e-9;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Collects inputs observed in every task and estimates their sample moments.
///
/// Candidates are taken from the first task in order; each task contributes the
/// first observation within `tol` of a candidate. Duplicate candidates are skipped.
pub fn extract_matching(dataset: &MultiTaskDataset, tol: f64) -> Result<MatchingMoments> {
    let n = dataset.n_tasks();
    if n < 2 {
        return Err(Error::input("matching data needs at least two tasks"));
    }
    let first = &dataset.tasks[0].observations;
    let mut inputs = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (x, &y0) in first.xs.iter().zip(&first.ys) {
        if inputs.iter().any(|p: &Vec<f64>| close(p, x, tol)) {
            continue;
        }
        let mut row = vec![y0];
        for task in &dataset.tasks[1..] {
            let obs = &task.observations;
            match obs.xs.iter().position(|p| close(p, x, tol)) {
                Some(j) => row.push(obs.ys[j]),
                None => break,
            }
        }
        if row.len() == n {
            inputs.push(x.clone());
            rows.push(row);
        }
    }
    if inputs.is_empty() {
        return Err(Error::NoMatchingData { n_tasks: n, tol });
    }
    let m = inputs.len();
    let y = DMatrix::from_fn(m, n, |r, c| rows[r][c]);
    estimate_moments(inputs, y, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::ObservationSet;
    use crate::space::SearchSpace;

    fn ds(tasks: Vec<Vec<(f64, f64)>>) -> MultiTaskDataset {
        let tasks = tasks
            .into_iter()
            .enumerate()
            .map(|(i, pts)| {
                let (xs, ys): (Vec<_>, Vec<_>) = pts.into_iter().map(|(x, y)| (vec![x], y)).unzip();
                (format!("t{i}"), ObservationSet::new(xs, ys).unwrap())
            })
            .collect();
        MultiTaskDataset::from_observations(SearchSpace::unit(1), tasks).unwrap()
    }

    #[test]
    fn full_overlap() {
        let d = ds(vec![vec![(0.1, 1.0), (0.5, 2.0)], vec![(0.5, 3.0), (0.1, 0.0)], vec![(0.1, 2.0), (0.5, 1.0)]]);
        let mm = extract_matching(&d, MATCH_TOL).unwrap();
        assert_eq!(mm.m(), 2);
        assert_eq!(mm.n_tasks, 3);
        assert_eq!(mm.observations.row(0).iter().cloned().collect::<Vec<_>>(), vec![1.0, 0.0, 2.0]);
        assert_eq!(mm.observations.row(1).iter().cloned().collect::<Vec<_>>(), vec![2.0, 3.0, 1.0]);
    }

    #[test]
    fn disjoint_inputs() {
        let d = ds(vec![vec![(0.1, 1.0)], vec![(0.2, 1.0)]]);
        assert!(matches!(extract_matching(&d, MATCH_TOL), Err(Error::NoMatchingData { .. })));
    }

    #[test]
    fn single_task_is_input_error() {
        let d = ds(vec![vec![(0.1, 1.0)]]);
        assert!(matches!(extract_matching(&d, MATCH_TOL), Err(Error::Input(_))));
    }
}
