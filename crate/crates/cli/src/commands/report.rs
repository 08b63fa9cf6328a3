use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use metagp_core::bo::{parse_trace_csv, performance_profile, profile_to_csv, Criterion, Curves};
use metagp_core::data::lower_median;
use serde_json::json;

use super::{read_file, write_file};
use crate::manifest::{manifest_path, RunManifest};
use crate::settings::Section;
use crate::{io_err, CliError, CliResult, ReportArgs};

/// Best-so-far curves of every repeat, keyed by method and task.
pub type RepeatCurves = BTreeMap<(String, String), Repeats>;

/// Best-so-far curve per repeat index.
pub type Repeats = BTreeMap<usize, Vec<f64>>;

/// `<method>__<task>__r<rep>.csv`
fn parse_name(file: &str) -> Option<(String, String, usize)> {
    let stem = file.strip_suffix(".csv")?;
    let (method, rest) = stem.split_once("__")?;
    let (task, rep) = rest.rsplit_once("__r")?;
    Some((method.to_string(), task.to_string(), rep.parse().ok()?))
}

/// Reads every trace in `dir`, returning the per-repeat curves and the files read.
pub fn load_curves(dir: &Path) -> CliResult<(RepeatCurves, Vec<PathBuf>)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .flatten()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    let mut curves = RepeatCurves::new();
    for f in &files {
        let name = f.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let (method, task, rep) = parse_name(name)
            .ok_or_else(|| CliError::validation(format!("{}: expected <method>__<task>__r<repeat>.csv", f.display())))?;
        let rows = parse_trace_csv(&read_file(f)?, &f.display().to_string())?;
        curves.entry((method, task)).or_default().insert(rep, rows.best_so_far);
    }
    if curves.is_empty() {
        return Err(CliError::validation(format!("no traces in {}", dir.display())));
    }
    Ok((curves, files))
}

/// Lower median across repeats at every iteration.
pub fn collapse(curves: &RepeatCurves) -> CliResult<Curves> {
    let mut out = Curves::new();
    for ((method, task), reps) in curves {
        let len = reps.values().next().map_or(0, Vec::len);
        if reps.values().any(|c| c.len() != len) {
            return Err(CliError::validation(format!("repeats of {method} on {task} have different lengths")));
        }
        let median = (0..len)
            .map(|i| lower_median(&reps.values().map(|c| c[i]).collect::<Vec<_>>()))
            .collect();
        out.entry(method.clone()).or_default().insert(task.clone(), median);
    }
    Ok(out)
}

/// `<out stem>.summary.csv` next to the profile.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.csv"))
}

pub fn report(args: &ReportArgs, s: &Section) -> CliResult<()> {
    let dir: PathBuf = s.require(args.traces_dir.clone(), "traces_dir")?;
    let out: PathBuf = s.require(args.out.clone(), "out")?;
    let token: String = s.require(args.criterion.clone(), "criterion")?;
    let criterion: Criterion = token.parse().map_err(|e: metagp_core::Error| CliError::usage(e.to_string()))?;

    let (repeats, files) = load_curves(&dir)?;
    let curves = collapse(&repeats)?;
    let rows = performance_profile(&curves, criterion)?;
    write_file(&out, &profile_to_csv(&rows))?;

    let mut summary = String::from("task,method,repeats,median_best,min_best,max_best\n");
    let mut by_task: BTreeMap<&str, Vec<(&str, &Repeats)>> = BTreeMap::new();
    for ((method, task), reps) in &repeats {
        by_task.entry(task).or_default().push((method, reps));
    }
    for (task, methods) in &by_task {
        println!("{task}");
        for (method, reps) in methods {
            let finals: Vec<f64> = reps.values().filter_map(|c| c.last().copied()).collect();
            let med = lower_median(&finals);
            let lo = finals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = finals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            summary.push_str(&format!("{task},{method},{},{med:?},{lo:?},{hi:?}\n", finals.len()));
            println!("  {method:<16} {med:>12.6}  [{lo:.6}, {hi:.6}] over {} repeats", finals.len());
        }
    }
    let summary_file = summary_path(&out);
    write_file(&summary_file, &summary)?;

    let mut m = RunManifest::new(
        "report",
        json!({
            "traces_dir": dir.display().to_string(),
            "criterion": token,
            "out": out.display().to_string(),
        }),
        vec![],
    );
    for f in &files {
        m.input(f)?;
    }
    m.output(&out);
    m.output(&summary_file);
    m.write(&manifest_path(&out))
}
