use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use metagp_core::acquisition::AcquisitionSpec;
use metagp_core::bo::{run_bo, run_random, run_stbo, BoTrace, TableOracle};
use metagp_core::data::{load_dataset, Task};
use metagp_core::gp::{Architecture, GpParams};
use metagp_core::pretrain::TrainConfig;
use rayon::prelude::*;
use serde_json::json;

use super::pretrain::fit_and_save;
use super::{arch_name, log_path, parse_acq, write_file};
use crate::manifest::RunManifest;
use crate::settings::Section;
use crate::{io_err, ArchArg, BenchArgs, CliError, CliResult, ObjectiveArg};

pub const DEFAULT_METHODS: [&str; 4] = ["rand", "stbo", "hyperbo-nll", "hyperbo-kl"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Random,
    Stbo,
    HyperBo(ObjectiveArg),
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Random => "rand",
            Method::Stbo => "stbo",
            Method::HyperBo(ObjectiveArg::Nll) => "hyperbo-nll",
            Method::HyperBo(ObjectiveArg::Kl) => "hyperbo-kl",
            Method::HyperBo(ObjectiveArg::Nllkl) => "hyperbo-nllkl",
        }
    }
}

pub fn parse_method(token: &str) -> CliResult<Method> {
    Ok(match token.trim() {
        "rand" => Method::Random,
        "stbo" => Method::Stbo,
        "hyperbo-nll" => Method::HyperBo(ObjectiveArg::Nll),
        "hyperbo-kl" => Method::HyperBo(ObjectiveArg::Kl),
        "hyperbo-nllkl" => Method::HyperBo(ObjectiveArg::Nllkl),
        other => {
            return Err(CliError::usage(format!(
                "unknown method `{other}` (expected rand, stbo, hyperbo-nll, hyperbo-kl or hyperbo-nllkl)"
            )))
        }
    })
}

/// Task names as they appear in file names.
pub(crate) fn file_token(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '-' }).collect()
}

pub(crate) fn trace_file_name(method: &str, task: &str, rep: usize) -> String {
    format!("{method}__{}__r{rep}.csv", file_token(task))
}

fn clear_traces(dir: &Path) -> CliResult<()> {
    let Ok(entries) = std::fs::read_dir(dir) else {
        return Ok(());
    };
    for e in entries.flatten() {
        let p = e.path();
        if p.extension().is_some_and(|x| x == "csv") {
            std::fs::remove_file(&p).map_err(|e| io_err(&p, e))?;
        }
    }
    Ok(())
}

fn run_cell(method: Method, model: Option<&GpParams>, arch: Architecture, task: &Task, spec: &AcquisitionSpec, iters: usize, seed: u64) -> CliResult<BoTrace> {
    let obs = &task.observations;
    let oracle = TableOracle::new(obs.xs.clone(), obs.ys.clone()).map_err(|e| e.in_task(&task.name))?;
    let trace = match method {
        Method::Random => run_random(&oracle, iters, seed),
        Method::Stbo => run_stbo(arch, &oracle, spec, iters, seed),
        Method::HyperBo(_) => run_bo(model.expect("pre-trained model"), &oracle, spec, iters, seed, method.tag()),
    };
    trace.map_err(|e| e.in_task(&task.name).into())
}

pub fn bench(args: &BenchArgs, s: &Section) -> CliResult<()> {
    let data: PathBuf = s.require(args.data.clone(), "data")?;
    let out_dir: PathBuf = s.require(args.out_dir.clone(), "out_dir")?;
    let holdout_names = s.list(args.holdout.clone(), "holdout")?.unwrap_or_default();
    let prefix: Option<String> = s.pick(args.holdout_prefix.clone(), "holdout_prefix")?;
    let method_tokens = s
        .list(args.methods.clone(), "methods")?
        .unwrap_or_else(|| DEFAULT_METHODS.iter().map(|m| m.to_string()).collect());
    let mut methods = Vec::new();
    for t in &method_tokens {
        let m = parse_method(t)?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let repeats: usize = s.or(args.repeats, "repeats", 5)?;
    let iters: usize = s.require(args.iters, "iters")?;
    let seed: u64 = s.or(args.seed, "seed", 0)?;
    let acq_token: String = s.or(args.acq.clone(), "acq", "pi".to_string())?;
    let acq = parse_acq(&acq_token)?;
    let arch = s.or(args.arch, "arch", ArchArg::ConstMatern)?;
    let defaults = TrainConfig::default();
    let pretrain_iters: usize = s.or(args.pretrain_iters, "pretrain_iters", defaults.max_iters)?;
    let lambda: f64 = s.or(args.lambda, "lambda", defaults.lambda)?;
    let jobs: usize = s.or(args.jobs, "jobs", 0)?;
    if holdout_names.is_empty() && prefix.is_none() {
        return Err(CliError::usage("need --holdout or --holdout-prefix"));
    }
    if repeats == 0 {
        return Err(CliError::usage("--repeats must be positive"));
    }

    let ds = load_dataset(&data)?;
    for n in &holdout_names {
        if ds.task(n).is_none() {
            return Err(CliError::validation(format!("holdout task `{n}` is not in {}", data.display())));
        }
    }
    let held: BTreeSet<String> = ds
        .tasks
        .iter()
        .map(|t| t.name.clone())
        .filter(|n| holdout_names.contains(n) || prefix.as_deref().is_some_and(|p| n.starts_with(p)))
        .collect();
    if held.is_empty() {
        return Err(CliError::validation("no task matches the holdout prefix"));
    }
    let train = ds.without(|n| held.contains(n));
    let train_names: Vec<String> = train.tasks.iter().map(|t| t.name.clone()).collect();
    let test_tasks: Vec<&Task> = ds.tasks.iter().filter(|t| held.contains(&t.name)).collect();

    let spec = AcquisitionSpec::candidates(acq);
    let mut m = RunManifest::new(
        "bench",
        json!({
            "data": data.display().to_string(),
            "holdout": held,
            "pretrain_tasks": train_names,
            "methods": methods.iter().map(|m| m.tag()).collect::<Vec<_>>(),
            "repeats": repeats,
            "iters": iters,
            "acq": acq.to_string(),
            "arch": arch_name(arch),
            "pretrain_iters": pretrain_iters,
            "lambda": lambda,
            "out_dir": out_dir.display().to_string(),
        }),
        (0..repeats as u64).map(|r| seed.wrapping_add(r)).collect(),
    );
    m.input(&data)?;

    let mut models: Vec<(Method, GpParams)> = Vec::new();
    for &method in &methods {
        let Method::HyperBo(objective) = method else { continue };
        if train.tasks.is_empty() {
            return Err(CliError::validation("every task is held out; nothing to pre-train on"));
        }
        log::info!("pre-training {} on {} tasks: {}", method.tag(), train_names.len(), train_names.join(", "));
        let config = TrainConfig { objective: objective.into(), lambda, max_iters: pretrain_iters, seed, ..defaults.clone() };
        let path = out_dir.join("models").join(format!("{}.model", method.tag()));
        let report = fit_and_save(&train, arch.into(), &config, &path, false)?;
        m.output(&path);
        m.output(&log_path(&path));
        models.push((method, report.params));
    }

    let cells: Vec<(Method, &Task, usize)> = methods
        .iter()
        .flat_map(|&me| test_tasks.iter().flat_map(move |&t| (0..repeats).map(move |r| (me, t, r))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::validation(format!("worker pool: {e}")))?;
    let traces: Vec<CliResult<BoTrace>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(method, task, rep)| {
                let model = models.iter().find(|(me, _)| *me == method).map(|(_, p)| p);
                run_cell(method, model, arch.into(), task, &spec, iters, seed.wrapping_add(rep as u64))
            })
            .collect()
    });

    let dir = out_dir.join("traces");
    clear_traces(&dir)?;
    for ((method, task, rep), trace) in cells.iter().zip(traces) {
        let path = dir.join(trace_file_name(method.tag(), &task.name, *rep));
        write_file(&path, &trace?.to_csv())?;
        m.output(&path);
    }
    println!("{} traces -> {}", cells.len(), dir.display());
    m.write(&out_dir.join("manifest.json"))
}
