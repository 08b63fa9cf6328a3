use std::path::{Path, PathBuf};

use metagp_core::acquisition::AcquisitionSpec;
use metagp_core::bo::{run_bo, simple_regret, Oracle, SyntheticOracle, TableOracle};
use metagp_core::data::{load_dataset, TestFunction};
use metagp_core::gp::GpParams;
use serde_json::json;

use super::{parse_acq, read_file, write_file};
use crate::manifest::{manifest_path, RunManifest};
use crate::settings::Section;
use crate::{CliError, CliResult, ModeArg, RunArgs};

pub(crate) fn load_model(path: &Path) -> CliResult<GpParams> {
    Ok(GpParams::from_document(&read_file(path)?, &path.display().to_string())?.0)
}

pub(crate) fn load_test_functions(path: &Path) -> CliResult<Vec<TestFunction>> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::validation(format!("{}: not a test-function file: {e}", path.display())))
}

fn pick<'a, T>(items: &'a [T], name: Option<&str>, name_of: impl Fn(&T) -> &str, what: &str) -> CliResult<&'a T> {
    match name {
        Some(n) => items
            .iter()
            .find(|t| name_of(t) == n)
            .ok_or_else(|| CliError::validation(format!("no {what} named `{n}`"))),
        None if items.len() == 1 => Ok(&items[0]),
        None => Err(CliError::usage(format!("the file holds {} {what}s; choose one with --task-name", items.len()))),
    }
}

pub fn run(args: &RunArgs, s: &Section) -> CliResult<()> {
    let model_path: PathBuf = s.require(args.model.clone(), "model")?;
    let task_path: PathBuf = s.require(args.task.clone(), "task")?;
    let out: PathBuf = s.require(args.out.clone(), "out")?;
    let task_name: Option<String> = s.pick(args.task_name.clone(), "task_name")?;
    let mode = s.or(args.mode, "mode", ModeArg::Offline)?;
    let acq_token: String = s.or(args.acq.clone(), "acq", "pi".to_string())?;
    let acq = parse_acq(&acq_token)?;
    let iters: usize = s.require(args.iters, "iters")?;
    let seed: u64 = s.or(args.seed, "seed", 0)?;

    let model = load_model(&model_path)?;
    let (oracle, spec, name): (Box<dyn Oracle>, AcquisitionSpec, String) = match mode {
        ModeArg::Offline => {
            let ds = load_dataset(&task_path)?;
            let task = pick(&ds.tasks, task_name.as_deref(), |t| &t.name, "task")?;
            let obs = &task.observations;
            let oracle = TableOracle::new(obs.xs.clone(), obs.ys.clone()).map_err(|e| e.in_task(&task.name))?;
            (Box::new(oracle), AcquisitionSpec::candidates(acq), task.name.clone())
        }
        ModeArg::OnlineSynth => {
            let fns = load_test_functions(&task_path)?;
            let f = pick(&fns, task_name.as_deref(), |f| &f.name, "test function")?;
            (Box::new(SyntheticOracle::new(f.clone())?), AcquisitionSpec::box_search(acq), f.name.clone())
        }
    };
    let trace = run_bo(&model, oracle.as_ref(), &spec, iters, seed, "hyperbo")?;
    write_file(&out, &trace.to_csv())?;

    if let Some(best) = trace.best_so_far().last() {
        println!("task: {name}");
        println!("best value: {best}");
        if let Some(f_max) = oracle.f_max() {
            println!("simple regret: {}", simple_regret(&trace, f_max)?);
        }
    }

    let mut m = RunManifest::new(
        "run",
        json!({
            "model": model_path.display().to_string(),
            "task": task_path.display().to_string(),
            "task_name": name,
            "mode": match mode { ModeArg::Offline => "offline", ModeArg::OnlineSynth => "online-synth" },
            "acq": acq.to_string(),
            "iters": iters,
            "out": out.display().to_string(),
        }),
        vec![seed],
    );
    m.input(&model_path)?;
    m.input(&task_path)?;
    m.output(&out);
    m.write(&manifest_path(&out))
}
