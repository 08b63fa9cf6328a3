use std::collections::BTreeMap;
use std::path::Path;

use metagp_core::data::{load_dataset, MultiTaskDataset};
use metagp_core::gp::Architecture;
use metagp_core::pretrain::{pretrain_logged, BatchSize, GradientMode, TrainConfig, TrainReport, LOG_HEADER};
use serde_json::json;

use super::{arch_name, log_path, training_log, write_file};
use crate::manifest::{manifest_path, RunManifest};
use crate::settings::Section;
use crate::{ArchArg, CliError, CliResult, GradientArg, ObjectiveArg, PretrainArgs};

pub(crate) fn parse_batch(s: &str) -> CliResult<BatchSize> {
    if s == "full" {
        return Ok(BatchSize::Full);
    }
    match s.parse::<usize>() {
        Ok(b) if b > 0 => Ok(BatchSize::Points(b)),
        _ => Err(CliError::usage(format!("bad --batch `{s}` (expected \"full\" or a positive integer)"))),
    }
}

/// Fits, writes the model document and its training log, and echoes the log to stdout.
pub(crate) fn fit_and_save(
    ds: &MultiTaskDataset,
    arch: Architecture,
    config: &TrainConfig,
    out: &Path,
    echo: bool,
) -> CliResult<TrainReport> {
    if echo {
        println!("{LOG_HEADER}");
    }
    let report = pretrain_logged(ds, arch, config, &mut |row| {
        if echo {
            println!("{}", row.csv_line());
        }
    })?;
    let mut extras = BTreeMap::new();
    extras.insert("initial_objective".to_string(), vec![report.initial_objective]);
    extras.insert("final_objective".to_string(), vec![report.final_objective]);
    write_file(out, &report.params.to_document_with(&extras))?;
    let tasks: Vec<String> = ds.tasks.iter().map(|t| t.name.clone()).collect();
    write_file(&log_path(out), &training_log(&tasks, &report.log))?;
    Ok(report)
}

pub fn pretrain(args: &PretrainArgs, s: &Section) -> CliResult<()> {
    let data: std::path::PathBuf = s.require(args.data.clone(), "data")?;
    let out: std::path::PathBuf = s.require(args.out.clone(), "out")?;
    let objective = s.or(args.objective, "objective", ObjectiveArg::Nll)?;
    let arch = s.or(args.arch, "arch", ArchArg::ConstMatern)?;
    let gradient = s.or(args.gradient, "gradient", GradientArg::Analytic)?;
    let batch = s.string_or_int(args.batch.clone(), "batch")?.unwrap_or_else(|| "full".into());
    let defaults = TrainConfig::default();
    let config = TrainConfig {
        objective: objective.into(),
        lambda: s.or(args.lambda, "lambda", defaults.lambda)?,
        max_iters: s.or(args.iters, "iters", defaults.max_iters)?,
        batch: parse_batch(&batch)?,
        seed: s.or(args.seed, "seed", 0)?,
        gradient_mode: match gradient {
            GradientArg::Analytic => GradientMode::Analytic,
            GradientArg::Fd => GradientMode::FiniteDifference,
        },
        ..defaults
    };
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;

    let ds = load_dataset(&data)?;
    let report = fit_and_save(&ds, arch.into(), &config, &out, true)?;
    log::info!(
        "objective {} -> {} after {} iterations{}",
        report.initial_objective,
        report.final_objective,
        report.iterations,
        if report.converged { " (converged)" } else { "" }
    );

    let mut m = RunManifest::new(
        "pretrain",
        json!({
            "data": data.display().to_string(),
            "objective": format!("{objective:?}").to_lowercase(),
            "lambda": config.lambda,
            "arch": arch_name(arch),
            "iters": config.max_iters,
            "batch": batch,
            "gradient": format!("{gradient:?}").to_lowercase(),
            "out": out.display().to_string(),
        }),
        vec![config.seed],
    );
    m.input(&data)?;
    m.output(&out);
    m.output(&log_path(&out));
    m.write(&manifest_path(&out))
}
