use std::collections::BTreeMap;
use std::path::PathBuf;

use metagp_core::data::{save_dataset, synth_generate, SynthConfig, DEFAULT_FEATURES};
use metagp_core::gp::GpParams;
use serde_json::json;

use super::run::load_model;
use super::write_file;
use crate::manifest::RunManifest;
use crate::settings::Section;
use crate::{CliError, CliResult, SynthArgs};

pub const DATASET_FILE: &str = "dataset.json";
pub const TRUTH_FILE: &str = "truth.model";
pub const TEST_FUNCTIONS_FILE: &str = "test_functions.json";

pub fn synth(args: &SynthArgs, s: &Section) -> CliResult<()> {
    let out: PathBuf = s.require(args.out.clone(), "out")?;
    let n_tasks: usize = s.require(args.tasks, "tasks")?;
    let points: usize = s.require(args.points, "points")?;
    let truth_path: Option<PathBuf> = s.pick(args.truth.clone(), "truth")?;
    let seed: u64 = s.or(args.seed, "seed", 0)?;

    let params = match &truth_path {
        Some(p) => load_model(p)?,
        None => {
            let d: usize = s.require(args.dim, "dim")?;
            if d == 0 {
                return Err(CliError::usage("--dim must be positive"));
            }
            let ls: f64 = s.or(args.lengthscale, "lengthscale", 0.3)?;
            GpParams::const_matern(
                s.or(args.mean, "mean", 0.0)?,
                s.or(args.amplitude, "amplitude", 1.0)?,
                &vec![ls; d],
                s.or(args.noise, "noise", 0.01)?,
            )
            .map_err(|e| CliError::usage(e.to_string()))?
        }
    };
    if let Some(d) = s.pick(args.dim, "dim")? {
        if d != params.dim() {
            return Err(CliError::usage(format!("--dim {d} disagrees with the truth model dimension {}", params.dim())));
        }
    }
    let mut config = SynthConfig::new(n_tasks, points, params, seed);
    config.matched_fraction = s.or(args.matched_fraction, "matched_fraction", 0.5)?;
    config.n_test_functions = s.or(args.test_functions, "test_functions", 0)?;
    config.grid_per_dim = s.pick(args.grid, "grid")?;
    config.n_features = s.or(args.features, "features", DEFAULT_FEATURES)?;
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;

    let output = synth_generate(&config)?;
    let dataset_path = out.join(DATASET_FILE);
    let truth = out.join(TRUTH_FILE);
    let tf_path = out.join(TEST_FUNCTIONS_FILE);
    std::fs::create_dir_all(&out).map_err(|e| crate::io_err(&out, e))?;
    save_dataset(&output.dataset, &dataset_path)?;
    let mut extras = BTreeMap::new();
    extras.insert("test_function_max".to_string(), output.test_functions.iter().map(|f| f.f_max).collect());
    write_file(&truth, &config.params.to_document_with(&extras))?;
    write_file(&tf_path, &(serde_json::to_string_pretty(&output.test_functions).expect("serializable") + "\n"))?;
    println!(
        "{} tasks x {} points ({} shared), {} test functions -> {}",
        n_tasks,
        points,
        config.matched_count(),
        output.test_functions.len(),
        out.display()
    );

    let mut m = RunManifest::new(
        "synth",
        json!({
            "tasks": n_tasks,
            "points": points,
            "dim": config.dim(),
            "matched_fraction": config.matched_fraction,
            "truth_theta": config.params.as_flat(),
            "architecture": config.params.arch.name(),
            "test_functions": config.n_test_functions,
            "grid": config.grid_per_dim,
            "features": config.n_features,
            "out": out.display().to_string(),
        }),
        vec![seed],
    );
    if let Some(p) = &truth_path {
        m.input(p)?;
    }
    for p in [&dataset_path, &truth, &tf_path] {
        m.output(p);
    }
    m.write(&out.join("manifest.json"))
}
