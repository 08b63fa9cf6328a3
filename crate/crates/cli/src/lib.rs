//! Command-line front end: pre-training, single runs, synthetic data, benchmarks and reports.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

pub mod commands;
pub mod manifest;
pub mod settings;

pub use commands::{bench, pretrain, report, run, synth};

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: msg.into() }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: msg.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<metagp_core::Error> for CliError {
    fn from(e: metagp_core::Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_VALIDATION };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::validation(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "metagp", version, about = "Pre-trained Gaussian-process priors for Bayesian optimization")]
pub struct Cli {
    /// TOML file with default flag values, one table per command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a GP prior to a multi-task dataset.
    Pretrain(PretrainArgs),
    /// Optimize one task with a frozen prior.
    Run(RunArgs),
    /// Generate a synthetic multi-task dataset from a known GP.
    Synth(SynthArgs),
    /// Leave-task-out benchmark over an offline dataset.
    Bench(BenchArgs),
    /// Performance profile and best-value summary from a traces directory.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    Nll,
    Kl,
    Nllkl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArchArg {
    ConstMatern,
    Mlp8Matern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientArg {
    Analytic,
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Offline,
    OnlineSynth,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PretrainArgs {
    /// Dataset document.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Weight of the KL term for nllkl.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub arch: Option<ArchArg>,
    #[arg(long)]
    pub iters: Option<usize>,
    /// "full" or a number of points per task.
    #[arg(long)]
    pub batch: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub gradient: Option<GradientArg>,
    /// Model document to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Model document.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Dataset document (offline) or test-function file (online-synth).
    #[arg(long)]
    pub task: Option<PathBuf>,
    /// Which task or test function in the file; needed when it holds more than one.
    #[arg(long)]
    pub task_name: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// pi, pi:<threshold>, ei, ucb or ucb:<zeta>.
    #[arg(long)]
    pub acq: Option<String>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trace file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub tasks: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub matched_fraction: Option<f64>,
    /// Observation noise variance.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Shared lengthscale of every input dimension.
    #[arg(long)]
    pub lengthscale: Option<f64>,
    #[arg(long)]
    pub mean: Option<f64>,
    /// Model document with the true parameters; overrides the scalar flags above.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Number of held-out test functions.
    #[arg(long)]
    pub test_functions: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub features: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Held-out task names (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    pub holdout: Vec<String>,
    /// Hold out every task whose name starts with this prefix.
    #[arg(long)]
    pub holdout_prefix: Option<String>,
    /// Any of rand, stbo, hyperbo-nll, hyperbo-kl, hyperbo-nllkl.
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<String>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub acq: Option<String>,
    #[arg(long, value_enum)]
    pub arch: Option<ArchArg>,
    /// Optimizer iterations for pre-training.
    #[arg(long)]
    pub pretrain_iters: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub traces_dir: Option<PathBuf>,
    /// median@K
    #[arg(long)]
    pub criterion: Option<String>,
    /// Profile CSV to write; the summary goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command line.
pub fn execute(cli: Cli) -> CliResult<()> {
    let settings = settings::Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Pretrain(a) => pretrain(&a, &settings.section("pretrain")),
        Command::Run(a) => run(&a, &settings.section("run")),
        Command::Synth(a) => synth(&a, &settings.section("synth")),
        Command::Bench(a) => bench(&a, &settings.section("bench")),
        Command::Report(a) => report(&a, &settings.section("report")),
    }
}
