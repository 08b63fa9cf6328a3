//! One module per subcommand, plus the helpers they share.

use std::fs;
use std::path::{Path, PathBuf};

use metagp_core::acquisition::AcquisitionKind;
use metagp_core::gp::Architecture;
use metagp_core::pretrain::{IterLog, ObjectiveKind, LOG_HEADER};

use crate::{io_err, ArchArg, CliError, CliResult, ObjectiveArg};

mod bench;
mod pretrain;
mod report;
mod run;
mod synth;

pub use bench::{bench, parse_method, Method};
pub use pretrain::pretrain;
pub use report::{collapse, load_curves, report, summary_path, RepeatCurves};
pub use run::run;
pub use synth::synth;

impl From<ArchArg> for Architecture {
    fn from(a: ArchArg) -> Self {
        match a {
            ArchArg::ConstMatern => Architecture::ConstMatern,
            ArchArg::Mlp8Matern => Architecture::MlpMatern,
        }
    }
}

impl From<ObjectiveArg> for ObjectiveKind {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Nll => ObjectiveKind::Nll,
            ObjectiveArg::Kl => ObjectiveKind::Kl,
            ObjectiveArg::Nllkl => ObjectiveKind::NllPlusKl,
        }
    }
}

pub(crate) fn arch_name(a: ArchArg) -> &'static str {
    match a {
        ArchArg::ConstMatern => "const-matern",
        ArchArg::Mlp8Matern => "mlp8-matern",
    }
}

pub(crate) fn parse_acq(token: &str) -> CliResult<AcquisitionKind> {
    token.parse().map_err(|e: metagp_core::Error| CliError::usage(e.to_string()))
}

pub(crate) fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// `<artifact>.log.csv`
pub(crate) fn log_path(artifact: &Path) -> PathBuf {
    let mut s = artifact.as_os_str().to_owned();
    s.push(".log.csv");
    PathBuf::from(s)
}

/// Training log: one `# task <name>` line per training task, then the CSV rows.
pub(crate) fn training_log(tasks: &[String], rows: &[IterLog]) -> String {
    let mut out = String::new();
    for t in tasks {
        out.push_str(&format!("# task {t}\n"));
    }
    out.push_str(LOG_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Task names listed in a training log.
pub fn logged_tasks(log: &str) -> Vec<String> {
    log.lines().filter_map(|l| l.strip_prefix("# task ")).map(str::to_string).collect()
}
