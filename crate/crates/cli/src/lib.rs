//! Experiment runner for the ZK scattering lab: configuration, the
//! experiments behind each subcommand, and the JSON/CSV reports they write.

pub mod config;
mod experiments;
pub mod plot;
pub mod report;

use std::path::Path;

pub use config::{ConfigError, ExperimentConfig};
pub use experiments::Experiment;
pub use report::RunReport;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical abort: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 for bad configuration, 3 for a numerical abort or unwritable output.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) | RunError::Io(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    One(Experiment),
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::One(e) => e.name(),
            Command::All => "all",
        }
    }

    fn experiments(self) -> Vec<Experiment> {
        match self {
            Command::One(e) => vec![e],
            Command::All => Experiment::ALL.to_vec(),
        }
    }
}

/// Runs `cmd` and writes `report.json` plus the plot tables into `out`.
///
/// A numerical abort in one experiment is recorded in the report and the
/// remaining experiments still run. A configuration error stops the run,
/// after flushing whatever was gathered so far.
pub fn run(cmd: Command, cfg: &ExperimentConfig, out: &Path, quiet: bool) -> Result<RunReport, RunError> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let mut report = RunReport::new(cmd.name(), cfg);
    for e in cmd.experiments() {
        let mut ctx = experiments::Ctx { cfg, out, report: &mut report, quiet };
        match experiments::run(e, &mut ctx) {
            Ok(()) => {}
            Err(RunError::Numerical(msg)) => {
                ctx.say(e.name(), format!("aborted: {msg}"));
                report.errors.push(format!("{}: {msg}", e.name()));
            }
            Err(err) => {
                report.refresh();
                report.write(&out.join("report.json"))?;
                return Err(err);
            }
        }
    }
    report.refresh();
    report.write(&out.join("report.json"))?;
    plot::emit_plot_data(&report, out)?;
    Ok(report)
}

/// 0 when every mandatory check passed, 1 when one failed, 3 when an
/// experiment aborted.
pub fn exit_code(report: &RunReport) -> i32 {
    if !report.errors.is_empty() {
        3
    } else if report.pass {
        0
    } else {
        1
    }
}
