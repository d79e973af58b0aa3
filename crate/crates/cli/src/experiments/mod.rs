//! One module per subcommand; each appends checks, scans and details to the
//! shared report and writes its own files.

mod algebra;
mod bilinear;
mod conserve;
mod linear;
mod scatter;

use std::path::Path;

use serde::Serialize;
use zk_core::data::FinalData;
use zk_core::spectral::{Grid3, RealField};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::RunReport;
use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    VerifyAlgebra,
    LinearDecay,
    KpvDecay,
    BilinearDecay,
    Conserve,
    Scatter,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::VerifyAlgebra,
        Experiment::LinearDecay,
        Experiment::KpvDecay,
        Experiment::BilinearDecay,
        Experiment::Conserve,
        Experiment::Scatter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::VerifyAlgebra => "verify-algebra",
            Experiment::LinearDecay => "linear-decay",
            Experiment::KpvDecay => "kpv-decay",
            Experiment::BilinearDecay => "bilinear-decay",
            Experiment::Conserve => "conserve",
            Experiment::Scatter => "scatter",
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub out: &'a Path,
    pub report: &'a mut RunReport,
    pub quiet: bool,
}

impl Ctx<'_> {
    pub fn say(&self, what: &str, msg: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("[{what}] {msg}");
        }
    }

    pub fn detail(&mut self, experiment: Experiment, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("details serialize");
        self.report.details.insert(experiment.name().into(), v);
    }

    pub fn grid(&self) -> Grid3 {
        self.cfg.grid()
    }
}

pub(crate) fn run(e: Experiment, ctx: &mut Ctx) -> Result<(), RunError> {
    match e {
        Experiment::VerifyAlgebra => algebra::run(ctx),
        Experiment::LinearDecay => linear::run_linear(ctx),
        Experiment::KpvDecay => linear::run_kpv(ctx),
        Experiment::BilinearDecay => bilinear::run(ctx),
        Experiment::Conserve => conserve::run(ctx),
        Experiment::Scatter => scatter::run(ctx),
    }
}

/// Samples a data block, reporting a bad width under the block's own key.
pub(crate) fn build(data: &FinalData, grid: Grid3, section: &str) -> Result<RealField, RunError> {
    data.build(grid).map_err(|e| core_err(e, section))
}

/// Parameter errors are configuration errors; everything else is a
/// numerical abort.
pub(crate) fn core_err(e: zk_core::Error, section: &str) -> RunError {
    match e {
        e @ zk_core::Error::InvalidParameter { .. } => RunError::Config(ConfigError::from_core(e, section)),
        e @ zk_core::Error::Snapshot { .. } => RunError::Config(ConfigError::new(format!("{section}.path"), e)),
        zk_core::Error::Io(e) => RunError::Io(e),
        other => RunError::Numerical(other.to_string()),
    }
}
