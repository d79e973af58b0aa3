//! The remainder `w`, the assembled solution `u = w + u₁ + u₂`, and its checks.

mod config;
mod construct;
mod forward;
mod kernel;
mod nonlinear;
mod norms;
mod validate;

pub use config::{strichartz_exponents, SolveMode, SolverConfig};
pub use construct::{construct_w, PicardReport, ScatteringSetup, SolverDiagnostics, StepNorms};
pub use forward::{forward_solve_zk, forward_solve_zk_with, ForwardOptions, ForwardRun};
pub use nonlinear::nonlinearity_n;
pub use norms::{strichartz_norm, z_norm, ZNorm};
pub use validate::{validate_scattering, validate_scattering_with, ValidationOptions, ValidationReport};
