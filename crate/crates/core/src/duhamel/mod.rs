//! The bilinear Duhamel operator, the second iterate `u₂`, the `X_δ`/`Y_δ`
//! seminorms and the decay measurements built on them.

pub(crate) mod bilinear;
pub mod quadrature;
mod scans;
mod seminorm;

pub use bilinear::{
    bilinear_b, bilinear_b_checked, duhamel_residual, leibniz_checks, u2_series, BilinearOutput, DuhamelResidual,
    LeibnizCheck, LeibnizReport,
};
pub use quadrature::{Horizon, QuadratureRule, QuadratureSpec, TailPolicy};
pub use scans::{bilinear_decay_scan, u1_decay_scan, DataScan};
pub use seminorm::{seminorm_x, seminorm_y, SeminormReport, SeminormTerm};
