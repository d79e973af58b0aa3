//! Periodic-box discretization: grid, transforms, multipliers, norms.

pub(crate) mod band;
mod fft;
mod field;
mod grid;
mod multiplier;
mod norms;
pub mod snapshot;

pub use field::{from_spectral, to_spectral, RealField, SpectralField};
pub use grid::Grid3;
pub use multiplier::{apply_multiplier, cone_symbol, dealias_two_thirds, Guard, MultiplierSpec};
pub use norms::{lebesgue_norm, sobolev_norm, weighted_field};
pub use snapshot::{read_snapshot, write_snapshot};

/// Transform, multiply, transform back.
pub fn apply_to_field(f: &RealField, m: &MultiplierSpec) -> crate::Result<RealField> {
    Ok(from_spectral(&apply_multiplier(&to_spectral(f)?, m)?))
}
