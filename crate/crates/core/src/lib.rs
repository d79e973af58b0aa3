//! Numerical core of the Zakharov-Kuznetsov scattering lab.
//!
//! The continuum `ℝ³` is replaced by a periodic box; fields are sampled on a
//! uniform grid and every linear operator is a Fourier multiplier. Decay
//! measurements are only meaningful before the dispersed wave packet wraps
//! around the box, so every scan reports its wrap time.

pub mod data;
pub mod duhamel;
pub mod error;
pub mod fit;
pub mod propagator;
pub mod scattering;
pub mod spectral;
pub mod trajectory;

pub use error::{Error, Result};
