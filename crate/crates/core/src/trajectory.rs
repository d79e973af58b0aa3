//! Time-indexed fields `u₁, u₂, w, u = w + u₁ + u₂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::propagator::evolve_spectral;
use crate::scattering::SolverDiagnostics;
use crate::spectral::{from_spectral, Grid3, RealField, SpectralField};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMetadata {
    /// Upper limit of the truncated Duhamel integrals (terminal time for `w`).
    pub horizon: f64,
    /// Per-frame estimate of the dropped `∫_{horizon}^∞` contribution to `u₂`.
    pub tail_estimates: Vec<f64>,
    pub notes: Vec<String>,
    /// Present on trajectories built by the scattering solver.
    pub solver: Option<SolverDiagnostics>,
}

/// Frames are stored as two-thirds-band coefficients in the physical frame;
/// `u₁` is regenerated from `u₊` on demand.
#[derive(Clone, Debug)]
pub struct TrajectorySet {
    grid: Grid3,
    index: Vec<usize>,
    times: Vec<f64>,
    u_plus: Vec<Complex64>,
    u2: Vec<Vec<Complex64>>,
    w: Vec<Vec<Complex64>>,
    pub metadata: TrajectoryMetadata,
}

impl TrajectorySet {
    pub(crate) fn new(grid: Grid3, u_plus: Vec<Complex64>, metadata: TrajectoryMetadata) -> Self {
        Self { grid, index: grid.band_indices(), times: Vec::new(), u_plus, u2: Vec::new(), w: Vec::new(), metadata }
    }

    pub(crate) fn push(&mut self, t: f64, u2: Vec<Complex64>, w: Option<Vec<Complex64>>) {
        self.times.push(t);
        self.u2.push(u2);
        if let Some(w) = w {
            self.w.push(w);
        }
    }

    pub(crate) fn u2_band(&self, i: usize) -> &[Complex64] {
        &self.u2[i]
    }

    pub(crate) fn w_band(&self, i: usize) -> Option<&[Complex64]> {
        self.w.get(i).map(|v| v.as_slice())
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// True when `w` frames were stored; otherwise `w ≡ 0`.
    pub fn has_w(&self) -> bool {
        !self.w.is_empty()
    }

    fn expand(&self, band: &[Complex64]) -> SpectralField {
        let mut full = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (&i, &c) in self.index.iter().zip(band) {
            full[i] = c;
        }
        SpectralField::from_raw(self.grid, full)
    }

    pub fn u_plus_spectrum(&self) -> SpectralField {
        self.expand(&self.u_plus)
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(invalid("frame", format!("index {i} out of range ({} frames)", self.len())));
        }
        Ok(())
    }

    pub fn u1_spectrum(&self, i: usize) -> Result<SpectralField> {
        self.check(i)?;
        Ok(evolve_spectral(&self.u_plus_spectrum(), self.times[i]))
    }

    pub fn u2_spectrum(&self, i: usize) -> Result<SpectralField> {
        self.check(i)?;
        Ok(self.expand(&self.u2[i]))
    }

    pub fn w_spectrum(&self, i: usize) -> Result<SpectralField> {
        self.check(i)?;
        Ok(match self.w.get(i) {
            Some(w) => self.expand(w),
            None => SpectralField::zeros(self.grid),
        })
    }

    pub fn u_spectrum(&self, i: usize) -> Result<SpectralField> {
        self.w_spectrum(i)?.add(&self.u1_spectrum(i)?)?.add(&self.u2_spectrum(i)?)
    }

    pub fn u1(&self, i: usize) -> Result<RealField> {
        Ok(from_spectral(&self.u1_spectrum(i)?))
    }

    pub fn u2(&self, i: usize) -> Result<RealField> {
        Ok(from_spectral(&self.u2_spectrum(i)?))
    }

    pub fn w(&self, i: usize) -> Result<RealField> {
        Ok(from_spectral(&self.w_spectrum(i)?))
    }

    pub fn u(&self, i: usize) -> Result<RealField> {
        Ok(from_spectral(&self.u_spectrum(i)?))
    }

    /// Index of the stored frame at time `t`, if any.
    pub fn frame_at(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }

    pub(crate) fn require_w(&self) -> Result<()> {
        if self.has_w() {
            Ok(())
        } else {
            Err(invalid("trajectory", "no w frames stored"))
        }
    }
}
