use num_complex::Complex64;

use super::fft::plans;
use super::grid::Grid3;
use crate::error::{Error, Result};

/// Real samples on a [`Grid3`].
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: Grid3,
    data: Vec<f64>,
}

/// Unitary Fourier coefficients on a [`Grid3`], FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid3,
    data: Vec<Complex64>,
}

fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFiniteInput { index }),
        None => Ok(()),
    }
}

impl RealField {
    pub fn new(grid: Grid3, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(crate::error::invalid(
                "field samples",
                format!("expected {} samples, got {}", grid.len(), data.len()),
            ));
        }
        check_finite(&data)?;
        Ok(Self { grid, data })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self { grid, data: vec![0.0; grid.len()] }
    }

    /// Samples `f(x)` at every grid point, `x` measured from the box center.
    pub fn from_fn(grid: Grid3, f: impl Fn([f64; 3]) -> f64) -> Self {
        let xs = grid.coordinates();
        let n = grid.n();
        let mut data = Vec::with_capacity(grid.len());
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    data.push(f([xs[i], xs[j], xs[k]]));
                }
            }
        }
        Self { grid, data }
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.data
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { grid: self.grid, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { grid: self.grid, data })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, data: self.data.iter().map(|v| f(*v)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn from_raw(grid: Grid3, data: Vec<f64>) -> Self {
        Self { grid, data }
    }
}

impl SpectralField {
    pub fn zeros(grid: Grid3) -> Self {
        Self { grid, data: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn new(grid: Grid3, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(crate::error::invalid(
                "spectral coefficients",
                format!("expected {}, got {}", grid.len(), data.len()),
            ));
        }
        Ok(Self { grid, data })
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.data
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { grid: self.grid, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `Σ|ĉ|²`; equals `Σ|f|²` over samples since the transform is unitary.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `L²` norm of the represented function, `sqrt(h³ Σ|ĉ|²)`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_volume() * self.energy()).sqrt()
    }

    /// `H^s` norm computed on the coefficients, `sqrt(h³ Σ ⟨ξ⟩^{2s} |ĉ|²)`.
    pub fn sobolev_l2_norm(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        self.grid.for_each_mode(|idx, _, xi| {
            let w = 1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            acc += w.powf(s) * self.data[idx].norm_sqr();
        });
        (self.grid.cell_volume() * acc).sqrt()
    }

    /// Largest deviation from `ĉ(−ξ) = conj(ĉ(ξ))` over modes whose mirror
    /// is on the grid (Nyquist planes excluded).
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0f64;
        self.grid.for_each_mode(|idx, m, _| {
            if m.iter().any(|&a| self.grid.is_nyquist(a)) {
                return;
            }
            let mirror = m.map(|a| (n - a) % n);
            let j = self.grid.index(mirror[0], mirror[1], mirror[2]);
            worst = worst.max((self.data[idx] - self.data[j].conj()).norm());
        });
        worst
    }

    pub(crate) fn from_raw(grid: Grid3, data: Vec<Complex64>) -> Self {
        Self { grid, data }
    }

    pub fn into_raw(self) -> Vec<Complex64> {
        self.data
    }
}

/// Unitary forward transform. Rejects non-finite samples.
pub fn to_spectral(f: &RealField) -> Result<SpectralField> {
    check_finite(&f.data)?;
    Ok(to_spectral_unchecked(f))
}

fn to_spectral_unchecked(f: &RealField) -> SpectralField {
    let mut data: Vec<Complex64> = f.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plans(f.grid.n()).transform(&mut data, false);
    SpectralField { grid: f.grid, data }
}

/// Unitary inverse transform; returns the real part.
pub fn from_spectral(f: &SpectralField) -> RealField {
    let mut data = f.data.clone();
    plans(f.grid.n()).transform(&mut data, true);
    RealField { grid: f.grid, data: data.into_iter().map(|c| c.re).collect() }
}
