//! The free group `V(t) = e^{−t∂1Δ}`, the conserved functionals, and
//! measurements of linear dispersive decay.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fit::fit_power_law;
use crate::spectral::{
    apply_multiplier, from_spectral, lebesgue_norm, to_spectral, Grid3, Guard, MultiplierSpec, RealField, SpectralField,
};

/// `V(t)` on a fixed grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeEvolution {
    pub grid: Grid3,
    pub time: f64,
}

impl FreeEvolution {
    pub fn new(grid: Grid3, time: f64) -> Self {
        Self { grid, time }
    }

    pub fn apply_spectral(&self, f: &SpectralField) -> SpectralField {
        evolve_spectral(f, self.time)
    }

    pub fn apply(&self, f: &RealField) -> Result<RealField> {
        free_evolve(f, self.time)
    }
}

/// Multiplies every mode by `e^{itξ1|ξ|²}` and zeroes the Nyquist planes.
pub fn evolve_spectral(f: &SpectralField, t: f64) -> SpectralField {
    let grid = *f.grid();
    let src = f.coefficients();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    grid.for_each_mode(|idx, m, xi| {
        if m.iter().any(|&a| grid.is_nyquist(a)) {
            return;
        }
        let w = xi[0] * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        let (s, c) = (t * w).sin_cos();
        out[idx] = src[idx] * Complex64::new(c, s);
    });
    SpectralField::new(grid, out).expect("same grid")
}

pub fn free_evolve(f: &RealField, t: f64) -> Result<RealField> {
    Ok(from_spectral(&evolve_spectral(&to_spectral(f)?, t)))
}

/// `M(u) = ½∫u²`.
pub fn mass(u: &RealField) -> f64 {
    0.5 * u.grid().cell_volume() * u.samples().iter().map(|v| v * v).sum::<f64>()
}

/// `E(u) = ½∫|∇u|² + ⅓∫u³`, the Hamiltonian of `∂t u + ∂1Δu = ∂1(u²)`.
///
/// Gradients are spectral (Plancherel); the cubic term is a Riemann sum.
pub fn energy(u: &RealField) -> Result<f64> {
    Ok(energy_spectral(&to_spectral(u)?, u))
}

pub(crate) fn energy_spectral(uh: &SpectralField, u: &RealField) -> f64 {
    let h3 = u.grid().cell_volume();
    let mut grad = 0.0;
    u.grid().for_each_mode(|idx, _, xi| {
        grad += (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) * uh.coefficients()[idx].norm_sqr();
    });
    let cubic: f64 = u.samples().iter().map(|v| v * v * v).sum();
    0.5 * h3 * grad + h3 * cubic / 3.0
}

/// Time for the wave packet to cross half the box:
/// `(L/2) / (3 ξ_eff²)`, with `ξ_eff` the radius holding `mass_fraction` of
/// the spectral mass.
pub fn wrap_time(f: &SpectralField, mass_fraction: f64) -> f64 {
    let grid = *f.grid();
    let mut modes: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    grid.for_each_mode(|idx, _, xi| {
        let c = f.coefficients()[idx].norm_sqr();
        if c > 0.0 {
            modes.push(((xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt(), c));
        }
    });
    let total: f64 = modes.iter().map(|m| m.1).sum();
    if total == 0.0 {
        return f64::INFINITY;
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    let mut radius = modes.last().map(|m| m.0).unwrap_or(0.0);
    for (r, c) in &modes {
        acc += c;
        if acc >= mass_fraction * total {
            radius = *r;
            break;
        }
    }
    if radius == 0.0 {
        return f64::INFINITY;
    }
    0.5 * grid.length() / (3.0 * radius * radius)
}

/// Sample times for a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TimeSampling {
    Explicit {
        times: Vec<f64>,
    },
    /// `count` geometrically spaced times in `[lo·t_wrap, hi·t_wrap]`.
    WrapRelative {
        lo: f64,
        hi: f64,
        count: usize,
    },
}

impl TimeSampling {
    pub fn resolve(&self, t_wrap: f64) -> Result<Vec<f64>> {
        match self {
            TimeSampling::Explicit { times } => {
                if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                    return Err(invalid("scan.times", "times must be positive and finite"));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("scan.times", "times must be strictly increasing"));
                }
                Ok(times.clone())
            }
            TimeSampling::WrapRelative { lo, hi, count } => {
                if !(0.0 < *lo && lo < hi) || *count < 2 {
                    return Err(invalid("scan.times", "need 0 < lo < hi and count >= 2"));
                }
                if !t_wrap.is_finite() {
                    return Err(invalid("scan.times", "wrap time is infinite (zero data?)"));
                }
                Ok(geometric(lo * t_wrap, hi * t_wrap, *count))
            }
        }
    }
}

pub fn geometric(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| a * (b / a).powf(i as f64 / (count - 1) as f64)).collect()
}

/// Window of the log-log fit; the upper end is always clipped to the wrap time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FitWindow {
    Explicit { t0: f64, t1: f64 },
    WrapRelative { lo: f64, hi: f64 },
}

impl FitWindow {
    pub fn resolve(&self, t_wrap: f64) -> (f64, f64) {
        let (a, b) = match self {
            FitWindow::Explicit { t0, t1 } => (*t0, *t1),
            FitWindow::WrapRelative { lo, hi } => (lo * t_wrap, hi * t_wrap),
        };
        (a, b.min(t_wrap))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub times: TimeSampling,
    pub window: FitWindow,
    /// Spectral mass fraction defining `ξ_eff` in [`wrap_time`].
    pub wrap_mass_fraction: f64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            times: TimeSampling::WrapRelative { lo: 0.5, hi: 1.0, count: 16 },
            window: FitWindow::WrapRelative { lo: 0.5, hi: 1.0 },
            wrap_mass_fraction: 0.9,
        }
    }
}

impl ScanSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.wrap_mass_fraction > 0.0 && self.wrap_mass_fraction <= 1.0) {
            return Err(invalid("scan.wrap_mass_fraction", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayScanResult {
    pub norm_spec: String,
    pub samples: Vec<(f64, f64)>,
    pub target_exponent: f64,
    pub fitted_exponent: f64,
    pub prefactor: f64,
    pub fit_window: (f64, f64),
    pub fit_points: usize,
    pub wrap_time: f64,
    pub residual: f64,
    /// Per-sample truncation estimates, when the norm involves a truncated integral.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tail_estimates: Vec<f64>,
    /// Per-sample `value · t^{-target} / data-norm`, when meaningful.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub empirical_constants: Vec<f64>,
}

impl DecayScanResult {
    /// Assembles a result from samples, fitting only inside the window.
    pub fn from_samples(
        norm_spec: String,
        samples: Vec<(f64, f64)>,
        target_exponent: f64,
        window: (f64, f64),
        wrap_time: f64,
    ) -> Result<Self> {
        let (lo, hi) = window;
        let eps = 1e-9 * hi.abs().max(1.0);
        let used: Vec<(f64, f64)> = samples.iter().copied().filter(|&(t, _)| t >= lo - eps && t <= hi + eps).collect();
        if used.len() < 2 {
            return Err(Error::EmptyWindow { lo, hi });
        }
        let fit = fit_power_law(&used)?;
        Ok(Self {
            norm_spec,
            samples,
            target_exponent,
            fitted_exponent: fit.exponent,
            prefactor: fit.prefactor,
            fit_window: window,
            fit_points: fit.points,
            wrap_time,
            residual: fit.residual,
            tail_estimates: Vec::new(),
            empirical_constants: Vec::new(),
        })
    }

    /// The acceptance form for an upper-bound rate: `fitted ≤ target + tol`.
    pub fn meets(&self, tolerance: f64) -> bool {
        self.fitted_exponent <= self.target_exponent + tolerance
    }
}

/// Evaluates `norm(from_spectral(V(t) g))` over the resolved times, where
/// `g = m f̂`, and fits inside the window.
pub(crate) fn scan_evolved(
    f: &SpectralField,
    m: &MultiplierSpec,
    norm: impl Fn(&RealField) -> Result<f64>,
    norm_spec: String,
    target: f64,
    settings: &ScanSettings,
) -> Result<DecayScanResult> {
    settings.validate()?;
    let t_wrap = wrap_time(f, settings.wrap_mass_fraction);
    let times = settings.times.resolve(t_wrap)?;
    let window = settings.window.resolve(t_wrap);
    let g = apply_multiplier(f, m)?;
    let mut samples = Vec::with_capacity(times.len());
    for &t in &times {
        let v = norm(&from_spectral(&evolve_spectral(&g, t)))?;
        samples.push((t, v));
    }
    DecayScanResult::from_samples(norm_spec, samples, target, window, t_wrap)
}

/// `‖|∂1|^{ab} V(t) f‖_{L^q}` with `q = 2/(1−b)`, fitted against `−b(1+a/3)`.
pub fn linear_decay_scan(f: &RealField, a: f64, b: f64, settings: &ScanSettings) -> Result<DecayScanResult> {
    if !(a > 0.0 && a < 1.0) {
        return Err(invalid("a", format!("must lie in (0, 1), got {a}")));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(invalid("b", format!("must lie in [0, 1], got {b}")));
    }
    let q = if b == 1.0 { f64::INFINITY } else { 2.0 / (1.0 - b) };
    let m = MultiplierSpec::abs_dx1_pow(a * b, Guard::ZeroSetToZero);
    let spec = format!("|| |d1|^{} V(t) f ||_L^{}", a * b, q);
    scan_evolved(&to_spectral(f)?, &m, |g| lebesgue_norm(g, q), spec, -b * (1.0 + a / 3.0), settings)
}

/// Default relative width of the cone band removed by the projection `P`.
pub const KPV_BAND: f64 = 1e-3;

/// `‖|∂1|^{1/2} |3∂1²−∂2²−∂3²|^{1/2} V(t) P f‖_{L^∞}`, fitted against `−3/2`.
pub fn kpv_decay_scan(f: &RealField, band_eps: f64, settings: &ScanSettings) -> Result<DecayScanResult> {
    let m = MultiplierSpec::cone_band_projection(band_eps)
        .then(&MultiplierSpec::abs_dx1_pow(0.5, Guard::ZeroSetToZero))
        .then(&MultiplierSpec::abs_cone_pow(0.5));
    let spec = format!("|| |d1|^1/2 |3d1^2-d2^2-d3^2|^1/2 V(t) P f ||_Linf (band {band_eps})");
    scan_evolved(&to_spectral(f)?, &m, |g| lebesgue_norm(g, f64::INFINITY), spec, -1.5, settings)
}
