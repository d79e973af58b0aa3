//! Decay of `‖u₂(t)‖_{L²}` and `‖u₁(t)‖_{W^{4,∞}}`.

use serde::{Deserialize, Serialize};

use super::bilinear::u2_series;
use super::quadrature::QuadratureSpec;
use super::seminorm::{seminorm_x, seminorm_y, SeminormReport};
use crate::error::{invalid, Result};
use crate::propagator::{scan_evolved, wrap_time, DecayScanResult, ScanSettings};
use crate::spectral::{lebesgue_norm, to_spectral, Guard, MultiplierSpec, RealField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataScan {
    pub scan: DecayScanResult,
    /// The data seminorm used to normalize the empirical constants.
    pub data_norm: SeminormReport,
}

impl DataScan {
    /// `max/min` of the empirical constants over the fit window.
    pub fn constant_spread(&self) -> f64 {
        let (lo, hi) = self.scan.fit_window;
        let eps = 1e-9 * hi.max(1.0);
        let cs: Vec<f64> = self
            .scan
            .samples
            .iter()
            .zip(&self.scan.empirical_constants)
            .filter(|((t, _), _)| *t >= lo - eps && *t <= hi + eps)
            .map(|(_, c)| *c)
            .collect();
        let max = cs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = cs.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `‖u₂(t)‖_{L²}` from one backward sweep over a common horizon, fitted
/// against `−1−δ/3`.
pub fn bilinear_decay_scan(
    u_plus: &RealField,
    delta: f64,
    settings: &ScanSettings,
    quad: &QuadratureSpec,
    guard: Guard,
) -> Result<DataScan> {
    check_delta(delta)?;
    settings.validate()?;
    let us = to_spectral(u_plus)?;
    let t_wrap = wrap_time(&us, settings.wrap_mass_fraction);
    let times = settings.times.resolve(t_wrap)?;
    let window = settings.window.resolve(t_wrap);
    let traj = u2_series(u_plus, &times, quad)?;
    let mut samples = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        samples.push((t, traj.u2_spectrum(i)?.l2_norm()));
    }
    let target = -1.0 - delta / 3.0;
    let spec = format!("|| u2(t) ||_L2, horizon {:.4}", traj.metadata.horizon);
    let mut scan = DecayScanResult::from_samples(spec, samples, target, window, t_wrap)?;
    let y = seminorm_y(u_plus, delta, guard)?;
    let y2 = y.value_guarded * y.value_guarded;
    scan.empirical_constants = scan.samples.iter().map(|&(t, v)| v * t.powf(-target) / y2).collect();
    scan.tail_estimates = traj.metadata.tail_estimates.clone();
    Ok(DataScan { scan, data_norm: y })
}

/// `‖⟨∇⟩⁴ V(t)u₊‖_{L^∞}`, fitted against `−1−δ/3`.
pub fn u1_decay_scan(u_plus: &RealField, delta: f64, settings: &ScanSettings, guard: Guard) -> Result<DataScan> {
    check_delta(delta)?;
    let target = -1.0 - delta / 3.0;
    let mut scan = scan_evolved(
        &to_spectral(u_plus)?,
        &MultiplierSpec::bessel(4.0),
        |g| lebesgue_norm(g, f64::INFINITY),
        "|| V(t) u+ ||_W^4,inf".into(),
        target,
        settings,
    )?;
    let x = seminorm_x(u_plus, delta, guard)?;
    scan.empirical_constants = scan.samples.iter().map(|&(t, v)| v * t.powf(-target) / x.value_guarded).collect();
    Ok(DataScan { scan, data_norm: x })
}
