//! Checks on a constructed trajectory: forward flow residual, decay of
//! `u − V(t)u₊`, and the triangle bound through `w` and `u₂`.

use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::forward::{forward_band, ForwardOptions};
use super::kernel::Kernel;
use super::norms::ZNorm;
use crate::error::{invalid, Result};
use crate::fit::{fit_power_law, PowerLawFit};
use crate::propagator::{wrap_time, FitWindow};
use crate::trajectory::TrajectorySet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// Length of the forward comparison `[T, T + span]`.
    pub residual_span: f64,
    /// Forward step; `None` uses the solver step.
    pub residual_dt: Option<f64>,
    /// Window for the `‖u − V(t)u₊‖_{H³}` fit; a relative window is also
    /// capped at half the horizon.
    pub fit_window: FitWindow,
    pub wrap_mass_fraction: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            residual_span: 5.0,
            residual_dt: None,
            fit_window: FitWindow::WrapRelative { lo: 0.0, hi: 1.0 },
            wrap_mass_fraction: 0.9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Largest `‖Φ(u(T)) − u(t)‖_{L²} / ‖u(t)‖_{L²}` over stored frames in the span.
    pub residual: f64,
    pub residual_times: Vec<f64>,
    pub decay_fit: PowerLawFit,
    pub fit_window: (f64, f64),
    pub wrap_time: f64,
    /// `fitted + α`; negative when the decay is at least as fast as `t^{−α}`.
    pub slope_minus_alpha: f64,
    /// `fitted + 1/2`.
    pub slope_minus_half: f64,
    /// `max ‖u − V u₊‖ / (‖w‖ + ‖u₂‖)` over all steps.
    pub triangle_max_ratio: f64,
    pub triangle_holds: bool,
    /// `‖w(T_max)‖_{L²}`, zero by construction.
    pub terminal_w: f64,
    pub z_norm: ZNorm,
    pub tail_estimates: Vec<f64>,
}

impl ValidationReport {
    pub fn passes(&self, residual_tol: f64, slope_gate: f64) -> bool {
        self.residual <= residual_tol && self.decay_fit.exponent <= slope_gate && self.triangle_holds
    }
}

pub fn validate_scattering(traj: &TrajectorySet, cfg: &SolverConfig) -> Result<ValidationReport> {
    validate_scattering_with(traj, cfg, &ValidationOptions::default())
}

pub fn validate_scattering_with(
    traj: &TrajectorySet,
    cfg: &SolverConfig,
    opts: &ValidationOptions,
) -> Result<ValidationReport> {
    traj.require_w()?;
    let diag = traj
        .metadata
        .solver
        .as_ref()
        .ok_or_else(|| invalid("trajectory", "no solver diagnostics; build it with construct_w"))?;
    if opts.residual_span.is_nan() || opts.residual_span <= 0.0 {
        return Err(invalid("residual_span", "must be positive"));
    }

    // (a) forward flow from u(T).
    let t0 = traj.times()[0];
    let t1 = (t0 + opts.residual_span).min(*traj.times().last().expect("nonempty"));
    let mut kernel = Kernel::new(*traj.grid());
    let u0 = kernel.band.restrict(&traj.u_spectrum(0)?);
    let fopts = ForwardOptions { dt: opts.residual_dt.unwrap_or(cfg.dt), save_every: 1, blowup_factor: 10.0 };
    let run = forward_band(&mut kernel, u0, t0, t1, &fopts)?;
    let mut residual = 0.0f64;
    let mut residual_times = Vec::new();
    for (i, &t) in traj.times().iter().enumerate() {
        if t > t1 + 1e-9 {
            break;
        }
        let Some(k) = run.times.iter().position(|&s| (s - t).abs() <= 1e-9 * t.max(1.0)) else {
            continue;
        };
        let stored = traj.u_spectrum(i)?;
        let err = run.frames[k].sub(&stored)?.l2_norm() / stored.l2_norm().max(f64::MIN_POSITIVE);
        residual = residual.max(err);
        residual_times.push(t);
    }

    // (b) decay of u − V(t)u₊ = w + u₂.
    let t_wrap = wrap_time(&traj.u_plus_spectrum(), opts.wrap_mass_fraction);
    let (lo, hi) = match &opts.fit_window {
        FitWindow::Explicit { t0, t1 } => (*t0, *t1),
        // Both w and u₂ are pinned to zero at T_max, so the late window is
        // an artifact of the truncation.
        w => {
            let (lo, hi) = w.resolve(t_wrap);
            (lo, hi.min(0.5 * traj.metadata.horizon))
        }
    };
    let samples: Vec<(f64, f64)> = diag
        .series
        .iter()
        .filter(|s| s.t >= lo - 1e-9 && s.t <= hi + 1e-9 && s.remainder_h3 > 0.0)
        .map(|s| (s.t, s.remainder_h3))
        .collect();
    let decay_fit = fit_power_law(&samples)?;

    // (c) triangle inequality.
    let mut triangle_max_ratio = 0.0f64;
    for s in &diag.series {
        let bound = s.w_h3 + s.u2_h3;
        if bound > 0.0 {
            triangle_max_ratio = triangle_max_ratio.max(s.remainder_h3 / bound);
        }
    }
    let last = traj.len() - 1;
    Ok(ValidationReport {
        residual,
        residual_times,
        slope_minus_alpha: decay_fit.exponent + cfg.alpha,
        slope_minus_half: decay_fit.exponent + 0.5,
        decay_fit,
        fit_window: (lo, hi),
        wrap_time: t_wrap,
        triangle_holds: triangle_max_ratio <= 1.0 + 1e-12,
        triangle_max_ratio,
        terminal_w: traj.w_spectrum(last)?.l2_norm(),
        z_norm: diag.z_norm.clone(),
        tail_estimates: traj.metadata.tail_estimates.clone(),
    })
}
