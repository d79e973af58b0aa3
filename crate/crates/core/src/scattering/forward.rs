//! Integrating-factor RK4 for `∂t u + ∂1Δu = ∂1(u²)` with two-thirds dealiasing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::Kernel;
use crate::error::{invalid, Error, Result};
use crate::spectral::band::{Band, Coeffs};
use crate::spectral::{dealias_two_thirds, to_spectral, RealField, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForwardOptions {
    /// Largest step; the step actually used divides `t1 − t0` evenly.
    pub dt: f64,
    /// Record a frame and the conserved quantities every this many steps.
    pub save_every: usize,
    /// Abort when `‖u‖_{H¹}` exceeds this multiple of its initial value.
    pub blowup_factor: f64,
}

impl ForwardOptions {
    pub fn new(dt: f64) -> Self {
        Self { dt, save_every: 1, blowup_factor: 10.0 }
    }
}

#[derive(Clone, Debug)]
pub struct ForwardRun {
    pub dt: f64,
    pub times: Vec<f64>,
    pub frames: Vec<SpectralField>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    pub h1: Vec<f64>,
}

impl ForwardRun {
    fn drift(v: &[f64]) -> f64 {
        let v0 = v[0];
        v.iter().fold(0.0f64, |m, x| m.max((x - v0).abs())) / v0.abs().max(f64::MIN_POSITIVE)
    }

    /// Largest `|M(t) − M(t0)| / |M(t0)|` over the recorded times.
    pub fn mass_drift(&self) -> f64 {
        Self::drift(&self.mass)
    }

    pub fn energy_drift(&self) -> f64 {
        Self::drift(&self.energy)
    }

    pub fn last(&self) -> &SpectralField {
        self.frames.last().expect("at least the initial frame")
    }
}

/// Mass and energy of a band field, exact for the dealiased discrete system.
pub(crate) fn conserved(band: &mut Band, u: &[Complex64], scratch: &mut [f64]) -> (f64, f64) {
    let h3 = band.grid.cell_volume();
    let mass = 0.5 * band.weighted_sq(u, |_| 1.0);
    let grad = band.weighted_sq(u, |x| x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    band.synthesize(u, None, scratch, None);
    let cubic: f64 = scratch.iter().map(|v| v * v * v).sum();
    (mass, 0.5 * grad + h3 * cubic / 3.0)
}

fn h1(band: &Band, u: &[Complex64]) -> f64 {
    band.weighted_sq(u, |x| 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

pub fn forward_solve_zk(u0: &RealField, t0: f64, t1: f64, dt: f64) -> Result<ForwardRun> {
    forward_solve_zk_with(u0, t0, t1, &ForwardOptions::new(dt))
}

/// Solves from `u(t0) = P u0`, where `P` is the two-thirds projection.
pub fn forward_solve_zk_with(u0: &RealField, t0: f64, t1: f64, opts: &ForwardOptions) -> Result<ForwardRun> {
    let mut kernel = Kernel::new(*u0.grid());
    let u = kernel.band.restrict(&dealias_two_thirds(&to_spectral(u0)?));
    forward_band(&mut kernel, u, t0, t1, opts)
}

pub(crate) fn forward_band(
    kernel: &mut Kernel,
    mut u: Coeffs,
    t0: f64,
    t1: f64,
    opts: &ForwardOptions,
) -> Result<ForwardRun> {
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(invalid("t1", "must be finite and not before t0"));
    }
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(invalid("dt", "must be positive"));
    }
    if opts.save_every == 0 {
        return Err(invalid("save_every", "must be at least 1"));
    }
    let span = t1 - t0;
    let steps = if span == 0.0 { 0 } else { (span / opts.dt - 1e-9).ceil().max(1.0) as usize };
    let h = if steps == 0 { 0.0 } else { span / steps as f64 };
    let e = kernel.band.phases(0.5 * h);
    let e2: Coeffs = e.iter().map(|z| z * z).collect();
    let mut scratch = vec![0.0; kernel.band.grid.len()];

    let mut run = ForwardRun {
        dt: h,
        times: Vec::new(),
        frames: Vec::new(),
        mass: Vec::new(),
        energy: Vec::new(),
        h1: Vec::new(),
    };
    let record = |run: &mut ForwardRun, kernel: &mut Kernel, t: f64, u: &Coeffs, scratch: &mut [f64]| {
        let (m, en) = conserved(&mut kernel.band, u, scratch);
        run.times.push(t);
        run.frames.push(kernel.band.to_spectral(u));
        run.mass.push(m);
        run.energy.push(en);
        run.h1.push(h1(&kernel.band, u));
    };
    record(&mut run, kernel, t0, &u, &mut scratch);
    let h1_0 = run.h1[0];

    for step in 1..=steps {
        u = rk4_step(kernel, &u, h, &e, &e2);
        let t = t0 + step as f64 * h;
        if u.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteStep { t });
        }
        let growth = h1(&kernel.band, &u) / h1_0;
        if h1_0 > 0.0 && growth > opts.blowup_factor {
            return Err(Error::BlowUp { t, growth });
        }
        if step % opts.save_every == 0 || step == steps {
            record(&mut run, kernel, t, &u, &mut scratch);
        }
    }
    Ok(run)
}

/// One integrating-factor RK4 step of size `h` (either sign); `e = e^{ihω/2}`.
fn rk4_step(kernel: &mut Kernel, u: &[Complex64], h: f64, e: &[Complex64], e2: &[Complex64]) -> Coeffs {
    let k1 = kernel.zk(u);
    let ua: Coeffs = (0..u.len()).map(|j| e[j] * (u[j] + 0.5 * h * k1[j])).collect();
    let k2 = kernel.zk(&ua);
    let ub: Coeffs = (0..u.len()).map(|j| e[j] * u[j] + 0.5 * h * k2[j]).collect();
    let k3 = kernel.zk(&ub);
    let uc: Coeffs = (0..u.len()).map(|j| e2[j] * u[j] + h * e[j] * k3[j]).collect();
    let k4 = kernel.zk(&uc);
    (0..u.len()).map(|j| e2[j] * u[j] + h / 6.0 * (e2[j] * k1[j] + 2.0 * e[j] * (k2[j] + k3[j]) + k4[j])).collect()
}
