//! The remainder `w` on `[T, T_max]` with `w(T_max) = 0`.
//!
//! Everything is kept as band coefficients in the physical frame. `u₂` is
//! tabulated once at steps and midpoints, so both solvers evaluate `N`
//! only at those times and never interpolate `u₂`.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{SolveMode, SolverConfig};
use super::kernel::Kernel;
use super::norms::{z_from_series, Density, ZNorm};
use crate::duhamel::bilinear::{cumulative_square, finish_b, tail_factor, Integrand};
use crate::duhamel::quadrature::{Horizon, QuadratureSpec, TailPolicy};
use crate::error::{Error, Result};
use crate::spectral::band::Coeffs;
use crate::spectral::{dealias_two_thirds, to_spectral, RealField};
use crate::trajectory::{TrajectoryMetadata, TrajectorySet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepNorms {
    pub t: f64,
    pub w_h3: f64,
    pub u2_h3: f64,
    /// `‖u − V(t)u₊‖_{H³} = ‖w + u₂‖_{H³}`.
    pub remainder_h3: f64,
    pub w_l2: f64,
    /// `‖⟨∇⟩²|∂1|^{ν/2} w‖_{L^{2/ν}}`.
    pub strichartz_density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    pub iterations: usize,
    /// `Z_T` distance between successive iterates.
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub mode: SolveMode,
    pub dt: f64,
    pub steps: usize,
    /// Norms at every step, increasing in time.
    pub series: Vec<StepNorms>,
    pub z_norm: ZNorm,
    pub picard: Option<PicardReport>,
}

/// Precomputed `u₊` band data and the `u₂` table; one setup serves both modes.
pub struct ScatteringSetup {
    cfg: SolverConfig,
    kernel: Kernel,
    u_plus: Coeffs,
    /// `u₂(T + kΔ/2)`, `k = 0..=2M`.
    u2: Vec<Coeffs>,
    /// `e^{−iΔω/2}`.
    e: Coeffs,
    h3_weight: Vec<f64>,
    density: Density,
    tail_estimate: f64,
}

impl ScatteringSetup {
    pub fn new(u_plus: &RealField, cfg: &SolverConfig, quad: &QuadratureSpec) -> Result<Self> {
        cfg.validate()?;
        quad.validate()?;
        let mut kernel = Kernel::regularized(*u_plus.grid(), cfg.lambda, cfg.mu);
        let ub = kernel.band.restrict(&dealias_two_thirds(&to_spectral(u_plus)?));
        let m = cfg.steps();
        let half: Vec<f64> = (0..=2 * m).map(|k| cfg.t_start + 0.5 * cfg.dt * k as f64).collect();
        let table_quad = QuadratureSpec {
            panels: 2 * m,
            grading: 1.0,
            horizon: Horizon::Absolute { t_max: cfg.t_max },
            tail_policy: TailPolicy::Drop,
            ..*quad
        };
        let mut u2 = cumulative_square(&mut kernel.band, &ub, &half, cfg.t_max, &table_quad);
        for (c, &t) in u2.iter_mut().zip(&half) {
            finish_b(&kernel.band, t, c);
            c.iter_mut().for_each(|v| *v = -*v);
        }
        let mut tail = Integrand::new(&mut kernel.band).square_at(&[cfg.t_max], &ub).pop().expect("one value");
        finish_b(&kernel.band, cfg.t_max, &mut tail);
        let tail_estimate = tail_factor(cfg.t_max, quad.tail_exponent) * kernel.band.l2(&tail);

        let e = kernel.band.phases(-0.5 * cfg.dt);
        let h3_weight =
            kernel.band.xi.iter().map(|x| (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).powi(3)).collect();
        let density = Density::new(&kernel.band, cfg.nu);
        Ok(Self { cfg: cfg.clone(), kernel, u_plus: ub, u2, e, h3_weight, density, tail_estimate })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    fn u1(&self, t: f64) -> Coeffs {
        self.kernel.band.phases(t).iter().zip(&self.u_plus).map(|(p, c)| p * c).collect()
    }

    fn h3(&self, c: &[Complex64]) -> f64 {
        let s: f64 = c.iter().zip(&self.h3_weight).map(|(v, w)| w * v.norm_sqr()).sum();
        (self.kernel.band.grid.cell_volume() * s).sqrt()
    }

    fn norms(&mut self, j: usize, w: &[Complex64]) -> StepNorms {
        let (s, _) = self.density.eval(&mut self.kernel.band, w, None);
        self.norms_with(j, w, s)
    }

    fn norms_with(&self, j: usize, w: &[Complex64], s: f64) -> StepNorms {
        let u2 = &self.u2[2 * j];
        let sum: Coeffs = w.iter().zip(u2).map(|(a, b)| a + b).collect();
        StepNorms {
            t: self.cfg.time(j),
            w_h3: self.h3(w),
            u2_h3: self.h3(u2),
            remainder_h3: self.h3(&sum),
            w_l2: self.kernel.band.l2(w),
            strichartz_density: s,
        }
    }

    fn n_at(&mut self, k: usize, w: &[Complex64], u1: &[Complex64]) -> Coeffs {
        let t = self.cfg.t_start + 0.5 * self.cfg.dt * k as f64;
        let u2 = std::mem::take(&mut self.u2[k]);
        let out = self.kernel.n(t, w, u1, &u2);
        self.u2[k] = u2;
        out
    }

    fn frame_indices(&self) -> Vec<usize> {
        let m = self.cfg.steps();
        let mut idx: Vec<usize> = (0..=m).step_by(self.cfg.frame_every).collect();
        if idx.last() != Some(&m) {
            idx.push(m);
        }
        idx
    }

    fn finish(
        &mut self,
        mode: SolveMode,
        w_frames: Vec<(usize, Coeffs)>,
        mut series: Vec<StepNorms>,
        picard: Option<PicardReport>,
    ) -> Result<TrajectorySet> {
        series.sort_by(|a, b| a.t.total_cmp(&b.t));
        let times: Vec<f64> = series.iter().map(|s| s.t).collect();
        let h3: Vec<f64> = series.iter().map(|s| s.w_h3).collect();
        let dens: Vec<f64> = series.iter().map(|s| s.strichartz_density).collect();
        let z_norm = z_from_series(&times, &h3, &dens, self.cfg.alpha, self.cfg.nu)?;
        let frames = self.frame_indices();
        let mut notes = vec![
            format!("terminal condition w({}) = 0", self.cfg.t_max),
            "Z_T sup and time integral truncated at T_max".into(),
        ];
        if self.cfg.lambda > 0.0 || self.cfg.mu > 0.0 {
            notes.push(format!("regularized: lambda = {}, mu = {}", self.cfg.lambda, self.cfg.mu));
        }
        let meta = TrajectoryMetadata {
            horizon: self.cfg.t_max,
            tail_estimates: vec![self.tail_estimate; frames.len()],
            notes,
            solver: Some(SolverDiagnostics { mode, dt: self.cfg.dt, steps: self.cfg.steps(), series, z_norm, picard }),
        };
        let mut traj = TrajectorySet::new(self.kernel.band.grid, self.u_plus.clone(), meta);
        let mut w_frames = w_frames;
        w_frames.sort_by_key(|(j, _)| *j);
        for (j, w) in w_frames {
            traj.push(self.cfg.time(j), self.u2[2 * j].clone(), Some(w));
        }
        Ok(traj)
    }

    pub fn solve(&mut self, mode: SolveMode) -> Result<TrajectorySet> {
        match mode {
            SolveMode::BackwardIntegrate => self.backward(),
            SolveMode::Picard => self.picard(),
        }
    }

    /// Integrating-factor RK4 with step `h = −Δ`.
    fn backward(&mut self) -> Result<TrajectorySet> {
        let m = self.cfg.steps();
        let dt = self.cfg.dt;
        let h = -dt;
        let frames = self.frame_indices();
        let e = self.e.clone();
        let e2: Coeffs = e.iter().map(|z| z * z).collect();
        let n = e.len();

        let mut w = self.kernel.band.zeros();
        let mut series = vec![self.norms(m, &w)];
        let mut w_frames = vec![(m, w.clone())];
        let mut u1_1 = self.u1(self.cfg.time(m));
        for j in (0..m).rev() {
            let u1_h = self.u1(self.cfg.time(j) + 0.5 * dt);
            let u1_0 = self.u1(self.cfg.time(j));
            let k1 = self.n_at(2 * j + 2, &w, &u1_1);
            let wa: Coeffs = (0..n).map(|i| e[i] * (w[i] + 0.5 * h * k1[i])).collect();
            let k2 = self.n_at(2 * j + 1, &wa, &u1_h);
            let wb: Coeffs = (0..n).map(|i| e[i] * w[i] + 0.5 * h * k2[i]).collect();
            let k3 = self.n_at(2 * j + 1, &wb, &u1_h);
            let wc: Coeffs = (0..n).map(|i| e2[i] * w[i] + h * e[i] * k3[i]).collect();
            let k4 = self.n_at(2 * j, &wc, &u1_0);
            w = (0..n)
                .map(|i| e2[i] * w[i] + h / 6.0 * (e2[i] * k1[i] + 2.0 * e[i] * (k2[i] + k3[i]) + k4[i]))
                .collect();
            if w.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                return Err(Error::NonFiniteStep { t: self.cfg.time(j) });
            }
            series.push(self.norms(j, &w));
            if frames.binary_search(&j).is_ok() {
                w_frames.push((j, w.clone()));
            }
            u1_1 = u1_0;
        }
        self.finish(SolveMode::BackwardIntegrate, w_frames, series, None)
    }

    /// `w_k` at the midpoint `t_j + Δ/2` by cubic interpolation in the profile frame.
    fn midpoint(&self, old: &[Coeffs], j: usize, pow: &[Coeffs; 6]) -> Coeffs {
        let m = old.len() - 1;
        let (base, weights): (usize, [f64; 4]) = if m < 3 {
            // Too few steps for a cubic; fall back to the average.
            let mut w = [0.0; 4];
            w[0] = 0.5;
            w[1] = 0.5;
            (j, w)
        } else if j == 0 {
            (0, [0.3125, 0.9375, -0.3125, 0.0625])
        } else if j + 2 > m {
            (j - 2, [0.0625, -0.3125, 0.9375, 0.3125])
        } else {
            (j - 1, [-0.0625, 0.5625, 0.5625, -0.0625])
        };
        let mut out = self.kernel.band.zeros();
        for (r, &c) in weights.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let idx = base + r;
            // The phase taking offset o = idx − j back to the midpoint is E^{2o−1}.
            let p = &pow[(2 * idx as i64 - 2 * j as i64 - 1 + 5) as usize / 2];
            for ((o, v), ph) in out.iter_mut().zip(&old[idx]).zip(p) {
                *o += c * ph * v;
            }
        }
        out
    }

    fn picard(&mut self) -> Result<TrajectorySet> {
        let m = self.cfg.steps();
        let dt = self.cfg.dt;
        let frames = self.frame_indices();
        let e = self.e.clone();
        let e2: Coeffs = e.iter().map(|z| z * z).collect();
        let inv = |p: &Coeffs| -> Coeffs { p.iter().map(|z| z.conj()).collect() };
        let e3: Coeffs = e2.iter().zip(&e).map(|(a, b)| a * b).collect();
        let e5: Coeffs = e3.iter().zip(&e2).map(|(a, b)| a * b).collect();
        // Powers E^{-5}, E^{-3}, E^{-1}, E, E³, E⁵ for offsets −2..=3.
        let pow = [inv(&e5), inv(&e3), inv(&e), e.clone(), e3, e5];
        let n = e.len();

        let mut old: Vec<Coeffs> = (0..=m).map(|_| self.kernel.band.zeros()).collect();
        let mut report = PicardReport { iterations: 0, distances: Vec::new(), ratios: Vec::new(), converged: false };
        let mut series;
        let mut rising = 0;
        loop {
            report.iterations += 1;
            let mut diff_series = Vec::with_capacity(m + 1);
            series = Vec::with_capacity(m + 1);
            let mut pending: VecDeque<(usize, Coeffs)> = VecDeque::new();
            let mut next = self.kernel.band.zeros();
            let u1_end = self.u1(self.cfg.time(m));
            let mut n1 = self.n_at(2 * m, &old[m], &u1_end);
            let (norms, diff) = self.norms_and_diff(m, &next, &old[m]);
            series.push(norms);
            diff_series.push(diff);
            pending.push_back((m, next.clone()));
            for j in (0..m).rev() {
                let wm = self.midpoint(&old, j, &pow);
                let nh = self.n_at(2 * j + 1, &wm, &self.u1(self.cfg.time(j) + 0.5 * dt));
                let n0 = self.n_at(2 * j, &old[j].clone(), &self.u1(self.cfg.time(j)));
                next =
                    (0..n).map(|i| e2[i] * next[i] - dt / 6.0 * (n0[i] + 4.0 * e[i] * nh[i] + e2[i] * n1[i])).collect();
                if next.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                    return Err(Error::NonFiniteStep { t: self.cfg.time(j) });
                }
                let (norms, diff) = self.norms_and_diff(j, &next, &old[j]);
                series.push(norms);
                diff_series.push(diff);
                n1 = n0;
                pending.push_back((j, next.clone()));
                // Old values above j+2 are no longer read by the interpolation.
                while pending.front().is_some_and(|(k, _)| *k >= j + 3) {
                    let (k, v) = pending.pop_front().expect("front exists");
                    old[k] = v;
                }
            }
            for (k, v) in pending {
                old[k] = v;
            }

            diff_series.sort_by(|a, b| a.0.total_cmp(&b.0));
            let times: Vec<f64> = diff_series.iter().map(|d| d.0).collect();
            let h3: Vec<f64> = diff_series.iter().map(|d| d.1).collect();
            let dens: Vec<f64> = diff_series.iter().map(|d| d.2).collect();
            let d = z_from_series(&times, &h3, &dens, self.cfg.alpha, self.cfg.nu)?.value;
            if let Some(&prev) = report.distances.last() {
                let r = if prev > 0.0 { d / prev } else { 0.0 };
                report.ratios.push(r);
                rising = if r >= 1.0 { rising + 1 } else { 0 };
            }
            report.distances.push(d);
            if d < self.cfg.picard_tol {
                report.converged = true;
                break;
            }
            if rising >= 3 {
                return Err(Error::PicardDivergence { ratios: report.ratios });
            }
            if report.iterations >= self.cfg.picard_max_iter {
                break;
            }
        }
        let w_frames = frames.iter().map(|&j| (j, old[j].clone())).collect();
        self.finish(SolveMode::Picard, w_frames, series, Some(report))
    }

    /// Norms of the new iterate and `(t, ‖d‖_{H³}, density of d)` for the
    /// difference `d` from the old one, sharing one transform.
    fn norms_and_diff(&mut self, j: usize, new: &[Complex64], old: &[Complex64]) -> (StepNorms, (f64, f64, f64)) {
        let d: Coeffs = new.iter().zip(old).map(|(x, y)| x - y).collect();
        let (s, sd) = self.density.eval(&mut self.kernel.band, new, Some(&d));
        let sd = sd.expect("two fields in, two densities out");
        (self.norms_with(j, new, s), (self.cfg.time(j), self.h3(&d), sd))
    }
}

pub fn construct_w(u_plus: &RealField, cfg: &SolverConfig, quad: &QuadratureSpec) -> Result<TrajectorySet> {
    ScatteringSetup::new(u_plus, cfg, quad)?.solve(cfg.mode)
}
