//! `B(f,g)(t) = ∂1 ∫_t^∞ V(t−τ)[(V(τ)f)(V(τ)g)] dτ` and `u₂ = −B(u₊,u₊)`.
//!
//! Everything runs on two-thirds-band coefficients. In the profile frame the
//! integrand is `F(τ) = e^{−iτω} P[(V(τ)f)(V(τ)g)]^`, and
//! `B̂(t) = iξ1 e^{itω} ∫_t^{t_max} F(τ) dτ`.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{QuadratureSpec, TailPolicy};
use crate::error::{invalid, Error, Result};
use crate::propagator::wrap_time;
use crate::spectral::band::{axpy, Band, Coeffs, ZERO};
use crate::spectral::{dealias_two_thirds, to_spectral, RealField, SpectralField};
use crate::trajectory::{TrajectoryMetadata, TrajectorySet};

/// Evaluates `F(τ)` for a list of pairs at shared times.
pub(crate) struct Integrand<'a> {
    band: &'a mut Band,
    pa: Vec<f64>,
    pb: Vec<f64>,
    prod: [Vec<f64>; 2],
}

fn key_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

impl<'a> Integrand<'a> {
    pub fn new(band: &'a mut Band) -> Self {
        let n = band.grid.len();
        Self { band, pa: vec![0.0; n], pb: vec![0.0; n], prod: [vec![0.0; n], vec![0.0; n]] }
    }

    /// `F(τ)` for each pair at one time. Each pair is put in a canonical
    /// order first, so swapping `f` and `g` gives bitwise identical output.
    pub fn at(&mut self, tau: f64, pairs: &[(&[Complex64], &[Complex64])]) -> Vec<Coeffs> {
        let ph = self.band.phases(tau);
        let mut out = Vec::with_capacity(pairs.len());
        let mut pending = 0usize;
        for (k, &(f, g)) in pairs.iter().enumerate() {
            let (f, g) = if key_cmp(g, f) == Ordering::Less { (g, f) } else { (f, g) };
            let a: Coeffs = f.iter().zip(&ph).map(|(x, p)| x * p).collect();
            let b: Coeffs = g.iter().zip(&ph).map(|(x, p)| x * p).collect();
            self.band.synthesize(&a, Some(&b), &mut self.pa, Some(&mut self.pb));
            for ((o, x), y) in self.prod[pending].iter_mut().zip(&self.pa).zip(&self.pb) {
                *o = x * y;
            }
            pending += 1;
            if pending == 2 || k + 1 == pairs.len() {
                let mut c0 = self.band.zeros();
                if pending == 2 {
                    let mut c1 = self.band.zeros();
                    let (p0, p1) = self.prod.split_at(1);
                    self.band.analyze(&p0[0], Some(&p1[0]), &mut c0, Some(&mut c1));
                    out.push(c0);
                    out.push(c1);
                } else {
                    self.band.analyze(&self.prod[0], None, &mut c0, None);
                    out.push(c0);
                }
                pending = 0;
            }
        }
        for c in &mut out {
            for (v, p) in c.iter_mut().zip(&ph) {
                *v *= p.conj();
            }
        }
        out
    }

    /// `F(τ)` for `f = g` at several times, two times per transform.
    pub fn square_at(&mut self, taus: &[f64], f: &[Complex64]) -> Vec<Coeffs> {
        let mut out = Vec::with_capacity(taus.len());
        for chunk in taus.chunks(2) {
            let phs: Vec<Coeffs> = chunk.iter().map(|&t| self.band.phases(t)).collect();
            let a: Coeffs = f.iter().zip(&phs[0]).map(|(x, p)| x * p).collect();
            if chunk.len() == 2 {
                let b: Coeffs = f.iter().zip(&phs[1]).map(|(x, p)| x * p).collect();
                self.band.synthesize(&a, Some(&b), &mut self.pa, Some(&mut self.pb));
                self.pa.iter_mut().for_each(|v| *v *= *v);
                self.pb.iter_mut().for_each(|v| *v *= *v);
                let mut c0 = self.band.zeros();
                let mut c1 = self.band.zeros();
                self.band.analyze(&self.pa, Some(&self.pb), &mut c0, Some(&mut c1));
                out.push(c0);
                out.push(c1);
            } else {
                self.band.synthesize(&a, None, &mut self.pa, None);
                self.pa.iter_mut().for_each(|v| *v *= *v);
                let mut c0 = self.band.zeros();
                self.band.analyze(&self.pa, None, &mut c0, None);
                out.push(c0);
            }
            let k0 = out.len() - chunk.len();
            for (c, ph) in out[k0..].iter_mut().zip(&phs) {
                for (v, p) in c.iter_mut().zip(ph) {
                    *v *= p.conj();
                }
            }
        }
        out
    }
}

/// `∫_t^{t_max} F(τ) dτ` for several pairs on the same nodes.
pub(crate) fn profile_integrals(
    band: &mut Band,
    pairs: &[(&[Complex64], &[Complex64])],
    nodes: &[(f64, f64)],
) -> Vec<Coeffs> {
    let mut acc: Vec<Coeffs> = pairs.iter().map(|_| band.zeros()).collect();
    let mut ig = Integrand::new(band);
    for &(tau, w) in nodes {
        for (a, v) in acc.iter_mut().zip(ig.at(tau, pairs)) {
            axpy(a, w, &v);
        }
    }
    acc
}

/// `iξ1 e^{itω} · c`, turning a profile integral into `B̂(t)`.
pub(crate) fn finish_b(band: &Band, t: f64, c: &mut [Complex64]) {
    for ((v, x), p) in c.iter_mut().zip(&band.xi).zip(band.phases(t)) {
        *v *= Complex64::new(0.0, x[0]) * p;
    }
}

pub(crate) fn tail_factor(t_max: f64, exponent: f64) -> f64 {
    t_max / (-exponent - 1.0)
}

#[derive(Clone, Debug)]
pub struct BilinearOutput {
    pub field: SpectralField,
    pub t: f64,
    pub t_max: f64,
    pub nodes: usize,
    /// `L²` size of the `∫_{t_max}^∞` contribution under the power-law model.
    pub tail_estimate: f64,
    pub tail_added: bool,
    /// Relative `L²` change under panel doubling, when requested.
    pub self_convergence: Option<f64>,
    pub warning: Option<String>,
}

fn resolve_horizon(quad: &QuadratureSpec, t: f64, data: &[&SpectralField]) -> f64 {
    let t_wrap = data.iter().map(|d| wrap_time(d, 0.9)).fold(f64::INFINITY, f64::min);
    quad.horizon.resolve(t, t_wrap)
}

/// `B(f,g)` at time `t`. Inputs are projected onto the two-thirds band first.
pub fn bilinear_b(f: &RealField, g: &RealField, t: f64, quad: &QuadratureSpec) -> Result<BilinearOutput> {
    bilinear_b_impl(f, g, t, quad, None)
}

/// As [`bilinear_b`], additionally comparing against doubled panels and
/// setting `warning` when the relative change exceeds `tolerance`.
pub fn bilinear_b_checked(
    f: &RealField,
    g: &RealField,
    t: f64,
    quad: &QuadratureSpec,
    tolerance: f64,
) -> Result<BilinearOutput> {
    bilinear_b_impl(f, g, t, quad, Some(tolerance))
}

fn bilinear_b_impl(
    f: &RealField,
    g: &RealField,
    t: f64,
    quad: &QuadratureSpec,
    check: Option<f64>,
) -> Result<BilinearOutput> {
    quad.validate()?;
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid("t", "must be positive"));
    }
    let mut band = Band::new(*f.grid());
    let fs = to_spectral(f)?;
    let gs = to_spectral(g)?;
    let t_max = resolve_horizon(quad, t, &[&fs, &gs]);
    if t >= t_max {
        return Err(Error::BeyondHorizon { t, t_max });
    }
    let fb = band.restrict(&dealias_two_thirds(&fs));
    let gb = band.restrict(&dealias_two_thirds(&gs));

    let run = |band: &mut Band, q: &QuadratureSpec| {
        let nodes = q.nodes(t, t_max);
        let c = profile_integrals(band, &[(&fb, &gb)], &nodes).pop().expect("one pair");
        (c, nodes.len())
    };
    let (mut c, nodes) = run(&mut band, quad);

    let mut tail = Integrand::new(&mut band).at(t_max, &[(&fb, &gb)]).pop().expect("one pair");
    let scale = tail_factor(t_max, quad.tail_exponent);
    let tail_added = if let TailPolicy::PowerLawExtrapolate { exponent } = quad.tail_policy {
        axpy(&mut c, tail_factor(t_max, exponent), &tail);
        true
    } else {
        false
    };
    finish_b(&band, t, &mut tail);
    let tail_estimate = scale * band.l2(&tail);

    let (mut self_convergence, mut warning) = (None, None);
    if let Some(tol) = check {
        let (mut c2, _) = run(&mut band, &quad.with_panels(2 * quad.panels));
        if tail_added {
            if let TailPolicy::PowerLawExtrapolate { exponent } = quad.tail_policy {
                let raw = Integrand::new(&mut band).at(t_max, &[(&fb, &gb)]).pop().expect("one pair");
                axpy(&mut c2, tail_factor(t_max, exponent), &raw);
            }
        }
        let diff: Coeffs = c.iter().zip(&c2).map(|(a, b)| a - b).collect();
        let rel = band.weighted_sq(&diff, |x| x[0] * x[0]).sqrt()
            / band.weighted_sq(&c2, |x| x[0] * x[0]).sqrt().max(f64::MIN_POSITIVE);
        self_convergence = Some(rel);
        if rel > tol {
            warning = Some(format!("panel doubling changed B by {rel:.3e} (> {tol:e})"));
        }
    }

    finish_b(&band, t, &mut c);
    Ok(BilinearOutput {
        field: band.to_spectral(&c),
        t,
        t_max,
        nodes,
        tail_estimate,
        tail_added,
        self_convergence,
        warning,
    })
}

/// Profile integrals `∫_{t_i}^{t_max} F(τ) dτ` for `f = g`, all times in one
/// backward sweep over a common horizon.
pub(crate) fn cumulative_square(
    band: &mut Band,
    f: &[Complex64],
    times: &[f64],
    t_max: f64,
    quad: &QuadratureSpec,
) -> Vec<Coeffs> {
    let edges = quad.panel_edges(times[0], t_max, times);
    let mut acc = band.zeros();
    let tol = 1e-12 * t_max.max(1.0);
    let mut out: Vec<Option<Coeffs>> = times.iter().map(|t| ((t - t_max).abs() <= tol).then(|| band.zeros())).collect();
    let mut ig = Integrand::new(band);
    let mut cached: Option<(f64, Coeffs)> = None;
    for e in edges.windows(2).rev() {
        let nodes = quad.panel_nodes(e[0], e[1]);
        let mut todo: Vec<f64> = Vec::new();
        for &(tau, _) in &nodes {
            if !matches!(&cached, Some((c, _)) if *c == tau) {
                todo.push(tau);
            }
        }
        let vals = ig.square_at(&todo, f);
        let mut it = vals.into_iter();
        let mut left = None;
        for &(tau, w) in &nodes {
            let v = match &cached {
                Some((c, v)) if *c == tau => v.clone(),
                _ => it.next().expect("value per node"),
            };
            axpy(&mut acc, w, &v);
            if tau == e[0] {
                left = Some(v);
            }
        }
        cached = left.map(|v| (e[0], v));
        for (i, &t) in times.iter().enumerate() {
            if (t - e[0]).abs() <= tol {
                out[i] = Some(acc.clone());
            }
        }
    }
    out.into_iter().map(|o| o.expect("every time is a panel edge")).collect()
}

/// `u₂(t) = −B(u₊,u₊)(t)` on a list of times sharing one horizon.
pub fn u2_series(u_plus: &RealField, times: &[f64], quad: &QuadratureSpec) -> Result<TrajectorySet> {
    quad.validate()?;
    if times.is_empty() {
        return Err(invalid("times", "empty"));
    }
    if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("times", "must be positive and strictly increasing"));
    }
    let mut band = Band::new(*u_plus.grid());
    let us = to_spectral(u_plus)?;
    let t_last = *times.last().expect("nonempty");
    let t_max = resolve_horizon(quad, t_last, &[&us]);
    if t_last >= t_max {
        return Err(Error::BeyondHorizon { t: t_last, t_max });
    }
    let ub = band.restrict(&dealias_two_thirds(&us));
    let mut ints = cumulative_square(&mut band, &ub, times, t_max, quad);

    let mut tail = Integrand::new(&mut band).square_at(&[t_max], &ub).pop().expect("one value");
    let tail_added = match quad.tail_policy {
        TailPolicy::PowerLawExtrapolate { exponent } => {
            for c in &mut ints {
                axpy(c, tail_factor(t_max, exponent), &tail);
            }
            true
        }
        TailPolicy::Drop => false,
    };
    finish_b(&band, t_max, &mut tail);
    // V(t) is unitary, so the estimate is the same for every time.
    let tail_estimate = tail_factor(t_max, quad.tail_exponent) * band.l2(&tail);

    let mut notes = vec![format!("common horizon t_max = {t_max}")];
    if tail_added {
        notes.push("power-law tail added".into());
    }
    let meta =
        TrajectoryMetadata { horizon: t_max, tail_estimates: vec![tail_estimate; times.len()], notes, solver: None };
    let mut traj = TrajectorySet::new(band.grid, ub, meta);
    for (c, &t) in ints.iter_mut().zip(times) {
        finish_b(&band, t, c);
        c.iter_mut().for_each(|v| *v = -*v);
        traj.push(t, std::mem::take(c), None);
    }
    Ok(traj)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeibnizCheck {
    pub name: String,
    pub lhs_norm: f64,
    /// `‖LHS − RHS‖₂ / ‖LHS‖₂`.
    pub discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub t: f64,
    pub t_max: f64,
    pub nodes: usize,
    pub checks: Vec<LeibnizCheck>,
}

impl LeibnizReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.discrepancy))
    }
}

/// Evaluates both sides of the product rules for `∇B`, `ΔB` and `Δ²B` on
/// identical nodes.
pub fn leibniz_checks(f: &RealField, g: &RealField, t: f64, quad: &QuadratureSpec) -> Result<LeibnizReport> {
    quad.validate()?;
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let mut band = Band::new(*f.grid());
    let fs = to_spectral(f)?;
    let gs = to_spectral(g)?;
    let t_max = resolve_horizon(quad, t, &[&fs, &gs]);
    if t >= t_max {
        return Err(Error::BeyondHorizon { t, t_max });
    }
    let fb = band.restrict(&dealias_two_thirds(&fs));
    let gb = band.restrict(&dealias_two_thirds(&gs));

    let i = Complex64::new(0.0, 1.0);
    let xi = band.xi.clone();
    let apply = |c: &[Complex64], m: &dyn Fn([f64; 3]) -> Complex64| -> Coeffs {
        c.iter().zip(&xi).map(|(v, x)| v * m(*x)).collect()
    };
    let n2 = |x: [f64; 3]| x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let d = |j: usize| move |x: [f64; 3]| i * x[j];
    let lap = move |x: [f64; 3]| Complex64::new(-n2(x), 0.0);
    let bilap = move |x: [f64; 3]| Complex64::new(n2(x) * n2(x), 0.0);

    // Operands of every B on the right-hand sides.
    let df: Vec<Coeffs> = (0..3).map(|j| apply(&fb, &d(j))).collect();
    let dg: Vec<Coeffs> = (0..3).map(|j| apply(&gb, &d(j))).collect();
    let lf = apply(&fb, &lap);
    let lg = apply(&gb, &lap);
    let bf = apply(&fb, &bilap);
    let bg = apply(&gb, &bilap);
    let dlf: Vec<Coeffs> = (0..3).map(|j| apply(&lf, &d(j))).collect();
    let dlg: Vec<Coeffs> = (0..3).map(|j| apply(&lg, &d(j))).collect();
    let ddf: Vec<Coeffs> = (0..9).map(|jk| apply(&df[jk / 3], &d(jk % 3))).collect();
    let ddg: Vec<Coeffs> = (0..9).map(|jk| apply(&dg[jk / 3], &d(jk % 3))).collect();

    let mut pairs: Vec<(&[Complex64], &[Complex64])> = vec![(&fb, &gb)];
    for j in 0..3 {
        pairs.push((&df[j], &gb));
        pairs.push((&fb, &dg[j]));
    }
    let k_lap = pairs.len();
    pairs.push((&lf, &gb));
    pairs.push((&fb, &lg));
    for j in 0..3 {
        pairs.push((&df[j], &dg[j]));
    }
    let k_bilap = pairs.len();
    pairs.push((&bf, &gb));
    pairs.push((&fb, &bg));
    pairs.push((&lf, &lg));
    for j in 0..3 {
        pairs.push((&dlf[j], &dg[j]));
        pairs.push((&df[j], &dlg[j]));
    }
    for jk in 0..9 {
        pairs.push((&ddf[jk], &ddg[jk]));
    }

    let nodes = quad.nodes(t, t_max);
    let mut b = profile_integrals(&mut band, &pairs, &nodes);
    for c in &mut b {
        finish_b(&band, t, c);
    }

    let rel = |lhs: &[Coeffs], rhs: &[Coeffs]| -> (f64, f64) {
        let (mut num, mut den) = (0.0, 0.0);
        for (l, r) in lhs.iter().zip(rhs) {
            let diff: Coeffs = l.iter().zip(r).map(|(a, b)| a - b).collect();
            num += band.weighted_sq(&diff, |_| 1.0);
            den += band.weighted_sq(l, |_| 1.0);
        }
        (den.sqrt(), (num / den).sqrt())
    };
    let sum = |terms: &[(f64, usize)]| -> Coeffs {
        let mut out = vec![ZERO; b[0].len()];
        for &(w, k) in terms {
            axpy(&mut out, w, &b[k]);
        }
        out
    };

    let mut checks = Vec::new();
    let grad_lhs: Vec<Coeffs> = (0..3).map(|j| apply(&b[0], &d(j))).collect();
    let grad_rhs: Vec<Coeffs> = (0..3).map(|j| sum(&[(1.0, 1 + 2 * j), (1.0, 2 + 2 * j)])).collect();
    let (lhs_norm, discrepancy) = rel(&grad_lhs, &grad_rhs);
    checks.push(LeibnizCheck { name: "gradient".into(), lhs_norm, discrepancy });

    let lap_lhs = apply(&b[0], &lap);
    let lap_rhs = sum(&[(1.0, k_lap), (1.0, k_lap + 1), (2.0, k_lap + 2), (2.0, k_lap + 3), (2.0, k_lap + 4)]);
    let (lhs_norm, discrepancy) = rel(&[lap_lhs], &[lap_rhs]);
    checks.push(LeibnizCheck { name: "laplacian".into(), lhs_norm, discrepancy });

    let bl_lhs = apply(&b[0], &bilap);
    let mut terms = vec![(1.0, k_bilap), (1.0, k_bilap + 1), (2.0, k_bilap + 2)];
    for k in 0..6 {
        terms.push((4.0, k_bilap + 3 + k));
    }
    for k in 0..9 {
        terms.push((4.0, k_bilap + 9 + k));
    }
    let (lhs_norm, discrepancy) = rel(&[bl_lhs], &[sum(&terms)]);
    checks.push(LeibnizCheck { name: "bilaplacian".into(), lhs_norm, discrepancy });

    Ok(LeibnizReport { t, t_max, nodes: nodes.len(), checks })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DuhamelResidual {
    pub t: f64,
    pub h: f64,
    pub t_max: f64,
    /// `‖L u₂ − ∂1 P(u₁²)‖₂ / ‖∂1 P(u₁²)‖₂`, with `∂t` a centered difference.
    pub relative: f64,
    pub forcing_norm: f64,
}

/// Checks `(∂t + ∂1Δ) u₂ = ∂1(u₁²)` at `t` using `u₂` at `t−h, t, t+h` from
/// one shared sweep.
pub fn duhamel_residual(u_plus: &RealField, t: f64, h: f64, quad: &QuadratureSpec) -> Result<DuhamelResidual> {
    if !(h > 0.0 && h < t) {
        return Err(invalid("h", "need 0 < h < t"));
    }
    let traj = u2_series(u_plus, &[t - h, t, t + h], quad)?;
    let mut band = Band::new(*u_plus.grid());
    let ub = band.restrict(&traj.u_plus_spectrum());
    let mut forcing = Integrand::new(&mut band).square_at(&[t], &ub).pop().expect("one value");
    finish_b(&band, t, &mut forcing);
    let (lo, mid, hi) = (traj.u2_band(0), traj.u2_band(1), traj.u2_band(2));
    let mut res = band.zeros();
    for (j, r) in res.iter_mut().enumerate() {
        let dt = (hi[j] - lo[j]) / (2.0 * h);
        *r = dt - Complex64::new(0.0, band.omega[j]) * mid[j] - forcing[j];
    }
    let forcing_norm = band.l2(&forcing);
    Ok(DuhamelResidual { t, h, t_max: traj.metadata.horizon, relative: band.l2(&res) / forcing_norm, forcing_norm })
}
