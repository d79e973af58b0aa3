//! The `Z_T` norm: `sup_t t^α (‖w(t)‖_{H³} + ‖|∂1|^{ν/2} w‖_{L^p(t,T_max; W^{2,q})})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{strichartz_exponents, SolverConfig};
use crate::error::{invalid, Result};
use crate::spectral::band::Band;
use crate::trajectory::TrajectorySet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZNorm {
    pub value: f64,
    /// Time at which the discrete sup is attained.
    pub at: f64,
    pub h3_part: f64,
    pub strichartz_part: f64,
}

/// Evaluates `‖⟨∇⟩²|∂1|^{ν/2} w‖_{L^q}` for band coefficients.
pub(crate) struct Density {
    weight: Vec<f64>,
    q: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Density {
    pub fn new(band: &Band, nu: f64) -> Self {
        let (_, q) = strichartz_exponents(nu);
        let weight = band
            .xi
            .iter()
            .map(|x| (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * x[0].abs().powf(0.5 * nu))
            .collect();
        let n = band.grid.len();
        Self { weight, q, a: vec![0.0; n], b: vec![0.0; n] }
    }

    fn lq(&self, v: &[f64], h3: f64) -> f64 {
        let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        // Scaled by the max so |v|^q cannot underflow or overflow.
        let s: f64 = v.iter().map(|x| (x.abs() / m).powf(self.q)).sum();
        m * (h3 * s).powf(1.0 / self.q)
    }

    /// Densities of one or two fields with a single inverse transform.
    pub fn eval(&mut self, band: &mut Band, w: &[Complex64], other: Option<&[Complex64]>) -> (f64, Option<f64>) {
        let ga: Vec<Complex64> = w.iter().zip(&self.weight).map(|(c, k)| c * k).collect();
        let gb: Option<Vec<Complex64>> = other.map(|o| o.iter().zip(&self.weight).map(|(c, k)| c * k).collect());
        band.synthesize(&ga, gb.as_deref(), &mut self.a, gb.as_ref().map(|_| self.b.as_mut_slice()));
        let h3 = band.grid.cell_volume();
        (self.lq(&self.a, h3), gb.map(|_| self.lq(&self.b, h3)))
    }
}

/// `∫_{t_j}^{t_last} f` for every node of a uniform grid: composite Simpson
/// over pairs, with a one-interval quadratic rule for the odd leftover.
pub(crate) fn tail_integrals(times: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    let m = times.len();
    if m != f.len() {
        return Err(invalid("times", "length differs from values"));
    }
    let mut out = vec![0.0; m];
    if m < 2 {
        return Ok(out);
    }
    let h = times[1] - times[0];
    let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if !uniform || h <= 0.0 {
        return Err(invalid("times", "integration needs a uniform increasing grid"));
    }
    let last = m - 1;
    if m == 2 {
        out[0] = 0.5 * h * (f[0] + f[1]);
        return Ok(out);
    }
    for j in (0..last).rev() {
        out[j] = if (last - j).is_multiple_of(2) {
            out[j + 2] + h / 3.0 * (f[j] + 4.0 * f[j + 1] + f[j + 2])
        } else if j + 2 <= last {
            out[j + 1] + h / 12.0 * (5.0 * f[j] + 8.0 * f[j + 1] - f[j + 2])
        } else {
            out[j + 1] + h / 12.0 * (-f[j - 1] + 8.0 * f[j] + 5.0 * f[j + 1])
        };
    }
    Ok(out)
}

/// The discrete sup from per-time `H³` norms and Strichartz densities.
pub(crate) fn z_from_series(times: &[f64], h3: &[f64], density: &[f64], alpha: f64, nu: f64) -> Result<ZNorm> {
    let (p, _) = strichartz_exponents(nu);
    let powered: Vec<f64> = density.iter().map(|s| s.powf(p)).collect();
    let tails = tail_integrals(times, &powered)?;
    let mut best = ZNorm { value: 0.0, at: times[0], h3_part: 0.0, strichartz_part: 0.0 };
    for ((&t, &h), &i) in times.iter().zip(h3).zip(&tails) {
        let s = i.max(0.0).powf(1.0 / p);
        let v = t.powf(alpha) * (h + s);
        if v > best.value {
            best = ZNorm { value: v, at: t, h3_part: h, strichartz_part: s };
        }
    }
    Ok(best)
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu < 0.5) {
        return Err(invalid("nu", format!("must lie in (0, 1/2), got {nu}")));
    }
    Ok(())
}

fn frame_series(traj: &TrajectorySet, nu: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut band = Band::new(*traj.grid());
    let mut dens = Density::new(&band, nu);
    let mut h3 = Vec::with_capacity(traj.len());
    let mut s = Vec::with_capacity(traj.len());
    let zero = band.zeros();
    let mut i = 0;
    while i < traj.len() {
        let a = traj.w_band(i).unwrap_or(&zero);
        let b = (i + 1 < traj.len()).then(|| traj.w_band(i + 1).unwrap_or(&zero));
        let (da, db) = dens.eval(&mut band, a, b);
        h3.push(band.sobolev(a, 3.0));
        s.push(da);
        if let (Some(b), Some(db)) = (b, db) {
            h3.push(band.sobolev(b, 3.0));
            s.push(db);
        }
        i += 2;
    }
    Ok((h3, s))
}

/// `‖w‖_{Z_T}` over the stored frames, sup and time integral truncated at the last frame.
pub fn z_norm(traj: &TrajectorySet, cfg: &SolverConfig) -> Result<ZNorm> {
    check_nu(cfg.nu)?;
    if traj.is_empty() {
        return Err(invalid("trajectory", "no frames"));
    }
    let (h3, s) = frame_series(traj, cfg.nu)?;
    z_from_series(traj.times(), &h3, &s, cfg.alpha, cfg.nu)
}

/// `‖|∂1|^{ν/2} w‖_{L^p(t, t_last; W^{2,q})}` with `t` snapped to the nearest frame.
pub fn strichartz_norm(traj: &TrajectorySet, t: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if traj.is_empty() {
        return Err(invalid("trajectory", "no frames"));
    }
    let (p, _) = strichartz_exponents(nu);
    let (_, s) = frame_series(traj, nu)?;
    let powered: Vec<f64> = s.iter().map(|v| v.powf(p)).collect();
    let tails = tail_integrals(traj.times(), &powered)?;
    let j = traj
        .times()
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
        .map(|(j, _)| j)
        .expect("nonempty");
    Ok(tails[j].max(0.0).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_integrals_are_exact_for_cubics() {
        let times: Vec<f64> = (0..12).map(|j| 1.0 + 0.25 * j as f64).collect();
        let f = |t: f64| 2.0 * t * t * t - t + 3.0;
        let prim = |t: f64| 0.5 * t.powi(4) - 0.5 * t * t + 3.0 * t;
        let vals: Vec<f64> = times.iter().map(|&t| f(t)).collect();
        let got = tail_integrals(&times, &vals).unwrap();
        let end = *times.last().unwrap();
        for (j, &t) in times.iter().enumerate() {
            let want = prim(end) - prim(t);
            // The one-interval leftover rule is exact for quadratics only.
            let tol = if (times.len() - 1 - j).is_multiple_of(2) { 1e-12 } else { 1e-2 };
            assert!((got[j] - want).abs() <= tol * want.abs().max(1.0), "{j}: {} vs {want}", got[j]);
        }
    }

    #[test]
    fn tail_integrals_quadratic_exact() {
        let times: Vec<f64> = (0..7).map(|j| 0.5 * j as f64).collect();
        let vals: Vec<f64> = times.iter().map(|t| t * t).collect();
        let got = tail_integrals(&times, &vals).unwrap();
        for (j, &t) in times.iter().enumerate() {
            assert!((got[j] - (27.0 - t * t * t) / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_series_has_zero_norm() {
        let times = [5.0, 5.5, 6.0];
        let z = z_from_series(&times, &[0.0; 3], &[0.0; 3], 0.65, 0.3).unwrap();
        assert_eq!(z.value, 0.0);
    }

    fn trajectory(scale: f64) -> TrajectorySet {
        use crate::spectral::{to_spectral, Grid3, RealField};
        let grid = Grid3::new(16, 8.0 * std::f64::consts::PI).unwrap();
        let band = Band::new(grid);
        let mut traj = TrajectorySet::new(grid, band.zeros(), Default::default());
        for j in 0..5 {
            let t = 5.0 + 0.5 * j as f64;
            let f = RealField::from_fn(grid, |x| {
                scale * x[0] * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * t)).exp()
            });
            let w = band.restrict(&crate::spectral::dealias_two_thirds(&to_spectral(&f).unwrap()));
            traj.push(t, band.zeros(), Some(w));
        }
        traj
    }

    #[test]
    fn z_norm_is_homogeneous() {
        let cfg = SolverConfig::default();
        let a = z_norm(&trajectory(1.0), &cfg).unwrap().value;
        let b = z_norm(&trajectory(2.0), &cfg).unwrap().value;
        assert!(a > 0.0);
        assert!((b - 2.0 * a).abs() <= 1e-12 * b, "{a} {b}");
        let sa = strichartz_norm(&trajectory(1.0), 5.5, 0.3).unwrap();
        let sb = strichartz_norm(&trajectory(-3.0), 5.5, 0.3).unwrap();
        assert!((sb - 3.0 * sa).abs() <= 1e-12 * sb);
        assert!(strichartz_norm(&trajectory(1.0), 5.5, 0.5).is_err());
    }

    #[test]
    fn rejects_nonuniform_grid() {
        assert!(tail_integrals(&[0.0, 1.0, 3.0], &[1.0; 3]).is_err());
    }
}
