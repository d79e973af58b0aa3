use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    /// Integrating-factor RK4 backward from `w(T_max) = 0`.
    BackwardIntegrate,
    /// Fixed-point iteration of the Duhamel map from `w₀ = 0`.
    Picard,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Start of the window, `T`.
    pub t_start: f64,
    /// Terminal time; `w(T_max) = 0` stands in for `w → 0` as `t → ∞`.
    pub t_max: f64,
    pub dt: f64,
    pub delta: f64,
    pub nu: f64,
    pub alpha: f64,
    /// Time-decay regularization `(1+λt)^{-5}`; 0 disables.
    pub lambda: f64,
    /// Mollifier width; 0 disables.
    pub mu: f64,
    pub mode: SolveMode,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Store one trajectory frame every this many steps.
    pub frame_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_start: 5.0,
            t_max: 60.0,
            dt: 0.25,
            delta: 0.5,
            nu: 0.3,
            alpha: 0.65,
            lambda: 0.0,
            mu: 0.0,
            mode: SolveMode::BackwardIntegrate,
            picard_tol: 1e-10,
            picard_max_iter: 30,
            frame_every: 2,
        }
    }
}

impl SolverConfig {
    /// Number of steps of size `dt` in `[T, T_max]`.
    pub fn steps(&self) -> usize {
        ((self.t_max - self.t_start) / self.dt).round() as usize
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t_start + j as f64 * self.dt
    }

    pub fn validate(&self) -> Result<()> {
        let finite =
            [self.t_start, self.t_max, self.dt, self.delta, self.nu, self.alpha, self.lambda, self.mu, self.picard_tol];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(invalid("physics", "all parameters must be finite"));
        }
        if self.t_start <= 0.0 {
            return Err(invalid("physics.T", "must be positive"));
        }
        if self.t_max <= self.t_start {
            return Err(invalid("physics.T_max", format!("must exceed T = {}, got {}", self.t_start, self.t_max)));
        }
        if self.dt <= 0.0 {
            return Err(invalid("physics.dt", "must be positive"));
        }
        let ratio = (self.t_max - self.t_start) / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 2.0 {
            return Err(invalid(
                "physics.dt",
                format!("must divide T_max - T into at least two steps (ratio {ratio})"),
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid("physics.delta", "must lie in (0, 1)"));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(invalid("physics.nu", "must lie in (0, 1/2)"));
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return Err(invalid("physics.alpha", "must lie in (1/2, 1)"));
        }
        if self.alpha <= self.nu / 3.0 + 0.5 {
            return Err(invalid("physics.alpha", format!("must exceed nu/3 + 1/2 = {}", self.nu / 3.0 + 0.5)));
        }
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(invalid("physics.lambda", "must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return Err(invalid("physics.mu", "must lie in [0, 1)"));
        }
        if self.picard_tol <= 0.0 {
            return Err(invalid("physics.picard_tol", "must be positive"));
        }
        if self.picard_max_iter == 0 {
            return Err(invalid("physics.picard_max_iter", "must be at least 1"));
        }
        if self.frame_every == 0 {
            return Err(invalid("physics.frame_every", "must be at least 1"));
        }
        Ok(())
    }

    /// Strichartz exponents `(p, q) = (6/(3−2ν), 2/ν)`.
    pub fn strichartz_exponents(&self) -> (f64, f64) {
        strichartz_exponents(self.nu)
    }
}

pub fn strichartz_exponents(nu: f64) -> (f64, f64) {
    (6.0 / (3.0 - 2.0 * nu), 2.0 / nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = SolverConfig::default();
        c.validate().unwrap();
        assert_eq!(c.steps(), 220);
    }

    #[test]
    fn invariants_are_enforced() {
        let bad = |f: fn(&mut SolverConfig)| {
            let mut c = SolverConfig::default();
            f(&mut c);
            c.validate().unwrap_err().to_string()
        };
        assert!(bad(|c| c.t_max = 4.0).contains("T_max"));
        assert!(bad(|c| c.dt = 0.3).contains("dt"));
        assert!(bad(|c| c.t_max = 4.0).contains("physics.T_max"));
        assert!(bad(|c| c.alpha = 0.55).contains("alpha"));
        assert!(bad(|c| c.nu = 0.5).contains("nu"));
        assert!(bad(|c| c.mu = 1.0).contains("mu"));
    }

    #[test]
    fn exponents_from_nu() {
        let (p, q) = strichartz_exponents(0.3);
        assert!((p - 2.5).abs() < 1e-15);
        assert!((q - 20.0 / 3.0).abs() < 1e-15);
    }
}
