//! The experiment configuration file.
//!
//! Every section is optional; missing keys take the values in
//! `defaults.toml`, which is kept identical to [`ExperimentConfig::default`].

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zk_core::data::FinalData;
use zk_core::duhamel::{Horizon, QuadratureRule, QuadratureSpec, TailPolicy};
use zk_core::propagator::{FitWindow, ScanSettings, TimeSampling};
use zk_core::scattering::{SolveMode, SolverConfig};
use zk_core::spectral::{Grid3, Guard};

/// The stock configuration, with comments.
pub const DEFAULTS_TOML: &str = include_str!("../defaults.toml");

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    /// Dotted key path, e.g. `physics.T_max`.
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self { path: path.into(), message: message.to_string() }
    }

    /// Maps a core parameter error onto the config tree. Core errors name
    /// `data.*` for whichever data block they were given; `prefix` places
    /// them under the right section.
    pub fn from_core(err: zk_core::Error, prefix: &str) -> Self {
        match err {
            zk_core::Error::InvalidParameter { name, reason } => {
                let path = match name.strip_prefix("data") {
                    Some(rest) if !prefix.is_empty() => format!("{prefix}{rest}"),
                    _ => name.to_string(),
                };
                Self::new(path, reason)
            }
            other => Self::new(prefix, other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub grid: GridConfig,
    /// Final data of the scattering run.
    pub data: FinalData,
    pub physics: PhysicsConfig,
    pub quadrature: QuadratureConfig,
    pub scan: ScanConfig,
    pub algebra: AlgebraConfig,
    pub linear: LinearConfig,
    pub kpv: KpvConfig,
    pub bilinear: BilinearConfig,
    pub conserve: ConserveConfig,
    pub scatter: ScatterConfig,
    pub gates: Gates,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            output_dir: PathBuf::from("zk-out"),
            grid: GridConfig::default(),
            data: FinalData::gaussian_x1_derivative(0.1, 2.5),
            physics: PhysicsConfig::default(),
            quadrature: QuadratureConfig::default(),
            scan: ScanConfig::default(),
            algebra: AlgebraConfig::default(),
            linear: LinearConfig::default(),
            kpv: KpvConfig::default(),
            bilinear: BilinearConfig::default(),
            conserve: ConserveConfig::default(),
            scatter: ScatterConfig::default(),
            gates: Gates::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 64, length: 32.0 * PI }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    pub delta: f64,
    pub nu: f64,
    pub alpha: f64,
    #[serde(rename = "T")]
    pub t_start: f64,
    #[serde(rename = "T_max")]
    pub t_max: f64,
    pub dt: f64,
    pub lambda: f64,
    pub mu: f64,
    pub mode: SolveMode,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub frame_every: usize,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            delta: s.delta,
            nu: s.nu,
            alpha: s.alpha,
            t_start: s.t_start,
            t_max: s.t_max,
            dt: s.dt,
            lambda: s.lambda,
            mu: s.mu,
            mode: s.mode,
            picard_tol: s.picard_tol,
            picard_max_iter: s.picard_max_iter,
            frame_every: s.frame_every,
        }
    }
}

impl PhysicsConfig {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            t_start: self.t_start,
            t_max: self.t_max,
            dt: self.dt,
            delta: self.delta,
            nu: self.nu,
            alpha: self.alpha,
            lambda: self.lambda,
            mu: self.mu,
            mode: self.mode,
            picard_tol: self.picard_tol,
            picard_max_iter: self.picard_max_iter,
            frame_every: self.frame_every,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rule: QuadratureRule,
    pub panels: usize,
    pub grading: f64,
    /// Horizon `t_max_factor · t`.
    pub t_max_factor: f64,
    /// Caps the horizon at `wrap_cap · t_wrap`; 0 disables the cap.
    pub wrap_cap: f64,
    pub tail_policy: TailPolicy,
    pub tail_exponent: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        let (factor, cap) = match q.horizon {
            Horizon::Relative { factor, wrap_cap } => (factor, wrap_cap.unwrap_or(0.0)),
            Horizon::Absolute { .. } => unreachable!("the stock horizon is relative"),
        };
        Self {
            rule: q.rule,
            panels: q.panels,
            grading: q.grading,
            t_max_factor: factor,
            wrap_cap: cap,
            tail_policy: q.tail_policy,
            tail_exponent: q.tail_exponent,
        }
    }
}

impl QuadratureConfig {
    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rule: self.rule,
            panels: self.panels,
            grading: self.grading,
            horizon: Horizon::Relative {
                factor: self.t_max_factor,
                wrap_cap: (self.wrap_cap != 0.0).then_some(self.wrap_cap),
            },
            tail_policy: self.tail_policy,
            tail_exponent: self.tail_exponent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub times: TimeSampling,
    pub fit_window: FitWindow,
    pub wrap_mass_fraction: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        let s = ScanSettings::default();
        Self { times: s.times, fit_window: s.window, wrap_mass_fraction: s.wrap_mass_fraction }
    }
}

impl ScanConfig {
    pub fn settings(&self) -> ScanSettings {
        ScanSettings {
            times: self.times.clone(),
            window: self.fit_window.clone(),
            wrap_mass_fraction: self.wrap_mass_fraction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgebraConfig {
    pub bound_samples: usize,
    pub float_points: usize,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        Self { bound_samples: 2000, float_points: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearConfig {
    pub data: FinalData,
    pub a: f64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        Self { data: FinalData::gaussian_x1_derivative(1.0, 1.0), a: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KpvConfig {
    pub data: FinalData,
    /// Relative width of the cone band removed by the projection.
    pub band: f64,
}

impl Default for KpvConfig {
    fn default() -> Self {
        Self { data: FinalData::gaussian_x1_derivative(1.0, 1.0), band: zk_core::propagator::KPV_BAND }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BilinearConfig {
    /// Data of the `u₂` and `u₁` decay scans.
    pub data: FinalData,
    pub guard: Guard,
    /// Time of the bilinearity check `u₂[2u₊] = 4 u₂[u₊]`.
    pub scaling_t: f64,
    pub residual_data: FinalData,
    pub residual_t: f64,
    /// Centered-difference step of the residual check.
    pub residual_h: f64,
    pub leibniz_t: f64,
    pub leibniz_t_max: f64,
    pub leibniz_panels: usize,
}

impl Default for BilinearConfig {
    fn default() -> Self {
        Self {
            data: FinalData::gaussian_x1_derivative(1.0, 1.0),
            guard: Guard::ZeroSetToZero,
            scaling_t: 3.0,
            residual_data: FinalData::gaussian_x1_derivative(1.0, 2.0),
            residual_t: 5.0,
            residual_h: 0.01,
            leibniz_t: 5.0,
            leibniz_t_max: 12.0,
            leibniz_panels: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConserveConfig {
    pub data: FinalData,
    pub t1: f64,
    pub dt: f64,
}

impl Default for ConserveConfig {
    fn default() -> Self {
        Self { data: FinalData::gaussian(1.0, 2.0), t1: 10.0, dt: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatterConfig {
    /// Also solve with the other mode and compare `w(T)`.
    pub cross_check: bool,
    pub residual_span: f64,
    pub fit_window: FitWindow,
    /// Write `u` and `w` snapshots every this many stored frames; 0 disables.
    pub snapshot_every: usize,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            cross_check: true,
            residual_span: 5.0,
            fit_window: FitWindow::WrapRelative { lo: 0.0, hi: 1.0 },
            snapshot_every: 10,
        }
    }
}

/// Pass/fail thresholds. Slope tolerances are added to the target exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Gates {
    pub float_bridge: f64,
    pub linear_slope_tol: f64,
    pub flat_slope_tol: f64,
    pub kpv_slope_tol: f64,
    pub bilinear_slope_tol: f64,
    pub constant_spread: f64,
    pub bilinearity: f64,
    pub u1_slope_tol: f64,
    pub leibniz: f64,
    pub duhamel_residual: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub forward_residual: f64,
    pub scatter_slope_tol: f64,
    pub mode_agreement: f64,
}

impl Default for Gates {
    fn default() -> Self {
        Self {
            float_bridge: 1e-9,
            linear_slope_tol: 0.2,
            flat_slope_tol: 0.02,
            kpv_slope_tol: 0.3,
            bilinear_slope_tol: 0.2,
            constant_spread: 3.0,
            bilinearity: 1e-10,
            u1_slope_tol: 0.2,
            leibniz: 1e-9,
            duhamel_residual: 1e-4,
            mass_drift: 1e-10,
            energy_drift: 1e-8,
            forward_residual: 1e-4,
            scatter_slope_tol: 0.15,
            mode_agreement: 1e-4,
        }
    }
}

impl ExperimentConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            // toml reports the position; the path is what we add.
            ConfigError::new(if path == "." { "<root>".into() } else { path }, inner.message().trim())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn grid(&self) -> Grid3 {
        Grid3::new(self.grid.n, self.grid.length).expect("validated")
    }

    /// Re-checks every module-level invariant, naming the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        Grid3::new(self.grid.n, self.grid.length).map_err(|e| ConfigError::from_core(e, ""))?;
        self.data.validate().map_err(|e| ConfigError::from_core(e, "data"))?;
        self.physics.solver().validate().map_err(|e| ConfigError::from_core(e, ""))?;
        self.quadrature.spec().validate().map_err(|e| ConfigError::from_core(e, ""))?;
        if self.quadrature.wrap_cap.is_nan() || self.quadrature.wrap_cap < 0.0 {
            return Err(ConfigError::new("quadrature.wrap_cap", "must be positive, or 0 for no cap"));
        }
        self.scan.settings().validate().map_err(|e| ConfigError::from_core(e, ""))?;
        if let TimeSampling::Explicit { .. } = self.scan.times {
            self.scan.times.resolve(f64::INFINITY).map_err(|e| ConfigError::from_core(e, ""))?;
        }
        check_window(&self.scan.fit_window, "scan.fit_window")?;
        check_window(&self.scatter.fit_window, "scatter.fit_window")?;

        if self.algebra.bound_samples == 0 {
            return Err(ConfigError::new("algebra.bound_samples", "must be positive"));
        }
        if self.algebra.float_points == 0 {
            return Err(ConfigError::new("algebra.float_points", "must be positive"));
        }
        self.linear.data.validate().map_err(|e| ConfigError::from_core(e, "linear.data"))?;
        if !(self.linear.a > 0.0 && self.linear.a < 1.0) {
            return Err(ConfigError::new("linear.a", "must lie in (0, 1)"));
        }
        self.kpv.data.validate().map_err(|e| ConfigError::from_core(e, "kpv.data"))?;
        if !(self.kpv.band >= 0.0 && self.kpv.band < 1.0) {
            return Err(ConfigError::new("kpv.band", "must lie in [0, 1)"));
        }
        let b = &self.bilinear;
        b.data.validate().map_err(|e| ConfigError::from_core(e, "bilinear.data"))?;
        b.residual_data.validate().map_err(|e| ConfigError::from_core(e, "bilinear.residual_data"))?;
        if let Guard::EpsilonFloor { eps_rel } = b.guard {
            if !(eps_rel > 0.0 && eps_rel < 1.0) {
                return Err(ConfigError::new("bilinear.guard.eps_rel", "must lie in (0, 1)"));
            }
        }
        positive("bilinear.scaling_t", b.scaling_t)?;
        positive("bilinear.residual_t", b.residual_t)?;
        positive("bilinear.residual_h", b.residual_h)?;
        if b.residual_h >= b.residual_t {
            return Err(ConfigError::new("bilinear.residual_h", "must be below residual_t"));
        }
        positive("bilinear.leibniz_t", b.leibniz_t)?;
        if b.leibniz_t_max.is_nan() || b.leibniz_t_max <= b.leibniz_t {
            return Err(ConfigError::new("bilinear.leibniz_t_max", "must exceed leibniz_t"));
        }
        if b.leibniz_panels < 2 {
            return Err(ConfigError::new("bilinear.leibniz_panels", "must be at least 2"));
        }
        self.conserve.data.validate().map_err(|e| ConfigError::from_core(e, "conserve.data"))?;
        positive("conserve.t1", self.conserve.t1)?;
        positive("conserve.dt", self.conserve.dt)?;
        positive("scatter.residual_span", self.scatter.residual_span)?;

        let g = &self.gates;
        for (name, v) in [
            ("float_bridge", g.float_bridge),
            ("linear_slope_tol", g.linear_slope_tol),
            ("flat_slope_tol", g.flat_slope_tol),
            ("kpv_slope_tol", g.kpv_slope_tol),
            ("bilinear_slope_tol", g.bilinear_slope_tol),
            ("constant_spread", g.constant_spread),
            ("bilinearity", g.bilinearity),
            ("u1_slope_tol", g.u1_slope_tol),
            ("leibniz", g.leibniz),
            ("duhamel_residual", g.duhamel_residual),
            ("mass_drift", g.mass_drift),
            ("energy_drift", g.energy_drift),
            ("forward_residual", g.forward_residual),
            ("scatter_slope_tol", g.scatter_slope_tol),
            ("mode_agreement", g.mode_agreement),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::new(format!("gates.{name}"), "must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::new(path, format!("must be positive and finite, got {v}")))
    }
}

fn check_window(w: &FitWindow, path: &str) -> Result<(), ConfigError> {
    let (a, b) = match w {
        FitWindow::Explicit { t0, t1 } => (*t0, *t1),
        FitWindow::WrapRelative { lo, hi } => (*lo, *hi),
    };
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < b) {
        return Err(ConfigError::new(path, format!("need 0 <= start < end, got [{a}, {b}]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_matches_defaults() {
        let parsed = ExperimentConfig::from_toml_str(DEFAULTS_TOML).unwrap();
        assert_eq!(parsed, ExperimentConfig::default());
    }

    #[test]
    fn empty_file_is_the_default() {
        assert_eq!(ExperimentConfig::from_toml_str("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn errors_carry_the_key_path() {
        let e = ExperimentConfig::from_toml_str("[physics]\nT = 5.0\nT_max = 4.0\n").unwrap_err();
        assert_eq!(e.path, "physics.T_max");
        let e = ExperimentConfig::from_toml_str("[grid]\nn = 7\n").unwrap_err();
        assert_eq!(e.path, "grid.n");
        let e = ExperimentConfig::from_toml_str("[physics]\ndleta = 0.5\n").unwrap_err();
        assert!(e.path.starts_with("physics"), "{e}");
        let e = ExperimentConfig::from_toml_str("[gates]\nleibniz = \"tight\"\n").unwrap_err();
        assert_eq!(e.path, "gates.leibniz");
        let e = ExperimentConfig::from_toml_str("[linear.data]\nkind = \"gaussian\"\namplitude = 1.0\nsigma = -1.0\n")
            .unwrap_err();
        assert_eq!(e.path, "linear.data.sigma");
        let e = ExperimentConfig::from_toml_str("[bilinear]\nleibniz_panels = 1\n").unwrap_err();
        assert_eq!(e.path, "bilinear.leibniz_panels");
    }

    #[test]
    fn physics_maps_onto_the_solver() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.physics.solver(), SolverConfig::default());
        assert_eq!(cfg.quadrature.spec(), QuadratureSpec::default());
        assert_eq!(cfg.scan.settings(), ScanSettings::default());
    }
}
