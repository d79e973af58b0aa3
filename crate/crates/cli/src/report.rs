//! The machine-readable run report.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use zk_core::propagator::DecayScanResult;

use crate::config::ExperimentConfig;

pub const SCHEMA: &str = "zk-report/1";

/// JSON schema of [`RunReport`].
pub const SCHEMA_JSON: &str = include_str!("../schema/zk-report-1.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `measured ≤ target + tolerance`.
    AtMost,
    /// `measured ≥ target − tolerance`.
    AtLeast,
    /// `|measured − target| ≤ tolerance`.
    Within,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub experiment: String,
    pub relation: Relation,
    pub target: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational checks do not affect the overall verdict.
    pub mandatory: bool,
}

impl CheckRecord {
    pub fn new(experiment: &str, name: &str, relation: Relation, target: f64, measured: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::AtMost => measured <= target + tolerance,
            Relation::AtLeast => measured >= target - tolerance,
            Relation::Within => (measured - target).abs() <= tolerance,
        };
        Self {
            name: name.into(),
            experiment: experiment.into(),
            relation,
            target,
            measured,
            tolerance,
            pass,
            mandatory: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.mandatory = false;
        self
    }
}

/// A decay scan as stored in the report and written to plot data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub name: String,
    pub norm: String,
    pub samples: Vec<(f64, f64)>,
    pub target_exponent: f64,
    pub fitted_exponent: f64,
    pub prefactor: f64,
    pub fit_window: (f64, f64),
    pub wrap_time: f64,
    pub residual: f64,
}

impl ScanRecord {
    pub fn from_scan(name: &str, s: &DecayScanResult) -> Self {
        Self {
            name: name.into(),
            norm: s.norm_spec.clone(),
            samples: s.samples.clone(),
            target_exponent: s.target_exponent,
            fitted_exponent: s.fitted_exponent,
            prefactor: s.prefactor,
            fit_window: s.fit_window,
            wrap_time: s.wrap_time,
            residual: s.residual,
        }
    }

    /// `C t^slope` of the fit.
    pub fn fit_line(&self, t: f64) -> f64 {
        self.prefactor * t.powf(self.fitted_exponent)
    }

    /// A line of the target slope through the fit at the window start.
    pub fn target_line(&self, t: f64) -> f64 {
        let t0 = self.fit_window.0.max(self.samples.first().map_or(1.0, |s| s.0));
        self.fit_line(t0) * (t / t0).powf(self.target_exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub timestamp: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub scans: Vec<ScanRecord>,
    /// Per-experiment details, keyed by experiment name.
    pub details: BTreeMap<String, serde_json::Value>,
    /// Numerical aborts; results gathered before an abort are kept.
    pub errors: Vec<String>,
    pub config: ExperimentConfig,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        Self {
            schema: SCHEMA.into(),
            command: command.into(),
            pass: true,
            checks: Vec::new(),
            scans: Vec::new(),
            details: BTreeMap::new(),
            errors: Vec::new(),
            config: config.clone(),
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION").into(),
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                seed: config.seed,
            },
        }
    }

    pub fn check(&mut self, c: CheckRecord) {
        self.checks.push(c);
        self.refresh();
    }

    pub fn refresh(&mut self) {
        self.pass = self.errors.is_empty() && self.checks.iter().filter(|c| c.mandatory).all(|c| c.pass);
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn scan(&self, name: &str) -> Option<&ScanRecord> {
        self.scans.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    /// The JSON with the timestamp blanked, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.provenance.timestamp.clear();
        r.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(CheckRecord::new("x", "a", Relation::AtMost, -1.0, -0.85, 0.2).pass);
        assert!(!CheckRecord::new("x", "a", Relation::AtMost, -1.0, -0.7, 0.2).pass);
        assert!(CheckRecord::new("x", "b", Relation::Within, 0.0, -0.01, 0.02).pass);
        assert!(!CheckRecord::new("x", "c", Relation::AtLeast, 19.0, 18.0, 0.0).pass);
        assert!(!CheckRecord::new("x", "d", Relation::AtMost, 0.0, f64::NAN, 1.0).pass);
    }

    #[test]
    fn informational_checks_do_not_fail_the_run() {
        let mut r = RunReport::new("t", &ExperimentConfig::default());
        r.check(CheckRecord::new("x", "a", Relation::AtMost, 0.0, 1.0, 0.0).informational());
        assert!(r.pass);
        r.check(CheckRecord::new("x", "b", Relation::AtMost, 0.0, 1.0, 0.0));
        assert!(!r.pass);
    }

    #[test]
    fn fit_and_target_lines() {
        let s = ScanRecord {
            name: "s".into(),
            norm: String::new(),
            samples: vec![(2.0, 1.0), (4.0, 0.5)],
            target_exponent: -2.0,
            fitted_exponent: -1.0,
            prefactor: 2.0,
            fit_window: (2.0, 4.0),
            wrap_time: 4.0,
            residual: 0.0,
        };
        assert_eq!(s.fit_line(4.0), 0.5);
        assert_eq!(s.target_line(2.0), 1.0);
        assert_eq!(s.target_line(4.0), 0.25);
    }
}
