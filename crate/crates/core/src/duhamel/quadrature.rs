//! Time quadrature for integrals `∫_t^∞` truncated at a finite horizon.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    CompositeSimpson,
    /// Four-point Gauss-Legendre on each panel.
    GaussLegendrePanels,
}

/// What to do with `∫_{t_max}^∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailPolicy {
    Drop,
    /// Add the tail of a non-oscillating integrand `∝ τ^exponent`.
    PowerLawExtrapolate {
        exponent: f64,
    },
}

/// Where the truncated integral stops.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Horizon {
    Absolute {
        t_max: f64,
    },
    /// `factor · t`, capped at `wrap_cap · t_wrap` when a cap is given.
    Relative {
        factor: f64,
        wrap_cap: Option<f64>,
    },
}

impl Horizon {
    pub fn resolve(&self, t: f64, t_wrap: f64) -> f64 {
        match *self {
            Horizon::Absolute { t_max } => t_max,
            Horizon::Relative { factor, wrap_cap } => {
                let h = factor * t;
                match wrap_cap {
                    Some(c) if t_wrap.is_finite() => h.min(c * t_wrap),
                    _ => h,
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub panels: usize,
    /// Ratio of consecutive panel widths; panels are finest at the lower limit.
    pub grading: f64,
    pub horizon: Horizon,
    pub tail_policy: TailPolicy,
    /// Exponent assumed by the reported tail estimate.
    pub tail_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::CompositeSimpson,
            panels: 64,
            grading: 1.05,
            horizon: Horizon::Relative { factor: 40.0, wrap_cap: Some(2.0) },
            tail_policy: TailPolicy::Drop,
            tail_exponent: -2.0,
        }
    }
}

const GL4_X: [f64; 4] =
    [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_W: [f64; 4] =
    [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

impl QuadratureSpec {
    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.horizon = Horizon::Absolute { t_max };
        self
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels < 2 {
            return Err(invalid("quadrature.panels", format!("must be at least 2, got {}", self.panels)));
        }
        if !(self.grading.is_finite() && self.grading >= 1.0) {
            return Err(invalid("quadrature.grading", "must be finite and at least 1"));
        }
        match self.horizon {
            Horizon::Absolute { t_max } if !(t_max.is_finite() && t_max > 0.0) => {
                return Err(invalid("quadrature.t_max", "must be positive and finite"))
            }
            Horizon::Relative { factor, wrap_cap } => {
                if !(factor.is_finite() && factor > 1.0) {
                    return Err(invalid("quadrature.t_max_factor", "must exceed 1"));
                }
                if matches!(wrap_cap, Some(c) if !(c.is_finite() && c > 0.0)) {
                    return Err(invalid("quadrature.wrap_cap", "must be positive"));
                }
            }
            _ => {}
        }
        if let TailPolicy::PowerLawExtrapolate { exponent } = self.tail_policy {
            if exponent.is_nan() || exponent >= -1.0 {
                return Err(invalid("quadrature.tail_policy.exponent", "must be below -1 for a finite tail"));
            }
        }
        if self.tail_exponent.is_nan() || self.tail_exponent >= -1.0 {
            return Err(invalid("quadrature.tail_exponent", "must be below -1"));
        }
        Ok(())
    }

    /// Panel boundaries on `[a, b]`, geometrically graded, with every
    /// breakpoint inside `(a, b)` inserted.
    pub fn panel_edges(&self, a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
        let p = self.panels;
        let r = self.grading;
        let mut edges: Vec<f64> = (0..=p)
            .map(|i| {
                if r == 1.0 {
                    a + (b - a) * i as f64 / p as f64
                } else {
                    a + (b - a) * (r.powi(i as i32) - 1.0) / (r.powi(p as i32) - 1.0)
                }
            })
            .collect();
        edges.extend(breakpoints.iter().copied().filter(|&t| t > a && t < b));
        edges.sort_by(f64::total_cmp);
        let tol = 1e-12 * (b - a).abs().max(1.0);
        edges.dedup_by(|x, y| (*x - *y).abs() <= tol);
        // Keep the exact endpoints.
        edges[0] = a;
        *edges.last_mut().expect("nonempty") = b;
        edges
    }

    /// Nodes and weights of the rule on one panel.
    pub fn panel_nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let h = b - a;
        match self.rule {
            QuadratureRule::CompositeSimpson => {
                vec![(a, h / 6.0), (0.5 * (a + b), 4.0 * h / 6.0), (b, h / 6.0)]
            }
            QuadratureRule::GaussLegendrePanels => {
                GL4_X.iter().zip(GL4_W).map(|(&x, w)| (0.5 * (a + b) + 0.5 * h * x, 0.5 * h * w)).collect()
            }
        }
    }

    /// Nodes and weights on `[a, b]`, shared endpoints merged.
    pub fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        merge(self.panel_edges(a, b, &[]).windows(2).flat_map(|e| self.panel_nodes(e[0], e[1])))
    }
}

fn merge(nodes: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (t, w) in nodes {
        match out.last_mut() {
            Some(last) if last.0 == t => last.1 += w,
            _ => out.push((t, w)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(q: &QuadratureSpec, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        q.nodes(a, b).iter().map(|&(t, w)| w * f(t)).sum()
    }

    #[test]
    fn rules_integrate_cubics_exactly() {
        for rule in [QuadratureRule::CompositeSimpson, QuadratureRule::GaussLegendrePanels] {
            let q = QuadratureSpec { rule, panels: 5, ..Default::default() };
            let v = integrate(&q, |t| 2.0 * t * t * t - t + 1.0, 1.0, 3.0);
            assert!((v - 38.0).abs() < 1e-12, "{rule:?}: {v}");
        }
    }

    #[test]
    fn graded_edges_keep_breakpoints() {
        let q = QuadratureSpec { panels: 8, ..Default::default() };
        let e = q.panel_edges(1.0, 9.0, &[2.5, 0.5, 9.5]);
        assert_eq!(e[0], 1.0);
        assert_eq!(*e.last().unwrap(), 9.0);
        assert!(e.contains(&2.5));
        assert!(e.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(e.len(), 10);
    }

    #[test]
    fn horizon_cap() {
        let h = Horizon::Relative { factor: 40.0, wrap_cap: Some(2.0) };
        assert_eq!(h.resolve(10.0, 30.0), 60.0);
        assert_eq!(h.resolve(1.0, 30.0), 40.0);
        assert_eq!(h.resolve(1.0, f64::INFINITY), 40.0);
    }

    #[test]
    fn validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec { panels: 1, ..Default::default() }.validate().is_err());
        let bad =
            QuadratureSpec { tail_policy: TailPolicy::PowerLawExtrapolate { exponent: -0.5 }, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
