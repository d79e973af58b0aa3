//! Empirical constants for the size bounds on the table coefficients, and
//! the double-precision cross-check of the identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::poly::{SparsePoly6, Var};
use crate::rational::RationalFn6;
use crate::table::{Basis, CoefficientName, CoefficientTable};

/// Magnitude range of the log-uniform sampler.
pub const SAMPLE_RANGE: (f64, f64) = (1e-3, 1e3);
/// Relative distance kept from `η1 = 0`, `η2²+η3² = 0` and the cone.
pub const SINGULAR_MARGIN: f64 = 1e-2;

/// Right-hand side `|η|^a |3η1²−η2²−η3²|^{-b}` summed over terms.
#[derive(Clone, Debug, Serialize)]
pub struct Majorant {
    /// `(a, b)` pairs.
    pub terms: Vec<(i32, i32)>,
}

impl Majorant {
    fn eval(&self, eta: [f64; 3]) -> f64 {
        let n = (eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2]).sqrt();
        let c = (3.0 * eta[0] * eta[0] - eta[1] * eta[1] - eta[2] * eta[2]).abs();
        self.terms.iter().map(|&(a, b)| n.powi(a) * c.powi(-b)).sum()
    }

    fn degree(&self) -> i32 {
        self.terms[0].0 - 2 * self.terms[0].1
    }
}

/// A bound `|∂^i_{η_j} X(η)| ≲ majorant`.
#[derive(Clone, Debug)]
pub struct BoundSpec {
    pub coefficient: CoefficientName,
    /// `Some(j)` for a first derivative in `η_j`.
    pub derivative: Option<usize>,
    pub majorant: Majorant,
}

impl BoundSpec {
    pub fn label(&self) -> String {
        match self.derivative {
            None => self.coefficient.label().to_string(),
            Some(j) => format!("d_eta{j} {}", self.coefficient.label()),
        }
    }
}

/// The printed bound list, restricted to the `(i, j, k)` combinations that
/// are written out: the derivative index always matches the first index of
/// the coefficient.
pub fn printed_bounds() -> Vec<BoundSpec> {
    use CoefficientName::*;
    let m = |t: &[(i32, i32)]| Majorant { terms: t.to_vec() };
    let mut out = vec![BoundSpec { coefficient: A0, derivative: None, majorant: m(&[(2, 2)]) }];
    for (name, j) in [(A1, 1), (A2, 2), (A3, 3)] {
        out.push(BoundSpec { coefficient: name, derivative: None, majorant: m(&[(3, 2)]) });
        out.push(BoundSpec { coefficient: name, derivative: Some(j), majorant: m(&[(2, 2), (4, 3)]) });
    }
    for name in [B01, B02, B03] {
        out.push(BoundSpec { coefficient: name, derivative: None, majorant: m(&[(2, 2)]) });
    }
    for (name, j) in [(B11, 1), (B12, 1), (B13, 1), (B21, 2), (B22, 2), (B31, 3), (B32, 3)] {
        out.push(BoundSpec { coefficient: name, derivative: None, majorant: m(&[(2, 2)]) });
        out.push(BoundSpec { coefficient: name, derivative: Some(j), majorant: m(&[(1, 2), (3, 3)]) });
    }
    for (name, j) in [(C21, 2), (C22, 2), (C31, 3), (C32, 3)] {
        out.push(BoundSpec { coefficient: name, derivative: None, majorant: m(&[(1, 2)]) });
        out.push(BoundSpec { coefficient: name, derivative: Some(j), majorant: m(&[(0, 2), (2, 3)]) });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub max_ratio: f64,
    /// Homogeneity degree of the left side minus that of the majorant.
    pub degree_mismatch: i32,
    /// Fitted `d log(ratio) / d log λ` along rays `η ↦ λη`, λ ∈ [1e-3, 1e3].
    pub scaling_exponent: f64,
    /// The ratio grows without bound along rays, toward 0 or ∞.
    pub unbounded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n_samples: usize,
    pub seed: u64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    let (lo, hi) = SAMPLE_RANGE;
    let mag = (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp();
    if rng.gen::<bool>() {
        mag
    } else {
        -mag
    }
}

fn guarded(eta: [f64; 3]) -> bool {
    let n2 = eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2];
    let s = eta[1] * eta[1] + eta[2] * eta[2];
    let c = 3.0 * eta[0] * eta[0] - s;
    eta[0].abs() >= SINGULAR_MARGIN * n2.sqrt()
        && s >= SINGULAR_MARGIN * SINGULAR_MARGIN * n2
        && c.abs() >= SINGULAR_MARGIN * n2
}

/// Draws an η with log-uniform component magnitudes and random signs, away
/// from the singular sets.
pub fn sample_eta(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let e = [log_uniform(rng), log_uniform(rng), log_uniform(rng)];
        if guarded(e) {
            return e;
        }
    }
}

fn at(eta: [f64; 3]) -> [f64; 6] {
    [0.0, 0.0, 0.0, eta[0], eta[1], eta[2]]
}

fn homogeneity(f: &RationalFn6) -> i32 {
    let deg = |p: &SparsePoly6| p.total_degree().unwrap_or(0) as i32;
    deg(f.numerator()) - deg(f.denominator())
}

/// For each printed bound, the largest observed `|LHS| / RHS` over
/// `n_samples` guarded log-uniform points, plus a scaling test along rays.
pub fn sample_coefficient_bounds(n_samples: usize, seed: u64) -> BoundReport {
    let table = CoefficientTable::printed();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<[f64; 3]> = (0..n_samples).map(|_| sample_eta(&mut rng)).collect();
    let rays: Vec<[f64; 3]> = points
        .iter()
        .take(32)
        .map(|e| {
            let n = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
            [e[0] / n, e[1] / n, e[2] / n]
        })
        .collect();
    let lambdas: Vec<f64> = (-3..=3).map(|k| 10f64.powi(k)).collect();

    let entries = printed_bounds()
        .into_iter()
        .map(|spec| {
            let base = table.get(spec.coefficient);
            let lhs = match spec.derivative {
                None => base.clone(),
                Some(j) => base.derivative(Var::eta(j)),
            };
            let ratio = |e: [f64; 3]| lhs.evaluate_f64(&at(e)).abs() / spec.majorant.eval(e);
            let max_ratio = points.iter().map(|&e| ratio(e)).fold(0.0, f64::max);
            // Least-squares slope of log ratio against log λ, averaged over rays.
            let mut slopes = Vec::new();
            for ray in &rays {
                let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
                let ys: Vec<f64> = lambdas.iter().map(|&l| ratio([ray[0] * l, ray[1] * l, ray[2] * l]).ln()).collect();
                if ys.iter().all(|y| y.is_finite()) {
                    slopes.push(slope(&xs, &ys));
                }
            }
            let scaling_exponent = slopes.iter().sum::<f64>() / slopes.len().max(1) as f64;
            let degree_mismatch = homogeneity(&lhs) - spec.majorant.degree();
            BoundEntry {
                name: spec.label(),
                max_ratio,
                degree_mismatch,
                scaling_exponent,
                unbounded: scaling_exponent.abs() > 0.1,
            }
        })
        .collect();
    BoundReport { n_samples, seed, entries }
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, Serialize)]
pub struct FloatBridgeReport {
    pub points: usize,
    pub seed: u64,
    /// Largest `|ψ_time + ψ_space − ξ1| / scale`, where `scale` sums the
    /// magnitudes of every term that enters the evaluation.
    pub max_relative_residual: f64,
}

/// Evaluates the identity in double precision at random guarded points.
pub fn float_bridge(table: &CoefficientTable, points: usize, seed: u64) -> FloatBridgeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<SparsePoly6> = Basis::ALL.iter().map(|b| b.poly()).collect();
    let coefs: Vec<(CoefficientName, RationalFn6)> = table.iter().map(|(n, c)| (n, c.clone())).collect();
    let abs_eval = |p: &SparsePoly6, x: &[f64; 6]| -> f64 {
        p.terms()
            .map(|(e, c)| {
                let mut t = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN).abs();
                for k in 0..6 {
                    t *= x[k].abs().powi(e[k] as i32);
                }
                t
            })
            .sum()
    };
    let mut worst = 0.0f64;
    for _ in 0..points {
        let eta = sample_eta(&mut rng);
        let x = [log_uniform(&mut rng), log_uniform(&mut rng), log_uniform(&mut rng), eta[0], eta[1], eta[2]];
        let vals: Vec<f64> = basis.iter().map(|b| b.evaluate_f64(&x)).collect();
        let mags: Vec<f64> = basis.iter().map(|b| abs_eval(b, &x)).collect();
        let mut total = -x[0];
        let mut scale = x[0].abs();
        for (name, c) in &coefs {
            let (b, m) = name.slot();
            let mono = x[0].powi(m[0] as i32) * x[1].powi(m[1] as i32) * x[2].powi(m[2] as i32);
            let cm = c.evaluate_f64(&x) * mono;
            total += cm * vals[b as usize];
            scale += cm.abs() * mags[b as usize];
        }
        worst = worst.max(total.abs() / scale);
    }
    FloatBridgeReport { points, seed, max_relative_residual: worst }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a0_ratio_at_axis_point() {
        let table = CoefficientTable::printed();
        let a0 = table.get(CoefficientName::A0).evaluate_f64(&at([1.0, 0.0, 0.0]));
        let spec = &printed_bounds()[0];
        assert!((a0.abs() / spec.majorant.eval([1.0, 0.0, 0.0]) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bound_list_size() {
        assert_eq!(printed_bounds().len(), 32);
    }
}
