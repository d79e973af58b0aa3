//! Least-squares power laws `v ≈ C t^s` in log-log coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual of `ln v` about the fitted line.
    pub residual: f64,
    pub points: usize,
}

impl PowerLawFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.prefactor * t.powf(self.exponent)
    }
}

pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<PowerLawFit> {
    if samples.len() < 2 {
        return Err(invalid("fit samples", "need at least two points"));
    }
    if samples.iter().any(|&(t, v)| !(t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite())) {
        return Err(invalid("fit samples", "times and values must be positive and finite"));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("fit samples", "all times coincide"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    Ok(PowerLawFit { exponent: slope, prefactor: icpt.exp(), residual: (rss / n).sqrt(), points: samples.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = (1..10).map(|k| (k as f64, 3.0 * (k as f64).powf(-1.25))).collect();
        let f = fit_power_law(&s).unwrap();
        assert!((f.exponent + 1.25).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(fit_power_law(&[(1.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 0.0), (2.0, 2.0)]).is_err());
    }
}
