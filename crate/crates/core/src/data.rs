//! Final data `u₊` on the box.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{read_snapshot, Grid3, RealField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FinalData {
    /// `A (x1−c1)/σ · e^{−|x−c|²/2σ²}`. Mean zero in `x1`, so its spectrum
    /// vanishes on `ξ1 = 0`.
    #[serde(rename = "gaussian-x1derivative", alias = "gaussian-x1-derivative")]
    GaussianX1Derivative {
        amplitude: f64,
        sigma: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    /// `A e^{−|x−c|²/2σ²}`.
    Gaussian {
        amplitude: f64,
        sigma: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    /// A field snapshot file on the same grid.
    CustomFile { path: PathBuf },
}

impl FinalData {
    pub fn gaussian_x1_derivative(amplitude: f64, sigma: f64) -> Self {
        FinalData::GaussianX1Derivative { amplitude, sigma, center: [0.0; 3] }
    }

    pub fn gaussian(amplitude: f64, sigma: f64) -> Self {
        FinalData::Gaussian { amplitude, sigma, center: [0.0; 3] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FinalData::GaussianX1Derivative { amplitude, sigma, center }
            | FinalData::Gaussian { amplitude, sigma, center } => {
                if !amplitude.is_finite() {
                    return Err(invalid("data.amplitude", "must be finite"));
                }
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(invalid("data.sigma", format!("must be positive, got {sigma}")));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("data.center", "must be finite"));
                }
                Ok(())
            }
            FinalData::CustomFile { .. } => Ok(()),
        }
    }

    /// Samples the data, checking that it has decayed at the box faces.
    pub fn build(&self, grid: Grid3) -> Result<RealField> {
        self.validate()?;
        let field = match self {
            FinalData::GaussianX1Derivative { amplitude, sigma, center } => {
                let (a, s, c) = (*amplitude, *sigma, *center);
                RealField::from_fn(grid, move |x| a * (x[0] - c[0]) / s * gauss(x, c, s))
            }
            FinalData::Gaussian { amplitude, sigma, center } => {
                let (a, s, c) = (*amplitude, *sigma, *center);
                RealField::from_fn(grid, move |x| a * gauss(x, c, s))
            }
            FinalData::CustomFile { path } => {
                let f = read_snapshot(path)?;
                if f.grid() != &grid {
                    return Err(Error::GridMismatch);
                }
                return Ok(f);
            }
        };
        let amplitude = match self {
            FinalData::GaussianX1Derivative { amplitude, .. } | FinalData::Gaussian { amplitude, .. } => {
                amplitude.abs()
            }
            FinalData::CustomFile { .. } => unreachable!(),
        };
        let edge = boundary_max(&field);
        if edge > 1e-12 * amplitude {
            return Err(invalid(
                "data.sigma",
                format!("data not decayed at the box boundary (max {edge:e}); use a smaller width or a larger box"),
            ));
        }
        Ok(field)
    }
}

fn gauss(x: [f64; 3], c: [f64; 3], s: f64) -> f64 {
    let r2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2);
    (-r2 / (2.0 * s * s)).exp()
}

/// Largest magnitude on the faces `x_j = −L/2` of the box.
pub fn boundary_max(f: &RealField) -> f64 {
    let g = f.grid();
    let n = g.n();
    let mut m = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for idx in [g.index(0, a, b), g.index(a, 0, b), g.index(a, b, 0)] {
                m = m.max(f.samples()[idx].abs());
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_profile_is_odd_in_x1() {
        let grid = Grid3::new(16, 40.0).unwrap();
        let f = FinalData::gaussian_x1_derivative(1.0, 2.0).build(grid).unwrap();
        let n = grid.n();
        // x = (m − n/2)h, so index n/2 ± k mirror each other in x1.
        let a = f.samples()[grid.index(n / 2 + 3, 5, 7)];
        let b = f.samples()[grid.index(n / 2 - 3, 5, 7)];
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn wide_data_is_rejected() {
        let grid = Grid3::new(16, 10.0).unwrap();
        assert!(FinalData::gaussian(1.0, 3.0).build(grid).is_err());
        assert!(FinalData::gaussian(1.0, -1.0).build(grid).is_err());
    }
}
