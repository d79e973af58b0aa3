use super::field::{from_spectral, to_spectral, RealField};
use super::multiplier::{apply_multiplier, MultiplierSpec};
use crate::error::{invalid, Result};

/// `(h³ Σ|f|^p)^{1/p}`, or the grid maximum for `p = ∞`.
pub fn lebesgue_norm(f: &RealField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid("p", format!("Lebesgue exponent must be in [1, inf], got {p}")));
    }
    let s = f.samples();
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let h3 = f.grid().cell_volume();
    if p == 2.0 {
        return Ok((h3 * s.iter().map(|v| v * v).sum::<f64>()).sqrt());
    }
    if p == 1.0 {
        return Ok(h3 * s.iter().map(|v| v.abs()).sum::<f64>());
    }
    // Scale by the max to keep large exponents from overflowing.
    let m = f.max_abs();
    if m == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = s.iter().map(|v| (v.abs() / m).powf(p)).sum();
    Ok(m * (h3 * sum).powf(1.0 / p))
}

/// `‖⟨∇⟩^s f‖_{L^q}`.
pub fn sobolev_norm(f: &RealField, s: f64, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(invalid("q", format!("Sobolev exponent must be in [1, inf], got {q}")));
    }
    if s == 0.0 {
        return lebesgue_norm(f, q);
    }
    let g = from_spectral(&apply_multiplier(&to_spectral(f)?, &MultiplierSpec::bessel(s))?);
    lebesgue_norm(&g, q)
}

/// `⟨x⟩ f` with `⟨x⟩ = sqrt(1 + |x|²)` and `x` measured from the box center.
pub fn weighted_field(f: &RealField) -> RealField {
    let grid = *f.grid();
    let weight = RealField::from_fn(grid, |x| (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt());
    f.mul(&weight).expect("same grid")
}
