use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::spectral::RealField;

/// `N(w,u₁,u₂) = ∂1(w²) + 2∂1((u₁+u₂)w) + ∂1(2u₁u₂ + u₂²)`, products
/// dealiased by the two-thirds rule.
pub fn nonlinearity_n(w: &RealField, u1: &RealField, u2: &RealField) -> Result<RealField> {
    let grid = *w.grid();
    if u1.grid() != &grid || u2.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let mut k = Kernel::new(grid);
    let (wb, ab, bb) = (k.band.band_of(w), k.band.band_of(u1), k.band.band_of(u2));
    let n = k.n(0.0, &wb, &ab, &bb);
    Ok(k.band.physical_field(&n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{apply_multiplier, dealias_two_thirds, from_spectral, to_spectral, Grid3, MultiplierSpec};
    use std::f64::consts::PI;

    fn field(grid: Grid3, c: [f64; 3], s: f64, a: f64) -> RealField {
        let band = |f: RealField| from_spectral(&dealias_two_thirds(&to_spectral(&f).unwrap()));
        band(RealField::from_fn(grid, |x| {
            let r2: f64 = (0..3).map(|i| (x[i] - c[i]).powi(2)).sum();
            a * (-r2 / (2.0 * s * s)).exp()
        }))
    }

    fn l2(f: &RealField) -> f64 {
        f.samples().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `∂1 P(f²)` computed the long way on the full grid.
    fn dx1_sq(f: &RealField) -> RealField {
        let s = dealias_two_thirds(&to_spectral(&f.mul(f).unwrap()).unwrap());
        from_spectral(&apply_multiplier(&s, &MultiplierSpec::derivative(0)).unwrap())
    }

    #[test]
    fn identity_against_the_full_square() {
        let g = Grid3::new(32, 8.0 * PI).unwrap();
        let w = field(g, [0.5, 0.0, -0.3], 1.2, 0.3);
        let u1 = field(g, [-1.0, 0.7, 0.0], 1.5, 1.1);
        let u2 = field(g, [0.0, -0.5, 1.0], 0.9, -0.6);
        let n = nonlinearity_n(&w, &u1, &u2).unwrap();
        let total = w.add(&u1).unwrap().add(&u2).unwrap();
        let lhs = n.add(&dx1_sq(&u1)).unwrap();
        let rhs = dx1_sq(&total);
        let err = l2(&lhs.sub(&rhs).unwrap()) / l2(&rhs);
        assert!(err < 1e-11, "{err}");
    }

    #[test]
    fn degenerate_cases() {
        let g = Grid3::new(16, 8.0 * PI).unwrap();
        let z = RealField::from_fn(g, |_| 0.0);
        assert_eq!(nonlinearity_n(&z, &z, &z).unwrap().max_abs(), 0.0);
        let w = field(g, [0.0; 3], 1.5, 0.8);
        let got = nonlinearity_n(&w, &z, &z).unwrap();
        let want = dx1_sq(&w);
        assert!(l2(&got.sub(&want).unwrap()) < 1e-12 * l2(&want));
    }
}
