//! Band-coefficient right-hand sides shared by the forward and backward solvers.

use num_complex::Complex64;

use crate::spectral::band::{Band, Coeffs};
use crate::spectral::Grid3;

pub(crate) struct Kernel {
    pub band: Band,
    ps: Vec<f64>,
    pa: Vec<f64>,
    dx1: Vec<Complex64>,
    mollifier: Option<Vec<f64>>,
    lambda: f64,
}

impl Kernel {
    pub fn new(grid: Grid3) -> Self {
        Self::regularized(grid, 0.0, 0.0)
    }

    /// `λ, μ > 0` switch on `(1+λt)^{-5}` and the Gaussian mollifier.
    pub fn regularized(grid: Grid3, lambda: f64, mu: f64) -> Self {
        let band = Band::new(grid);
        let dx1 = band.xi.iter().map(|x| Complex64::new(0.0, x[0])).collect();
        let mollifier = (mu > 0.0).then(|| {
            band.xi.iter().map(|x| (-0.5 * mu * mu * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp()).collect()
        });
        let n = grid.len();
        Self { band, ps: vec![0.0; n], pa: vec![0.0; n], dx1, mollifier, lambda }
    }

    /// `∂1 P(u²)`.
    pub fn zk(&mut self, u: &[Complex64]) -> Coeffs {
        self.band.synthesize(u, None, &mut self.ps, None);
        self.ps.iter_mut().for_each(|v| *v *= *v);
        let mut out = self.band.zeros();
        self.band.analyze(&self.ps, None, &mut out, None);
        for (o, d) in out.iter_mut().zip(&self.dx1) {
            *o *= d;
        }
        out
    }

    /// `N(w,u₁,u₂) = ∂1 P[(w+u₁+u₂)² − u₁²]`, regularized when configured:
    /// `(1+λt)^{-5} ρ_μ∗N(ρ_μ∗w, ρ_μ∗u₁, ρ_μ∗u₂)`.
    pub fn n(&mut self, t: f64, w: &[Complex64], u1: &[Complex64], u2: &[Complex64]) -> Coeffs {
        let mut s: Coeffs = w.iter().zip(u1).zip(u2).map(|((a, b), c)| a + b + c).collect();
        let mut a: Coeffs = u1.to_vec();
        if let Some(m) = &self.mollifier {
            for ((x, y), m) in s.iter_mut().zip(a.iter_mut()).zip(m) {
                *x *= m;
                *y *= m;
            }
        }
        self.band.synthesize(&s, Some(&a), &mut self.ps, Some(&mut self.pa));
        for (x, y) in self.ps.iter_mut().zip(&self.pa) {
            // (s − a)(s + a) keeps the w-free part of s² − a² exact.
            *x = (*x - y) * (*x + y);
        }
        let mut out = self.band.zeros();
        self.band.analyze(&self.ps, None, &mut out, None);
        let r = if self.lambda > 0.0 { (1.0 + self.lambda * t).powi(-5) } else { 1.0 };
        match &self.mollifier {
            Some(m) => {
                for ((o, d), m) in out.iter_mut().zip(&self.dx1).zip(m) {
                    *o *= d * (r * m);
                }
            }
            None => {
                for (o, d) in out.iter_mut().zip(&self.dx1) {
                    *o *= d * r;
                }
            }
        }
        out
    }
}
