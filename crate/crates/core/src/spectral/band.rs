//! Precomputed frequency data for the modes kept by two-thirds dealiasing,
//! and the transforms the time-stepping loops use. Those loops only ever
//! touch band coefficients, stored as a flat vector in `Band::index` order.

use std::sync::Arc;

use num_complex::Complex64;

use super::fft::{plans, Plans};
use super::field::{RealField, SpectralField};
use super::grid::Grid3;

pub(crate) type Coeffs = Vec<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) struct Band {
    pub grid: Grid3,
    pub index: Vec<usize>,
    /// Full-array index of `−ξ` for each band mode.
    pub mirror: Vec<usize>,
    pub xi: Vec<[f64; 3]>,
    /// Dispersion relation `ξ1|ξ|²`.
    pub omega: Vec<f64>,
    plans: Arc<Plans>,
    buf: Vec<Complex64>,
    scale: f64,
}

impl Band {
    pub fn new(grid: Grid3) -> Self {
        let n = grid.n();
        let index = grid.band_indices();
        let fr = grid.frequencies();
        let mut xi = Vec::with_capacity(index.len());
        let mut mirror = Vec::with_capacity(index.len());
        for &i in &index {
            let m = grid.unflatten(i);
            xi.push([fr[m[0]], fr[m[1]], fr[m[2]]]);
            let r = m.map(|a| (n - a) % n);
            mirror.push(grid.index(r[0], r[1], r[2]));
        }
        let omega = xi.iter().map(|x| x[0] * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).collect();
        Self {
            grid,
            index,
            mirror,
            xi,
            omega,
            plans: plans(n),
            buf: vec![ZERO; grid.len()],
            scale: 1.0 / (grid.len() as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn zeros(&self) -> Coeffs {
        vec![ZERO; self.len()]
    }

    pub fn gather(&self, full: &[Complex64]) -> Coeffs {
        self.index.iter().map(|&i| full[i]).collect()
    }

    pub fn scatter(&self, band: &[Complex64], full: &mut [Complex64]) {
        full.iter_mut().for_each(|c| *c = ZERO);
        for (&i, &c) in self.index.iter().zip(band) {
            full[i] = c;
        }
    }

    pub fn restrict(&self, f: &SpectralField) -> Coeffs {
        self.gather(f.coefficients())
    }

    pub fn to_spectral(&self, band: &[Complex64]) -> SpectralField {
        let mut full = vec![ZERO; self.grid.len()];
        self.scatter(band, &mut full);
        SpectralField::from_raw(self.grid, full)
    }

    /// `e^{itω}` for every band mode.
    pub fn phases(&self, t: f64) -> Coeffs {
        self.omega
            .iter()
            .map(|&w| {
                let (s, c) = (t * w).sin_cos();
                Complex64::new(c, s)
            })
            .collect()
    }

    /// Physical samples of one or two real fields given by band spectra.
    /// The pair shares one complex transform.
    pub fn synthesize(
        &mut self,
        a: &[Complex64],
        b: Option<&[Complex64]>,
        out_a: &mut [f64],
        out_b: Option<&mut [f64]>,
    ) {
        self.buf.iter_mut().for_each(|c| *c = ZERO);
        let i = Complex64::new(0.0, 1.0);
        match b {
            Some(b) => {
                for ((&k, &x), &y) in self.index.iter().zip(a).zip(b) {
                    self.buf[k] = (x + i * y) * self.scale;
                }
            }
            None => {
                for (&k, &x) in self.index.iter().zip(a) {
                    self.buf[k] = x * self.scale;
                }
            }
        }
        self.plans.inverse_from_band(&mut self.buf);
        for (o, c) in out_a.iter_mut().zip(&self.buf) {
            *o = c.re;
        }
        if let Some(out_b) = out_b {
            for (o, c) in out_b.iter_mut().zip(&self.buf) {
                *o = c.im;
            }
        }
    }

    /// Band spectra of one or two real fields, sharing one complex transform.
    pub fn analyze(&mut self, x: &[f64], y: Option<&[f64]>, out_x: &mut [Complex64], out_y: Option<&mut [Complex64]>) {
        match y {
            Some(y) => {
                for ((c, &a), &b) in self.buf.iter_mut().zip(x).zip(y) {
                    *c = Complex64::new(a, b);
                }
            }
            None => {
                for (c, &a) in self.buf.iter_mut().zip(x) {
                    *c = Complex64::new(a, 0.0);
                }
            }
        }
        self.plans.forward_to_band(&mut self.buf);
        let s = self.scale;
        match out_y {
            Some(out_y) => {
                // Split C = X + iY using X(−ξ) = conj X(ξ).
                for (j, (&k, &m)) in self.index.iter().zip(&self.mirror).enumerate() {
                    let c = self.buf[k];
                    let d = self.buf[m].conj();
                    out_x[j] = (c + d) * (0.5 * s);
                    out_y[j] = Complex64::new((c - d).im, -(c - d).re) * (0.5 * s);
                }
            }
            None => {
                for (j, &k) in self.index.iter().enumerate() {
                    out_x[j] = self.buf[k] * s;
                }
            }
        }
    }

    pub fn physical_field(&mut self, a: &[Complex64]) -> RealField {
        let mut out = vec![0.0; self.grid.len()];
        self.synthesize(a, None, &mut out, None);
        RealField::from_raw(self.grid, out)
    }

    pub fn band_of(&mut self, f: &RealField) -> Coeffs {
        let mut out = self.zeros();
        self.analyze(f.samples(), None, &mut out, None);
        out
    }

    /// `h³ Σ w(ξ)|c|²`, the squared weighted `L²` norm of a band field.
    pub fn weighted_sq(&self, c: &[Complex64], weight: impl Fn([f64; 3]) -> f64) -> f64 {
        self.grid.cell_volume() * self.xi.iter().zip(c).map(|(x, v)| weight(*x) * v.norm_sqr()).sum::<f64>()
    }

    /// `H^s` norm of a band field.
    pub fn sobolev(&self, c: &[Complex64], s: f64) -> f64 {
        self.weighted_sq(c, |x| (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).powf(s)).sqrt()
    }

    pub fn l2(&self, c: &[Complex64]) -> f64 {
        self.weighted_sq(c, |_| 1.0).sqrt()
    }
}

/// `a ← a + s·b`.
pub(crate) fn axpy(a: &mut [Complex64], s: f64, b: &[Complex64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dealias_two_thirds, from_spectral, to_spectral};

    fn smooth(grid: Grid3, c: f64) -> RealField {
        RealField::from_fn(grid, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            (x[0] + c * x[1] * x[2]) * (-r2 / 3.0).exp()
        })
    }

    #[test]
    fn pruned_transforms_match_full_ones() {
        let grid = Grid3::new(16, 12.0).unwrap();
        let mut band = Band::new(grid);
        let f = dealias_two_thirds(&to_spectral(&smooth(grid, 0.3)).unwrap());
        let g = dealias_two_thirds(&to_spectral(&smooth(grid, -1.1)).unwrap());
        let (bf, bg) = (band.restrict(&f), band.restrict(&g));

        let mut pa = vec![0.0; grid.len()];
        let mut pb = vec![0.0; grid.len()];
        band.synthesize(&bf, Some(&bg), &mut pa, Some(&mut pb));
        let fa = from_spectral(&f);
        let fb = from_spectral(&g);
        for i in 0..grid.len() {
            assert!((pa[i] - fa.samples()[i]).abs() < 1e-13);
            assert!((pb[i] - fb.samples()[i]).abs() < 1e-13);
        }

        let mut cx = band.zeros();
        let mut cy = band.zeros();
        band.analyze(fa.samples(), Some(fb.samples()), &mut cx, Some(&mut cy));
        for j in 0..band.len() {
            assert!((cx[j] - bf[j]).norm() < 1e-13);
            assert!((cy[j] - bg[j]).norm() < 1e-13);
        }
        let single = band.band_of(&fa);
        for j in 0..band.len() {
            assert!((single[j] - bf[j]).norm() < 1e-13);
        }
    }
}
