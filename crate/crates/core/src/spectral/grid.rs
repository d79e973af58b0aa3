use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A cubic periodic box `[-L/2, L/2)³` with `n` samples per axis.
///
/// Flat index of sample `(i, j, k)` is `i + n(j + n k)`, x1 fastest. Spectral
/// arrays use the same layout in FFT order, so mode index `m` on an axis
/// carries wavenumber `m` for `m < n/2` and `m - n` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    n: usize,
    length: f64,
}

impl Grid3 {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(invalid("grid.n", format!("must be even and at least 8, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid("grid.L", format!("must be positive and finite, got {length}")));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// `h³`, the Riemann-sum weight.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    pub fn unflatten(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    /// Physical coordinate of sample `m` on an axis, measured from the box center.
    pub fn coordinate(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.spacing()
    }

    pub fn wavenumber(&self, m: usize) -> i64 {
        if m < self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// `2πk/L` for mode index `m`.
    pub fn frequency(&self, m: usize) -> f64 {
        2.0 * PI * self.wavenumber(m) as f64 / self.length
    }

    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.n / 2
    }

    /// Inside the two-thirds band on one axis: `3|k| ≤ n`.
    pub fn in_band(&self, m: usize) -> bool {
        3 * self.wavenumber(m).unsigned_abs() as usize <= self.n
    }

    /// Largest retained frequency magnitude on one axis after dealiasing.
    pub fn band_frequency(&self) -> f64 {
        2.0 * PI * (self.n / 3) as f64 / self.length
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.frequency(m)).collect()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.coordinate(m)).collect()
    }

    /// Calls `f(flat_index, [m1, m2, m3], ξ)` for every mode.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [usize; 3], [f64; 3])) {
        let fr = self.frequencies();
        let n = self.n;
        let mut idx = 0;
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    f(idx, [i, j, k], [fr[i], fr[j], fr[k]]);
                    idx += 1;
                }
            }
        }
    }

    /// Flat indices of modes inside the two-thirds band (Nyquist excluded).
    pub fn band_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_mode(|idx, m, _| {
            if m.iter().all(|&a| self.in_band(a) && !self.is_nyquist(a)) {
                out.push(idx);
            }
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid3::new(7, 1.0).is_err());
        assert!(Grid3::new(6, 1.0).is_err());
        assert!(Grid3::new(8, 0.0).is_err());
        assert!(Grid3::new(8, f64::NAN).is_err());
    }

    #[test]
    fn wavenumbers_are_symmetric_except_nyquist() {
        let g = Grid3::new(8, 2.0 * PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|m| g.wavenumber(m)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert!(g.is_nyquist(4));
        assert_eq!(g.coordinate(4), 0.0);
    }

    #[test]
    fn band_size() {
        let g = Grid3::new(64, 1.0).unwrap();
        assert_eq!(g.band_indices().len(), 43 * 43 * 43);
    }
}
