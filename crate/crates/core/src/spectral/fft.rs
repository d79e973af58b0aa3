//! Unitary 3D FFT on top of rustfft's 1D plans.
//!
//! Besides the full transform there are pruned variants for fields living in
//! the two-thirds band: lines that are identically zero on input, or whose
//! output is discarded, are skipped.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Plans {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    all: Vec<usize>,
    band: Vec<usize>,
}

pub(crate) fn plans(n: usize) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Plans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let half = n / 2;
            let band = (0..n)
                .filter(|&m| {
                    let k = if m < half { m } else { n - m };
                    m != half && 3 * k <= n
                })
                .collect();
            Arc::new(Plans {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
                all: (0..n).collect(),
                band,
            })
        })
        .clone()
}

struct Work {
    scratch: Vec<Complex64>,
    block: Vec<Complex64>,
}

impl Plans {
    fn work(&self, fft: &Arc<dyn Fft<f64>>) -> Work {
        Work {
            scratch: vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
            block: vec![Complex64::new(0.0, 0.0); self.n * self.n],
        }
    }

    fn fft(&self, inverse: bool) -> &Arc<dyn Fft<f64>> {
        if inverse {
            &self.inverse
        } else {
            &self.forward
        }
    }

    /// 1D transforms along x2 (`axis = 1`) or x3 (`axis = 2`) for the lines
    /// whose outer index is in `outers` and whose x1 index is in `inner`.
    fn strided_pass(
        &self,
        data: &mut [Complex64],
        axis: usize,
        inverse: bool,
        outers: &[usize],
        inner: &[usize],
        w: &mut Work,
    ) {
        let n = self.n;
        let (stride, outer_stride) = if axis == 1 { (n, n * n) } else { (n * n, n) };
        let count = inner.len();
        let block = &mut w.block[..count * n];
        for &outer in outers {
            let base0 = outer * outer_stride;
            for m in 0..n {
                let row = &data[base0 + m * stride..base0 + m * stride + n];
                for (bi, &b) in inner.iter().enumerate() {
                    block[bi * n + m] = row[b];
                }
            }
            self.fft(inverse).process_with_scratch(block, &mut w.scratch);
            for m in 0..n {
                let row = &mut data[base0 + m * stride..base0 + m * stride + n];
                for (bi, &b) in inner.iter().enumerate() {
                    row[b] = block[bi * n + m];
                }
            }
        }
    }

    /// In-place transform of an `n³` array, scaled by `n^{-3/2}`.
    pub(crate) fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n * n);
        let fft = self.fft(inverse);
        let mut w = self.work(fft);
        // x1 lines are contiguous.
        fft.process_with_scratch(data, &mut w.scratch);
        self.strided_pass(data, 1, inverse, &self.all, &self.all, &mut w);
        self.strided_pass(data, 2, inverse, &self.all, &self.all, &mut w);
        let scale = 1.0 / ((n * n * n) as f64).sqrt();
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Unscaled inverse transform of an array supported in the band.
    pub(crate) fn inverse_from_band(&self, data: &mut [Complex64]) {
        let mut w = self.work(&self.inverse);
        // x3 lines: both x1 and x2 indices in the band.
        self.strided_pass(data, 2, true, &self.band, &self.band, &mut w);
        // x2 lines: x1 index in the band, any x3.
        self.strided_pass(data, 1, true, &self.all, &self.band, &mut w);
        self.inverse.process_with_scratch(data, &mut w.scratch);
    }

    /// Unscaled forward transform; only the band entries of the result are valid.
    pub(crate) fn forward_to_band(&self, data: &mut [Complex64]) {
        let mut w = self.work(&self.forward);
        self.forward.process_with_scratch(data, &mut w.scratch);
        self.strided_pass(data, 1, false, &self.all, &self.band, &mut w);
        self.strided_pass(data, 2, false, &self.band, &self.band, &mut w);
    }
}
