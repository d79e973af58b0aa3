//! Fourier multipliers with explicit handling of singular symbols.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use crate::error::{invalid, Error, Result};

/// What to do with frequencies where a factor's symbol is singular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Guard {
    /// Evaluate everywhere; a non-finite value is a hard error.
    None,
    /// Zero the coefficient on the exact zero set of the singular factor.
    ZeroSetToZero,
    /// Zero the coefficient where `|s(ξ)| < eps_rel · scale(ξ)`.
    EpsilonFloor { eps_rel: f64 },
}

impl Guard {
    pub fn validate(&self) -> Result<()> {
        if let Guard::EpsilonFloor { eps_rel } = self {
            if !(eps_rel.is_finite() && *eps_rel > 0.0 && *eps_rel < 1.0) {
                return Err(invalid("guard.eps_rel", format!("must lie in (0, 1), got {eps_rel}")));
            }
        }
        Ok(())
    }
}

type Symbol = Arc<dyn Fn([f64; 3]) -> Complex64 + Send + Sync>;
/// Returns `(s(ξ), scale(ξ))`; the symbol is singular where `s = 0`.
type Singular = Arc<dyn Fn([f64; 3]) -> (f64, f64) + Send + Sync>;

#[derive(Clone)]
struct Factor {
    symbol: Symbol,
    singular: Option<Singular>,
    guard: Guard,
    description: String,
}

impl Factor {
    fn excluded(&self, xi: [f64; 3]) -> bool {
        let Some(sing) = &self.singular else { return false };
        let (s, scale) = sing(xi);
        match self.guard {
            Guard::None => false,
            Guard::ZeroSetToZero => scale == 0.0 || s.abs() <= 64.0 * f64::EPSILON * scale,
            Guard::EpsilonFloor { eps_rel } => scale == 0.0 || s.abs() < eps_rel * scale,
        }
    }
}

/// A product of symbol factors `ξ ↦ m(ξ)`, each with its own guard.
///
/// Factors are applied one after another to each coefficient, so applying a
/// product equals applying its factors in sequence, bit for bit.
#[derive(Clone)]
pub struct MultiplierSpec {
    factors: Vec<Factor>,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiplierSpec({})", self.description())
    }
}

fn norm2(xi: [f64; 3]) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

/// Symbol of `3∂1² − ∂2² − ∂3²`, i.e. `−3ξ1² + ξ2² + ξ3²`.
pub fn cone_symbol(xi: [f64; 3]) -> f64 {
    -3.0 * xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

impl MultiplierSpec {
    pub fn new(description: impl Into<String>, symbol: impl Fn([f64; 3]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            factors: vec![Factor {
                symbol: Arc::new(symbol),
                singular: None,
                guard: Guard::None,
                description: description.into(),
            }],
        }
    }

    /// A factor singular where `singular(ξ).0 = 0`, guarded by `guard`.
    pub fn singular(
        description: impl Into<String>,
        symbol: impl Fn([f64; 3]) -> Complex64 + Send + Sync + 'static,
        singular: impl Fn([f64; 3]) -> (f64, f64) + Send + Sync + 'static,
        guard: Guard,
    ) -> Self {
        Self {
            factors: vec![Factor {
                symbol: Arc::new(symbol),
                singular: Some(Arc::new(singular)),
                guard,
                description: description.into(),
            }],
        }
    }

    pub fn description(&self) -> String {
        self.factors.iter().map(|f| f.description.as_str()).collect::<Vec<_>>().join(" * ")
    }

    /// The product `self · other`.
    pub fn then(mut self, other: &MultiplierSpec) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    /// Replace the guard of every singular factor.
    pub fn with_guard(mut self, guard: Guard) -> Self {
        for f in &mut self.factors {
            if f.singular.is_some() {
                f.guard = guard;
            }
        }
        self
    }

    pub fn identity() -> Self {
        Self::new("1", |_| Complex64::new(1.0, 0.0))
    }

    /// `∂_{x_axis}`, symbol `iξ_axis` (axis 0, 1, 2).
    pub fn derivative(axis: usize) -> Self {
        Self::new(format!("d/dx{}", axis + 1), move |xi| Complex64::new(0.0, xi[axis]))
    }

    /// `Δ`, symbol `−|ξ|²`.
    pub fn laplacian() -> Self {
        Self::new("laplacian", |xi| Complex64::new(-norm2(xi), 0.0))
    }

    /// `⟨∇⟩^s`, symbol `(1+|ξ|²)^{s/2}`.
    pub fn bessel(s: f64) -> Self {
        Self::new(format!("<grad>^{s}"), move |xi| Complex64::new((1.0 + norm2(xi)).powf(s / 2.0), 0.0))
    }

    /// `|∂1|^s`; singular on `ξ1 = 0` when `s < 0`.
    pub fn abs_dx1_pow(s: f64, guard: Guard) -> Self {
        let sym = move |xi: [f64; 3]| Complex64::new(xi[0].abs().powf(s), 0.0);
        if s >= 0.0 {
            Self::new(format!("|d1|^{s}"), sym)
        } else {
            Self::singular(format!("|d1|^{s}"), sym, |xi| (xi[0], norm2(xi).sqrt()), guard)
        }
    }

    /// `(3∂1²−∂2²−∂3²)^p` for integer `p`; singular on the cone when `p < 0`.
    pub fn cone_power(p: i32, guard: Guard) -> Self {
        let sym = move |xi: [f64; 3]| Complex64::new(cone_symbol(xi).powi(p), 0.0);
        let desc = format!("(3d1^2-d2^2-d3^2)^{p}");
        if p >= 0 {
            Self::new(desc, sym)
        } else {
            Self::singular(desc, sym, |xi| (cone_symbol(xi), norm2(xi)), guard)
        }
    }

    /// `|3∂1²−∂2²−∂3²|^s` for real `s ≥ 0`.
    pub fn abs_cone_pow(s: f64) -> Self {
        Self::new(format!("|3d1^2-d2^2-d3^2|^{s}"), move |xi| Complex64::new(cone_symbol(xi).abs().powf(s), 0.0))
    }

    /// The 0/1 projection removing the band `|3ξ1²−ξ2²−ξ3²| < eps_rel·|ξ|²`
    /// around the cone, and the zero mode.
    pub fn cone_band_projection(eps_rel: f64) -> Self {
        Self::new(format!("P_cone(eps={eps_rel})"), move |xi| {
            let n2 = norm2(xi);
            let keep = n2 > 0.0 && cone_symbol(xi).abs() >= eps_rel * n2;
            Complex64::new(if keep { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Free propagator `V(t)`, symbol `e^{itξ1|ξ|²}`.
    pub fn free_phase(t: f64) -> Self {
        Self::new(format!("V({t})"), move |xi| {
            let w = xi[0] * norm2(xi);
            Complex64::from_polar(1.0, t * w)
        })
    }

    /// Spectral Gaussian mollifier `e^{−μ²|ξ|²/2}`.
    pub fn mollifier(mu: f64) -> Self {
        Self::new(format!("rho_{mu}"), move |xi| Complex64::new((-0.5 * mu * mu * norm2(xi)).exp(), 0.0))
    }

    /// Value at `ξ` with guards applied: `Ok(0)` for excluded frequencies.
    pub fn evaluate(&self, xi: [f64; 3]) -> Option<Complex64> {
        let mut v = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            if f.excluded(xi) {
                return Some(Complex64::new(0.0, 0.0));
            }
            v *= (f.symbol)(xi);
        }
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }

    pub(crate) fn guards(&self) -> impl Iterator<Item = &Guard> {
        self.factors.iter().filter(|f| f.singular.is_some()).map(|f| &f.guard)
    }
}

/// Coefficientwise product with the guarded symbol; Nyquist modes are zeroed.
pub fn apply_multiplier(f: &SpectralField, m: &MultiplierSpec) -> Result<SpectralField> {
    for g in m.guards() {
        g.validate()?;
    }
    let grid = *f.grid();
    let src = f.coefficients();
    let mut out = src.to_vec();
    let mut err = None;
    grid.for_each_mode(|idx, mi, xi| {
        if err.is_some() {
            return;
        }
        if mi.iter().any(|&a| grid.is_nyquist(a)) {
            out[idx] = Complex64::new(0.0, 0.0);
            return;
        }
        let mut c = src[idx];
        for fac in &m.factors {
            if fac.excluded(xi) {
                c = Complex64::new(0.0, 0.0);
                break;
            }
            let v = (fac.symbol)(xi);
            if !(v.re.is_finite() && v.im.is_finite()) {
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                err = Some(Error::NonFiniteSymbol {
                    description: fac.description.clone(),
                    k: mi.map(|a| grid.wavenumber(a)),
                });
                return;
            }
            c *= v;
        }
        out[idx] = c;
    });
    match err {
        Some(e) => Err(e),
        None => Ok(SpectralField::from_raw(grid, out)),
    }
}

/// Zeroes every mode with some `|k| > n/3` (and the Nyquist planes).
pub fn dealias_two_thirds(f: &SpectralField) -> SpectralField {
    let grid = *f.grid();
    let mut out = f.coefficients().to_vec();
    grid.for_each_mode(|idx, m, _| {
        if m.iter().any(|&a| !grid.in_band(a) || grid.is_nyquist(a)) {
            out[idx] = Complex64::new(0.0, 0.0);
        }
    });
    SpectralField::from_raw(grid, out)
}
