use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

/// A factor the appendix divides by, named for error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularFactor {
    /// `η1`
    Eta1,
    /// `η2² + η3²`
    TransverseNorm,
    /// `3η1² − η2² − η3²`
    Cone,
    /// `|η|²`
    EtaNorm,
}

impl SingularFactor {
    pub fn describe(self) -> &'static str {
        match self {
            SingularFactor::Eta1 => "eta1",
            SingularFactor::TransverseNorm => "eta2^2 + eta3^2",
            SingularFactor::Cone => "3*eta1^2 - eta2^2 - eta3^2",
            SingularFactor::EtaNorm => "eta1^2 + eta2^2 + eta3^2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("evaluation point lies on the excluded set: {} = 0", .0.describe())]
    Vanishing(SingularFactor),
    #[error("denominator vanishes at the evaluation point")]
    ZeroDenominator,
}

/// A point `(ξ, η)` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint6 {
    coords: [BigRational; 6],
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalPoint6 {
    pub fn new(xi: [BigRational; 3], eta: [BigRational; 3]) -> Self {
        let [a, b, c] = xi;
        let [d, e, f] = eta;
        Self { coords: [a, b, c, d, e, f] }
    }

    pub fn from_ints(xi: [i64; 3], eta: [i64; 3]) -> Self {
        Self::new(xi.map(r), eta.map(r))
    }

    /// Coordinates given as `(numerator, denominator)` pairs.
    pub fn from_fractions(xi: [(i64, i64); 3], eta: [(i64, i64); 3]) -> Self {
        let f = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
        Self::new(xi.map(f), eta.map(f))
    }

    pub fn coords(&self) -> &[BigRational; 6] {
        &self.coords
    }

    pub fn xi(&self) -> [&BigRational; 3] {
        [&self.coords[0], &self.coords[1], &self.coords[2]]
    }

    pub fn eta(&self) -> [&BigRational; 3] {
        [&self.coords[3], &self.coords[4], &self.coords[5]]
    }

    pub fn to_f64(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        for (o, c) in out.iter_mut().zip(&self.coords) {
            *o = c.to_f64().unwrap_or(f64::NAN);
        }
        out
    }

    /// Checks the three conditions the appendix needs; `|η|² ≠ 0` follows from `η1 ≠ 0`.
    pub fn check_appendix_domain(&self) -> Result<(), DomainError> {
        check_eta_domain(self.eta())
    }
}

/// The table coefficients only divide by `p(η) = |η|²(3η1²−η2²−η3²)²`.
pub(crate) fn check_p_domain(eta: [&BigRational; 3]) -> Result<(), DomainError> {
    let [e1, e2, e3] = eta;
    let s = e2 * e2 + e3 * e3;
    if (e1 * e1 + &s).is_zero() {
        return Err(DomainError::Vanishing(SingularFactor::EtaNorm));
    }
    if (r(3) * e1 * e1 - s).is_zero() {
        return Err(DomainError::Vanishing(SingularFactor::Cone));
    }
    Ok(())
}

pub(crate) fn check_eta_domain(eta: [&BigRational; 3]) -> Result<(), DomainError> {
    let [e1, e2, e3] = eta;
    if e1.is_zero() {
        return Err(DomainError::Vanishing(SingularFactor::Eta1));
    }
    let s = e2 * e2 + e3 * e3;
    if s.is_zero() {
        return Err(DomainError::Vanishing(SingularFactor::TransverseNorm));
    }
    if (r(3) * e1 * e1 - s).is_zero() {
        return Err(DomainError::Vanishing(SingularFactor::Cone));
    }
    Ok(())
}
