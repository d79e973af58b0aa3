//! Rational functions as numerator/denominator pairs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::point::{DomainError, RationalPoint6};
use crate::poly::{SparsePoly6, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("denominator is the zero polynomial")]
pub struct ZeroDenominator;

/// `numerator / denominator` with a denominator that is not identically zero.
///
/// No gcd is ever computed. Equality is decided by cross-multiplication, and
/// [`RationalFn6::cancel`] removes caller-supplied factors when both sides are
/// divisible by them.
#[derive(Clone)]
pub struct RationalFn6 {
    num: SparsePoly6,
    den: SparsePoly6,
}

impl RationalFn6 {
    pub fn new(num: SparsePoly6, den: SparsePoly6) -> Result<Self, ZeroDenominator> {
        if den.is_zero() {
            return Err(ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: SparsePoly6) -> Self {
        Self { num: p, den: SparsePoly6::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(SparsePoly6::zero())
    }

    pub fn numerator(&self) -> &SparsePoly6 {
        &self.num
    }

    pub fn denominator(&self) -> &SparsePoly6 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `self / p` for a nonzero polynomial `p`.
    pub fn div_poly(&self, p: &SparsePoly6) -> Result<Self, ZeroDenominator> {
        Self::new(self.num.clone(), &self.den * p)
    }

    pub fn mul_poly(&self, p: &SparsePoly6) -> Self {
        Self { num: &self.num * p, den: self.den.clone() }
    }

    pub fn evaluate(&self, p: &RationalPoint6) -> Result<BigRational, DomainError> {
        let d = self.den.evaluate(p);
        if d.is_zero() {
            return Err(DomainError::ZeroDenominator);
        }
        Ok(self.num.evaluate(p) / d)
    }

    pub fn evaluate_f64(&self, x: &[f64; 6]) -> f64 {
        self.num.evaluate_f64(x) / self.den.evaluate_f64(x)
    }

    pub fn derivative(&self, v: Var) -> Self {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        let mut out = Self { num: n, den: &self.den * &self.den };
        out.cancel(std::slice::from_ref(&self.den));
        out
    }

    /// Divides numerator and denominator by each listed factor as many times
    /// as both stay exactly divisible, then normalizes the numeric content
    /// into the numerator.
    pub fn cancel(&mut self, factors: &[SparsePoly6]) {
        for f in factors {
            if f.total_degree().unwrap_or(0) == 0 {
                continue;
            }
            while let (Some(n), Some(d)) = (self.num.div_exact(f), self.den.div_exact(f)) {
                self.num = n;
                self.den = d;
            }
        }
        let (c, prim) = self.den.primitive();
        self.den = prim;
        self.num = self.num.scale(&c.recip());
    }

    /// Exact identity test by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    /// `self - other` over the product denominator, unreduced. This is the
    /// polynomial whose vanishing decides `self == other`.
    pub fn cross_difference(&self, other: &Self) -> SparsePoly6 {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }

    pub fn is_eta_only(&self) -> bool {
        self.num.is_eta_only() && self.den.is_eta_only()
    }
}

impl PartialEq for RationalFn6 {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RationalFn6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == SparsePoly6::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn6({self})")
    }
}

impl From<SparsePoly6> for RationalFn6 {
    fn from(p: SparsePoly6) -> Self {
        Self::from_poly(p)
    }
}

fn combine(a: &RationalFn6, b: &RationalFn6, sign: i64) -> RationalFn6 {
    let sgn = |p: SparsePoly6| if sign < 0 { -p } else { p };
    if a.den == b.den {
        return RationalFn6 { num: &a.num + &sgn(b.num.clone()), den: a.den.clone() };
    }
    if let Some(k) = b.den.div_exact(&a.den) {
        return RationalFn6 { num: &(&a.num * &k) + &sgn(b.num.clone()), den: b.den.clone() };
    }
    if let Some(k) = a.den.div_exact(&b.den) {
        return RationalFn6 { num: &a.num + &sgn(&b.num * &k), den: a.den.clone() };
    }
    RationalFn6 { num: &(&a.num * &b.den) + &sgn(&b.num * &a.den), den: &a.den * &b.den }
}

impl<'a> Add<&'a RationalFn6> for &'a RationalFn6 {
    type Output = RationalFn6;
    fn add(self, rhs: &RationalFn6) -> RationalFn6 {
        combine(self, rhs, 1)
    }
}

impl<'a> Sub<&'a RationalFn6> for &'a RationalFn6 {
    type Output = RationalFn6;
    fn sub(self, rhs: &RationalFn6) -> RationalFn6 {
        combine(self, rhs, -1)
    }
}

impl<'a> Mul<&'a RationalFn6> for &'a RationalFn6 {
    type Output = RationalFn6;
    fn mul(self, rhs: &RationalFn6) -> RationalFn6 {
        RationalFn6 { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl Neg for &RationalFn6 {
    type Output = RationalFn6;
    fn neg(self) -> RationalFn6 {
        RationalFn6 { num: -&self.num, den: self.den.clone() }
    }
}

impl One for RationalFn6 {
    fn one() -> Self {
        Self::from_poly(SparsePoly6::one())
    }
}

impl Mul for RationalFn6 {
    type Output = RationalFn6;
    fn mul(self, rhs: RationalFn6) -> RationalFn6 {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars::*;

    #[test]
    fn cross_multiplication_equality() {
        let a = RationalFn6::new(eta(1), &eta(1) * &eta(2)).unwrap();
        let b = RationalFn6::new(int(1), eta(2)).unwrap();
        assert!(a.equals(&b));
        assert!(!a.equals(&RationalFn6::new(int(1), eta(3)).unwrap()));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFn6::new(int(1), SparsePoly6::zero()).is_err());
    }

    #[test]
    fn sum_of_fractions() {
        let a = RationalFn6::new(int(1), eta(1)).unwrap();
        let b = RationalFn6::new(int(1), eta(2)).unwrap();
        let s = &a + &b;
        let expect = RationalFn6::new(&eta(1) + &eta(2), &eta(1) * &eta(2)).unwrap();
        assert!(s.equals(&expect));
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn cancel_removes_listed_factor() {
        let mut f = RationalFn6::new(&eta(1).pow(3) * &int(4), &eta(1).pow(2) * &int(2)).unwrap();
        f.cancel(&[eta(1)]);
        assert_eq!(f.denominator(), &int(1));
        assert_eq!(f.numerator(), &(&eta(1) * &int(2)));
    }

    #[test]
    fn quotient_rule() {
        let f = RationalFn6::new(int(1), eta(1)).unwrap();
        let d = f.derivative(Var::Eta1);
        assert!(d.equals(&RationalFn6::new(int(-1), eta(1).pow(2)).unwrap()));
    }
}
