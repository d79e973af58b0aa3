//! Sparse polynomials in the six frequency variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::point::RationalPoint6;

/// Exponent vector ordered as (ξ1, ξ2, ξ3, η1, η2, η3).
pub type Exponents = [u8; 6];

/// One of the six variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Xi1,
    Xi2,
    Xi3,
    Eta1,
    Eta2,
    Eta3,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::Xi1, Var::Xi2, Var::Xi3, Var::Eta1, Var::Eta2, Var::Eta3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["xi1", "xi2", "xi3", "eta1", "eta2", "eta3"][self.index()]
    }

    /// `ξ_j` for j in 1..=3.
    pub fn xi(j: usize) -> Var {
        Var::ALL[j - 1]
    }

    /// `η_j` for j in 1..=3.
    pub fn eta(j: usize) -> Var {
        Var::ALL[j + 2]
    }
}

/// A polynomial with exact rational coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so the term order is
/// lexicographic with ξ1 > ξ2 > ξ3 > η1 > η2 > η3 and structural equality is
/// polynomial equality. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly6 {
    terms: BTreeMap<Exponents, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl SparsePoly6 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial([0; 6], c)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 6];
        e[v.index()] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Exponents, coef: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exps, coef);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (BigRational, Exponents)>>(iter: I) -> Self {
        let mut acc: HashMap<Exponents, BigRational> = HashMap::new();
        for (c, e) in iter {
            *acc.entry(e).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Exponents, BigRational>) -> Self {
        Self { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &Exponents) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest term under the lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    /// True when every term has the same total degree (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] > 0)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[i] -= 1;
                    (e2, c * rat(e[i] as i64))
                })
                .collect(),
        }
    }

    /// Sets each listed variable to zero.
    pub fn restrict_to_zero(&self, vars: &[Var]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|v| e[v.index()] == 0))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, p: &RationalPoint6) -> BigRational {
        let vals = p.coords();
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    t *= num_traits::pow(vals[k].clone(), ek as usize);
                }
            }
            sum += t;
        }
        sum
    }

    pub fn evaluate_f64(&self, x: &[f64; 6]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (k, &ek) in e.iter().enumerate() {
                    t *= x[k].powi(ek as i32);
                }
                t
            })
            .sum()
    }

    /// True if no ξ variable appears.
    pub fn is_eta_only(&self) -> bool {
        self.terms.keys().all(|e| e[0] == 0 && e[1] == 0 && e[2] == 0)
    }

    /// Groups terms by their ξ exponents; each value is a polynomial in η alone.
    pub fn split_by_xi(&self) -> BTreeMap<[u8; 3], SparsePoly6> {
        let mut out: BTreeMap<[u8; 3], SparsePoly6> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key = [e[0], e[1], e[2]];
            let rest = [0, 0, 0, e[3], e[4], e[5]];
            out.entry(key).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// `ξ1^a ξ2^b ξ3^c` as a polynomial.
    pub fn xi_monomial(m: [u8; 3]) -> Self {
        Self::monomial([m[0], m[1], m[2], 0, 0, 0], BigRational::one())
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Multivariate division by a single divisor under the lex order: when the
    /// division is exact every intermediate leading term is divisible by the
    /// divisor's leading term, so the first failure proves non-divisibility.
    pub fn div_exact(&self, d: &SparsePoly6) -> Option<SparsePoly6> {
        let (de, dc) = d.leading_term()?;
        let (de, dc) = (*de, dc.clone());
        let mut rem = self.clone();
        let mut quot: HashMap<Exponents, BigRational> = HashMap::new();
        while let Some((re, rc)) = rem.leading_term() {
            let mut qe = [0u8; 6];
            for k in 0..6 {
                if re[k] < de[k] {
                    return None;
                }
                qe[k] = re[k] - de[k];
            }
            let qc = rc / &dc;
            rem = &rem - &(d * &SparsePoly6::monomial(qe, qc.clone()));
            *quot.entry(qe).or_insert_with(BigRational::zero) += qc;
        }
        Some(Self::from_map(quot))
    }

    /// Gcd of the numerators over lcm of the denominators, made positive; the
    /// primitive part is `self / content`.
    pub fn content(&self) -> BigRational {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return BigRational::one();
        }
        BigRational::new(g, l)
    }

    /// Integer-coefficient form with positive leading coefficient, and the
    /// factor that was divided out.
    pub fn primitive(&self) -> (BigRational, SparsePoly6) {
        let mut c = self.content();
        if let Some((_, lc)) = self.leading_term() {
            if lc.is_negative() {
                c = -c;
            }
        }
        (c.clone(), self.scale(&c.recip()))
    }
}

impl fmt::Display for SparsePoly6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            let unit = mag.is_one();
            if !unit || is_const {
                write!(f, "{mag}")?;
            }
            let mut first = unit && !is_const;
            for v in Var::ALL {
                let k = e[v.index()];
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", v.name())?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly6({self})")
    }
}

impl<'a> Add<&'a SparsePoly6> for &'a SparsePoly6 {
    type Output = SparsePoly6;
    fn add(self, rhs: &SparsePoly6) -> SparsePoly6 {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        SparsePoly6 { terms }
    }
}

impl<'a> Sub<&'a SparsePoly6> for &'a SparsePoly6 {
    type Output = SparsePoly6;
    fn sub(self, rhs: &SparsePoly6) -> SparsePoly6 {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(BigRational::zero);
            *entry -= c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        SparsePoly6 { terms }
    }
}

impl<'a> Mul<&'a SparsePoly6> for &'a SparsePoly6 {
    type Output = SparsePoly6;
    fn mul(self, rhs: &SparsePoly6) -> SparsePoly6 {
        let mut acc: HashMap<Exponents, BigRational> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for k in 0..6 {
                    e[k] += eb[k];
                }
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        SparsePoly6::from_map(acc)
    }
}

impl Neg for &SparsePoly6 {
    type Output = SparsePoly6;
    fn neg(self) -> SparsePoly6 {
        SparsePoly6 { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<SparsePoly6> for SparsePoly6 {
            type Output = SparsePoly6;
            fn $m(self, rhs: SparsePoly6) -> SparsePoly6 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a SparsePoly6> for SparsePoly6 {
            type Output = SparsePoly6;
            fn $m(self, rhs: &SparsePoly6) -> SparsePoly6 {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<SparsePoly6> for &'a SparsePoly6 {
            type Output = SparsePoly6;
            fn $m(self, rhs: SparsePoly6) -> SparsePoly6 {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly6 {
    type Output = SparsePoly6;
    fn neg(self) -> SparsePoly6 {
        -&self
    }
}

/// Short constructors for the variables, used throughout the crate.
pub mod vars {
    use super::{SparsePoly6, Var};

    pub fn xi(j: usize) -> SparsePoly6 {
        SparsePoly6::var(Var::xi(j))
    }

    pub fn eta(j: usize) -> SparsePoly6 {
        SparsePoly6::var(Var::eta(j))
    }

    pub fn int(c: i64) -> SparsePoly6 {
        SparsePoly6::integer(c)
    }
}

#[cfg(test)]
mod tests {
    use super::vars::*;
    use super::*;

    #[test]
    fn arithmetic_cancels() {
        let a = &xi(1) + &eta(2);
        let b = &xi(1) - &eta(2);
        let prod = &a * &b;
        let expect = &xi(1).pow(2) - &eta(2).pow(2);
        assert_eq!(prod, expect);
        assert!((&prod - &expect).is_zero());
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = &(&xi(1) * &eta(1)) + &int(3);
        let b = &eta(2).pow(2) - &(&xi(3) * &int(2));
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&b), Some(a.clone()));
        assert_eq!(ab.div_exact(&a), Some(b));
        assert_eq!(a.div_exact(&eta(3)), None);
    }

    #[test]
    fn derivative_of_power() {
        let p = eta(1).pow(4);
        assert_eq!(p.derivative(Var::Eta1), &eta(1).pow(3) * &int(4));
        assert!(p.derivative(Var::Xi1).is_zero());
    }

    #[test]
    fn display_is_readable() {
        let p = &(&xi(1).pow(2) * &int(3)) - &(&eta(1) * &eta(3));
        assert_eq!(p.to_string(), "3*xi1^2 - eta1*eta3");
        assert_eq!(SparsePoly6::zero().to_string(), "0");
    }
}
