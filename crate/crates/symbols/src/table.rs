//! The coefficient table of the null-structure identity
//! `ξ1 = ψ_time(ξ,η) + ψ_space(ξ,η)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::point::{check_p_domain, DomainError, RationalPoint6};
use crate::poly::vars::{eta, int};
use crate::poly::SparsePoly6;
use crate::rational::RationalFn6;
use crate::resonance::{elliptic, p_eta, phi_poly, printed_grad_eta_phi, quartic_r, transverse_norm};

/// The four quantities the identity is linear in: `φ` and `∂φ/∂η_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Basis {
    Phi,
    D1,
    D2,
    D3,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::Phi, Basis::D1, Basis::D2, Basis::D3];

    pub fn poly(self) -> SparsePoly6 {
        match self {
            Basis::Phi => phi_poly(),
            Basis::D1 | Basis::D2 | Basis::D3 => {
                let [a, b, c] = printed_grad_eta_phi();
                [a, b, c][self as usize - 1].clone()
            }
        }
    }

    pub fn name(self) -> &'static str {
        ["phi", "d_eta1 phi", "d_eta2 phi", "d_eta3 phi"][self as usize]
    }
}

macro_rules! names {
    ($($id:ident => $label:literal, $basis:ident, $m:expr;)*) => {
        /// Coefficient slots of the identity, each attached to one basis
        /// function and one ξ-monomial.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum CoefficientName { $($id),* }

        impl CoefficientName {
            pub const ALL: [CoefficientName; 18] = [$(CoefficientName::$id),*];

            pub fn label(self) -> &'static str {
                match self { $(CoefficientName::$id => $label),* }
            }

            /// The basis function and ξ-monomial this coefficient multiplies.
            pub fn slot(self) -> (Basis, [u8; 3]) {
                match self { $(CoefficientName::$id => (Basis::$basis, $m)),* }
            }
        }
    };
}

names! {
    A0 => "A0", Phi, [0, 0, 0];
    B01 => "B01", Phi, [1, 0, 0];
    B02 => "B02", Phi, [0, 1, 0];
    B03 => "B03", Phi, [0, 0, 1];
    A1 => "A1", D1, [0, 0, 0];
    B11 => "B11", D1, [1, 0, 0];
    B12 => "B12", D1, [0, 1, 0];
    B13 => "B13", D1, [0, 0, 1];
    A2 => "A2", D2, [0, 0, 0];
    B21 => "B21", D2, [1, 0, 0];
    B22 => "B22", D2, [0, 1, 0];
    C21 => "C21", D2, [0, 1, 1];
    C22 => "C22", D2, [0, 0, 2];
    A3 => "A3", D3, [0, 0, 0];
    B31 => "B31", D3, [1, 0, 0];
    B32 => "B32", D3, [0, 0, 1];
    C31 => "C31", D3, [0, 1, 1];
    C32 => "C32", D3, [0, 2, 0];
}

impl CoefficientName {
    pub fn parse(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.label().eq_ignore_ascii_case(label))
    }

    pub fn from_slot(basis: Basis, m: [u8; 3]) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.slot() == (basis, m))
    }
}

impl fmt::Display for CoefficientName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A full assignment of rational functions in η to the 18 slots.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    entries: BTreeMap<CoefficientName, RationalFn6>,
}

fn frac(num: SparsePoly6, den: &SparsePoly6) -> RationalFn6 {
    RationalFn6::new(num, den.clone()).expect("p(η) is a nonzero polynomial")
}

impl CoefficientTable {
    /// The closed forms as printed, with `p = |η|²(3η1²−η2²−η3²)²`.
    ///
    /// `A_j` for j = 2, 3 is read with the factor `η_j`.
    pub fn printed() -> Self {
        use CoefficientName::*;
        let s = transverse_norm();
        let q = elliptic();
        let p = p_eta();
        let p3 = &p * &int(3);
        let e = |j| eta(j);
        let mut m = BTreeMap::new();
        let a0 = &(&(&eta(1).pow(4) * &int(9)) + &(&(&eta(1).pow(2) * &s) * &int(30))) + &(&s.pow(2) * &int(5));
        m.insert(A0, frac(a0, &p3));
        m.insert(A1, frac(-(&e(1) * &quartic_r()), &p3));
        let sq = &s * &q;
        for (name, j) in [(A2, 2), (A3, 3)] {
            m.insert(name, frac(&(&e(j) * &sq) * &int(-4), &p3));
        }
        m.insert(B01, frac(&(&e(1) * &s) * &int(-4), &p));
        for (name, k) in [(B02, 2), (B03, 3)] {
            m.insert(name, frac(&(&e(k) * &q) * &int(-2), &p3));
        }
        m.insert(B11, frac(&(&e(1).pow(2) * &s) * &int(4), &p));
        for (name, k) in [(B12, 2), (B13, 3)] {
            m.insert(name, frac(&(&(&e(1) * &e(k)) * &q) * &int(2), &p3));
        }
        for (name, j) in [(B21, 2), (B31, 3)] {
            m.insert(name, frac(&(&(&e(1) * &e(j)) * &s) * &int(4), &p));
        }
        for name in [B22, B32] {
            m.insert(name, frac(&sq * &int(2), &p3));
        }
        for (name, j) in [(C21, 2), (C31, 3)] {
            m.insert(name, frac(&(&e(5 - j) * &q) * &int(-2), &p3));
        }
        for (name, j) in [(C22, 2), (C32, 3)] {
            m.insert(name, frac(&(&e(j) * &q) * &int(2), &p3));
        }
        Self { entries: m }
    }

    pub(crate) fn from_entries(entries: BTreeMap<CoefficientName, RationalFn6>) -> Self {
        Self { entries }
    }

    pub fn get(&self, name: CoefficientName) -> &RationalFn6 {
        &self.entries[&name]
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoefficientName, &RationalFn6)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A copy with one coefficient negated.
    pub fn with_sign_flipped(&self, name: CoefficientName) -> Self {
        let mut out = self.clone();
        let v = -&out.entries[&name];
        out.entries.insert(name, v);
        out
    }

    /// Exact value of one coefficient at `η`.
    pub fn evaluate(&self, name: CoefficientName, eta: [&BigRational; 3]) -> Result<BigRational, DomainError> {
        check_p_domain(eta)?;
        let zero = BigRational::zero();
        let p =
            RationalPoint6::new([zero.clone(), zero.clone(), zero], [eta[0].clone(), eta[1].clone(), eta[2].clone()]);
        self.get(name).evaluate(&p)
    }

    fn basis_combination(&self, basis: Basis, p: &RationalPoint6) -> Result<BigRational, DomainError> {
        check_p_domain(p.eta())?;
        let mut sum = BigRational::zero();
        for name in CoefficientName::ALL.into_iter().filter(|n| n.slot().0 == basis) {
            let m = SparsePoly6::xi_monomial(name.slot().1).evaluate(p);
            sum += m * self.get(name).evaluate(p)?;
        }
        Ok(sum * basis.poly().evaluate(p))
    }

    pub fn psi_time(&self, p: &RationalPoint6) -> Result<BigRational, DomainError> {
        self.basis_combination(Basis::Phi, p)
    }

    pub fn psi_space(&self, p: &RationalPoint6) -> Result<BigRational, DomainError> {
        let mut sum = BigRational::zero();
        for b in [Basis::D1, Basis::D2, Basis::D3] {
            sum += self.basis_combination(b, p)?;
        }
        Ok(sum)
    }

    /// `(ψ_time, ψ_space)` in double precision, with no domain check.
    pub fn psi_f64(&self, x: &[f64; 6]) -> (f64, f64) {
        let mut by_basis = [0.0; 4];
        for (name, c) in self.iter() {
            let (basis, m) = name.slot();
            let mono = x[0].powi(m[0] as i32) * x[1].powi(m[1] as i32) * x[2].powi(m[2] as i32);
            by_basis[basis as usize] += mono * c.evaluate_f64(x);
        }
        let vals: Vec<f64> = Basis::ALL.iter().map(|b| b.poly().evaluate_f64(x)).collect();
        let time = by_basis[0] * vals[0];
        let space = by_basis[1] * vals[1] + by_basis[2] * vals[2] + by_basis[3] * vals[3];
        (time, space)
    }
}

/// Printed closed form of one coefficient.
pub fn coefficient(name: CoefficientName) -> RationalFn6 {
    CoefficientTable::printed().get(name).clone()
}

/// Printed coefficient evaluated at `η`.
pub fn evaluate_coefficient(name: CoefficientName, eta: [&BigRational; 3]) -> Result<BigRational, DomainError> {
    CoefficientTable::printed().evaluate(name, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::SingularFactor;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn printed_values() {
        let one = q(1, 1);
        let zero = q(0, 1);
        let a0 = evaluate_coefficient(CoefficientName::A0, [&one, &zero, &zero]).unwrap();
        assert_eq!(a0, q(1, 3));
        let origin = evaluate_coefficient(CoefficientName::A0, [&zero, &zero, &zero]);
        assert_eq!(origin, Err(DomainError::Vanishing(SingularFactor::EtaNorm)));
        let b01 = evaluate_coefficient(CoefficientName::B01, [&one, &one, &zero]).unwrap();
        assert_eq!(b01, q(-1, 2));
    }

    #[test]
    fn c_symmetry() {
        let c22 = coefficient(CoefficientName::C22).mul_poly(&eta(3));
        let c32 = coefficient(CoefficientName::C32).mul_poly(&eta(2));
        assert!(c22.equals(&c32));
    }

    #[test]
    fn identity_at_point() {
        let t = CoefficientTable::printed();
        let p = RationalPoint6::from_ints([1, 2, 3], [1, 1, 1]);
        let sum = t.psi_time(&p).unwrap() + t.psi_space(&p).unwrap();
        assert_eq!(sum, q(1, 1));
        let on_resonance = RationalPoint6::from_ints([1, 1, 1], [1, 1, 1]);
        assert_eq!(t.psi_time(&on_resonance).unwrap(), q(0, 1));
    }

    #[test]
    fn excluded_set_named() {
        let t = CoefficientTable::printed();
        let p = RationalPoint6::from_ints([1, 2, 3], [0, 0, 0]);
        assert_eq!(t.psi_time(&p), Err(DomainError::Vanishing(SingularFactor::EtaNorm)));
    }
}
