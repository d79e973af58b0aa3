//! The resonance function of the quadratic interaction and its η-gradient.

use num_rational::BigRational;

use crate::point::RationalPoint6;
use crate::poly::vars::{eta, int, xi};
use crate::poly::SparsePoly6;

/// `φ(ξ,η) = ξ1|ξ|² − (ξ1−η1)|ξ−η|² − η1|η|²`.
pub fn phi_poly() -> SparsePoly6 {
    let norm_xi = &(&xi(1).pow(2) + &xi(2).pow(2)) + &xi(3).pow(2);
    let d = [&xi(1) - &eta(1), &xi(2) - &eta(2), &xi(3) - &eta(3)];
    let norm_d = &(&d[0].pow(2) + &d[1].pow(2)) + &d[2].pow(2);
    &(&(&xi(1) * &norm_xi) - &(&d[0] * &norm_d)) - &(&eta(1) * &eta_norm())
}

/// The closed forms of `∂φ/∂η_j`, written out term by term rather than
/// differentiated, so they can be checked against [`phi_poly`].
pub fn printed_grad_eta_phi() -> [SparsePoly6; 3] {
    let d1 = SparsePoly6::from_terms([
        (q(3), [2, 0, 0, 0, 0, 0]),
        (q(1), [0, 2, 0, 0, 0, 0]),
        (q(1), [0, 0, 2, 0, 0, 0]),
        (q(-6), [1, 0, 0, 1, 0, 0]),
        (q(-2), [0, 1, 0, 0, 1, 0]),
        (q(-2), [0, 0, 1, 0, 0, 1]),
    ]);
    let d2 =
        SparsePoly6::from_terms([(q(2), [1, 1, 0, 0, 0, 0]), (q(-2), [1, 0, 0, 0, 1, 0]), (q(-2), [0, 1, 0, 1, 0, 0])]);
    let d3 =
        SparsePoly6::from_terms([(q(2), [1, 0, 1, 0, 0, 0]), (q(-2), [1, 0, 0, 0, 0, 1]), (q(-2), [0, 0, 1, 1, 0, 0])]);
    [d1, d2, d3]
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn phi(p: &RationalPoint6) -> BigRational {
    let [x1, x2, x3] = p.xi();
    let [e1, e2, e3] = p.eta();
    let nx = x1 * x1 + x2 * x2 + x3 * x3;
    let (d1, d2, d3) = (x1 - e1, x2 - e2, x3 - e3);
    let nd = &d1 * &d1 + &d2 * &d2 + &d3 * &d3;
    let ne = e1 * e1 + e2 * e2 + e3 * e3;
    x1 * nx - d1 * nd - e1 * ne
}

pub fn grad_eta_phi(p: &RationalPoint6) -> [BigRational; 3] {
    let g = printed_grad_eta_phi();
    [g[0].evaluate(p), g[1].evaluate(p), g[2].evaluate(p)]
}

/// `η2² + η3²`
pub fn transverse_norm() -> SparsePoly6 {
    &eta(2).pow(2) + &eta(3).pow(2)
}

/// `|η|²`
pub fn eta_norm() -> SparsePoly6 {
    &eta(1).pow(2) + &transverse_norm()
}

/// `3η1² + η2² + η3²`
pub fn elliptic() -> SparsePoly6 {
    &(&eta(1).pow(2) * &int(3)) + &transverse_norm()
}

/// `3η1² − η2² − η3²`, vanishing on the resonant cone.
pub fn cone() -> SparsePoly6 {
    &(&eta(1).pow(2) * &int(3)) - &transverse_norm()
}

/// `p(η) = |η|² (3η1² − η2² − η3²)²`
pub fn p_eta() -> SparsePoly6 {
    &eta_norm() * &cone().pow(2)
}

/// `9η1⁴ + 18η1²s + s²` with `s = η2² + η3²`.
pub fn quartic_r() -> SparsePoly6 {
    let s = transverse_norm();
    &(&(&eta(1).pow(4) * &int(9)) + &(&(&eta(1).pow(2) * &s) * &int(18))) + &s.pow(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    #[test]
    fn printed_partials_match_derivative() {
        let phi = phi_poly();
        let printed = printed_grad_eta_phi();
        for (j, pj) in printed.iter().enumerate() {
            assert_eq!(&phi.derivative(Var::eta(j + 1)), pj, "partial {}", j + 1);
        }
    }

    #[test]
    fn phi_examples() {
        let p = RationalPoint6::from_fractions([(1, 1), (0, 1), (0, 1)], [(1, 2), (0, 1), (0, 1)]);
        assert_eq!(phi(&p), BigRational::new(3.into(), 4.into()));
        let p = RationalPoint6::from_ints([2, -1, 5], [0, 0, 0]);
        assert_eq!(phi(&p), q(0));
        let p = RationalPoint6::from_ints([2, -1, 5], [2, -1, 5]);
        assert_eq!(phi(&p), q(0));
        let p = RationalPoint6::from_ints([1, 0, 0], [0, 0, 0]);
        assert_eq!(grad_eta_phi(&p), [q(3), q(0), q(0)]);
        let p = RationalPoint6::from_ints([1, 1, 0], [0, 0, 0]);
        assert_eq!(grad_eta_phi(&p)[1], q(2));
    }

    #[test]
    fn phi_poly_agrees_with_pointwise() {
        let p = RationalPoint6::from_fractions([(3, 7), (-2, 5), (1, 1)], [(5, 3), (1, 9), (-4, 1)]);
        assert_eq!(phi_poly().evaluate(&p), phi(&p));
    }
}
