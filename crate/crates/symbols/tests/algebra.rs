use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use zk_symbols::identity::cleared_identity;
use zk_symbols::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn every_single_sign_flip_is_detected() {
    let printed = CoefficientTable::printed();
    assert_eq!(printed.len(), CoefficientName::ALL.len());
    let mut detected = 0;
    for name in CoefficientName::ALL {
        let rep = verify_identity_exact(&printed.with_sign_flipped(name));
        if !rep.pass() {
            assert!(rep.checks[0].residual_terms > 0);
            detected += 1;
        }
    }
    assert_eq!(detected, 18);
}

#[test]
fn cleared_residual_vanishes_on_axis_slice() {
    let (den, residual) = cleared_identity(&CoefficientTable::printed());
    assert!(!den.is_zero());
    let slice = residual.restrict_to_zero(&[Var::Xi2, Var::Xi3, Var::Eta2, Var::Eta3]);
    assert!(slice.is_zero());
}

#[test]
fn float_bridge_is_tight() {
    let rep = float_bridge(&CoefficientTable::printed(), 1000, 7);
    assert!(rep.max_relative_residual <= 1e-9, "{}", rep.max_relative_residual);
}

#[test]
fn bound_sampling_flags_degree_mismatch() {
    let rep = sample_coefficient_bounds(2000, 11);
    assert_eq!(rep.entries.len(), 32);
    for e in &rep.entries {
        assert!(e.max_ratio.is_finite() && e.max_ratio > 0.0, "{}", e.name);
        // Ratios scale along rays exactly as the degree count predicts.
        assert!((e.scaling_exponent - e.degree_mismatch as f64).abs() < 1e-6, "{}", e.name);
        assert_eq!(e.unbounded, e.degree_mismatch != 0, "{}", e.name);
    }
    // B0k is homogeneous of degree -3 while its majorant has degree -2.
    for name in ["B01", "B02", "B03"] {
        assert!(rep.get(name).unwrap().unbounded);
    }
    assert!(!rep.get("A0").unwrap().unbounded);
}

#[test]
fn a0_is_homogeneous_of_degree_minus_two() {
    let a0 = coefficient(CoefficientName::A0);
    assert!(a0.numerator().is_homogeneous() && a0.denominator().is_homogeneous());
    let deg = a0.numerator().total_degree().unwrap() as i32 - a0.denominator().total_degree().unwrap() as i32;
    assert_eq!(deg, -2);
}

#[test]
fn rederived_table_is_authoritative_and_matches() {
    let (derived, diff) = rederive_coefficients();
    assert!(diff.derived_identity_holds);
    assert!(diff.is_empty());
    assert_eq!(diff.rows.len(), 18);
    let p = RationalPoint6::from_ints([1, 2, 3], [1, 1, 1]);
    assert_eq!(derived.psi_time(&p).unwrap() + derived.psi_space(&p).unwrap(), q(1, 1));
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn point() -> impl Strategy<Value = RationalPoint6> {
    proptest::array::uniform6(small_rational()).prop_map(|c| {
        let [a, b, cc, d, e, f] = c;
        RationalPoint6::new([a, b, cc], [d, e, f])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_holds_at_rational_points(p in point()) {
        let t = CoefficientTable::printed();
        match (t.psi_time(&p), t.psi_space(&p)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a + b, p.xi()[0].clone()),
            (Err(e), _) | (_, Err(e)) => {
                let [e1, e2, e3] = p.eta();
                let n = e1 * e1 + e2 * e2 + e3 * e3;
                prop_assert!(matches!(e, DomainError::Vanishing(_)));
                prop_assert!(n == q(0, 1) || (q(3, 1) * e1 * e1 - e2 * e2 - e3 * e3) == q(0, 1));
            }
        }
    }

    #[test]
    fn phi_vanishes_on_degenerate_sets(p in point()) {
        let x: [BigRational; 3] = p.xi().map(|v| v.clone());
        let zero = q(0, 1);
        let at_zero = RationalPoint6::new(x.clone(), [zero.clone(), zero.clone(), zero]);
        prop_assert_eq!(phi(&at_zero), q(0, 1));
        let diag = RationalPoint6::new(x.clone(), x);
        prop_assert_eq!(phi(&diag), q(0, 1));
        prop_assert_eq!(phi_poly().evaluate(&p), phi(&p));
    }

    #[test]
    fn coefficients_ignore_xi(p in point(), lam in small_rational()) {
        let [x1, x2, x3] = p.xi();
        let scaled = RationalPoint6::new(
            [lam * x1, x2.clone(), x3.clone()],
            p.eta().map(|v| v.clone()),
        );
        let t = CoefficientTable::printed();
        for name in [CoefficientName::A0, CoefficientName::A1, CoefficientName::A2, CoefficientName::A3] {
            let a = t.get(name).evaluate(&p);
            let b = t.get(name).evaluate(&scaled);
            prop_assert_eq!(a.ok(), b.ok());
        }
    }

    #[test]
    fn polynomial_ring_laws(a in point(), b in point()) {
        // Build small polynomials from the sampled coordinates.
        let mk = |p: &RationalPoint6| {
            let c = p.coords();
            &(&SparsePoly6::var(Var::Xi1).scale(&c[0]) + &SparsePoly6::var(Var::Eta2).scale(&c[4]))
                + &SparsePoly6::constant(c[2].clone())
        };
        let (f, g) = (mk(&a), mk(&b));
        let h = &SparsePoly6::var(Var::Eta3) + &SparsePoly6::integer(1);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        let fh = &f * &h;
        prop_assert_eq!(fh.div_exact(&h), Some(f.clone()));
        prop_assert!((&f - &f).is_zero());
    }
}
