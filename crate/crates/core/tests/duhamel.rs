use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zk_core::data::FinalData;
use zk_core::duhamel::*;
use zk_core::spectral::*;

fn grid() -> Grid3 {
    Grid3::new(16, 8.0 * PI).unwrap()
}

fn random_band(g: Grid3, seed: u64) -> RealField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    from_spectral(&dealias_two_thirds(&to_spectral(&RealField::new(g, data).unwrap()).unwrap()))
}

fn quad(t_max: f64, panels: usize) -> QuadratureSpec {
    QuadratureSpec::default().with_t_max(t_max).with_panels(panels)
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm()
}

fn omega(k: [f64; 3]) -> f64 {
    k[0] * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2])
}

/// `∂1 ∫_t^T V(t−τ)(V(τ)f · V(τ)g) dτ` for `f = cos(a·x)`, `g = cos(b·x)`.
/// Each product term `½cos(k·x + τ(ω_a ± ω_b))`, `k = a ± b`, becomes
/// `½cos(k·x + tω_k + τΦ)` with `Φ = ω_a ± ω_b − ω_k`.
fn plane_wave_b(x: [f64; 3], a: [f64; 3], b: [f64; 3], t: f64, t_max: f64) -> f64 {
    let mut out = 0.0;
    for sign in [1.0, -1.0] {
        let k = [a[0] + sign * b[0], a[1] + sign * b[1], a[2] + sign * b[2]];
        let phi = omega(a) + sign * omega(b) - omega(k);
        let theta = k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + t * omega(k);
        // ∫_t^T −½k1 sin(θ + τΦ) dτ.
        out += if phi.abs() < 1e-14 {
            -0.5 * k[0] * (t_max - t) * theta.sin()
        } else {
            0.5 * k[0] * ((theta + t_max * phi).cos() - (theta + t * phi).cos()) / phi
        };
    }
    out
}

#[test]
fn plane_waves_match_the_closed_form() {
    let g = grid();
    let dk = 2.0 * PI / g.length();
    let a = [2.0 * dk, dk, 0.0];
    let b = [-dk, 2.0 * dk, dk];
    let f = RealField::from_fn(g, |x| (a[0] * x[0] + a[1] * x[1] + a[2] * x[2]).cos());
    let h = RealField::from_fn(g, |x| (b[0] * x[0] + b[1] * x[1] + b[2] * x[2]).cos());
    let (t, t_max) = (3.0, 11.0);
    let q = QuadratureSpec { grading: 1.0, ..quad(t_max, 64) };
    let out = bilinear_b(&f, &h, t, &q).unwrap();
    let got = from_spectral(&out.field);
    let want = RealField::from_fn(g, |x| plane_wave_b(x, a, b, t, t_max));
    let err = got.sub(&want).unwrap().max_abs() / want.max_abs();
    assert!(err < 1e-9, "{err}");
    assert_eq!(out.t_max, t_max);
    assert!(!out.tail_added);
}

#[test]
fn b_is_symmetric_bitwise() {
    let g = grid();
    let (f, h) = (random_band(g, 1), random_band(g, 2));
    let q = quad(9.0, 8);
    assert_eq!(bilinear_b(&f, &h, 4.0, &q).unwrap().field, bilinear_b(&h, &f, 4.0, &q).unwrap().field);
}

#[test]
fn beyond_the_horizon_is_an_error() {
    let g = grid();
    let f = random_band(g, 3);
    assert!(matches!(bilinear_b(&f, &f, 10.0, &quad(9.0, 8)), Err(zk_core::Error::BeyondHorizon { .. })));
}

#[test]
fn checked_b_reports_self_convergence() {
    let g = grid();
    let f = RealField::from_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 4.0).exp() * x[0]);
    let out = bilinear_b_checked(&f, &f, 2.0, &quad(6.0, 32), 1e-5).unwrap();
    let sc = out.self_convergence.unwrap();
    assert!(sc < 1e-5, "{sc}");
    assert!(out.warning.is_none());
    let coarse = bilinear_b_checked(&f, &f, 2.0, &quad(6.0, 2), 1e-12).unwrap();
    assert!(coarse.warning.is_some());
}

#[test]
fn u2_scales_quadratically() {
    let g = grid();
    let u = random_band(g, 7);
    let times = [2.0, 3.0, 4.5];
    let q = quad(8.0, 12);
    let one = u2_series(&u, &times, &q).unwrap();
    let two = u2_series(&u.scale(2.0), &times, &q).unwrap();
    for i in 0..times.len() {
        let a = one.u2_spectrum(i).unwrap().scale(4.0);
        assert!(rel(&two.u2_spectrum(i).unwrap(), &a) < 1e-12);
    }
}

#[test]
fn u2_series_agrees_with_b() {
    let g = grid();
    let u = random_band(g, 8);
    let q = quad(8.0, 12);
    let s = u2_series(&u, &[2.0], &q).unwrap();
    let direct = bilinear_b(&u, &u, 2.0, &q).unwrap().field.scale(-1.0);
    assert!(rel(&s.u2_spectrum(0).unwrap(), &direct) < 1e-13);
}

#[test]
fn product_rules_hold() {
    let g = grid();
    let (f, h) = (random_band(g, 11), random_band(g, 12));
    let r = leibniz_checks(&f, &h, 3.0, &quad(7.0, 6)).unwrap();
    assert_eq!(r.checks.len(), 3);
    assert!(r.max_discrepancy() < 1e-9, "{:?}", r.checks);
}

#[test]
fn duhamel_residual_is_second_order_in_h() {
    let g = Grid3::new(32, 16.0 * PI).unwrap();
    let u = FinalData::gaussian_x1_derivative(1.0, 2.0).build(g).unwrap();
    let q = QuadratureSpec::default().with_t_max(12.0).with_panels(48);
    let a = duhamel_residual(&u, 3.0, 0.04, &q).unwrap().relative;
    let b = duhamel_residual(&u, 3.0, 0.02, &q).unwrap().relative;
    assert!(b < 1e-3, "{b}");
    assert!(a / b > 3.0, "{a} {b}");
}

#[test]
fn seminorms_are_ordered_and_homogeneous() {
    let g = Grid3::new(32, 16.0 * PI).unwrap();
    let f = FinalData::gaussian_x1_derivative(1.0, 1.5).build(g).unwrap();
    let guard = Guard::EpsilonFloor { eps_rel: 1e-3 };
    let x = seminorm_x(&f, 0.5, guard).unwrap();
    let y = seminorm_y(&f, 0.5, guard).unwrap();
    for (a, b) in y.components.iter().zip(&x.components) {
        assert!(a.guarded <= b.guarded, "{} > {}", a.name, b.name);
    }
    let x3 = seminorm_x(&f.scale(-3.0), 0.5, guard).unwrap();
    assert!((x3.value_guarded - 3.0 * x.value_guarded).abs() < 1e-12 * x3.value_guarded);
    assert!(seminorm_x(&f, 1.5, guard).is_err());
}

#[test]
fn even_data_has_infinite_raw_seminorm() {
    // A Gaussian has mass on ξ1 = 0, where |∂1|^{−δ} blows up.
    let g = Grid3::new(16, 8.0 * PI).unwrap();
    let f = FinalData::gaussian(1.0, 1.5).build(g).unwrap();
    let y = seminorm_y(&f, 0.5, Guard::ZeroSetToZero).unwrap();
    assert!(y.raw_is_infinite());
    assert!(y.value_guarded.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn b_is_bilinear(seed in any::<u64>(), a in -3.0f64..3.0, c in -3.0f64..3.0) {
        let g = Grid3::new(8, 8.0 * PI).unwrap();
        let (f, h, k) = (random_band(g, seed), random_band(g, seed ^ 1), random_band(g, seed ^ 2));
        let q = quad(6.0, 4);
        let mix = f.scale(a).add(&h.scale(c)).unwrap();
        let lhs = bilinear_b(&mix, &k, 2.0, &q).unwrap().field;
        let rhs = bilinear_b(&f, &k, 2.0, &q).unwrap().field.scale(a)
            .add(&bilinear_b(&h, &k, 2.0, &q).unwrap().field.scale(c)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2_norm() <= 1e-12 * rhs.l2_norm().max(1e-300));
    }
}
