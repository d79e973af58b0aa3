use std::f64::consts::PI;

use zk_core::data::FinalData;
use zk_core::duhamel::QuadratureSpec;
use zk_core::scattering::*;
use zk_core::spectral::*;
use zk_core::Error;

fn grid() -> Grid3 {
    Grid3::new(32, 16.0 * PI).unwrap()
}

fn data(amplitude: f64) -> RealField {
    FinalData::gaussian_x1_derivative(amplitude, 2.0).build(grid()).unwrap()
}

fn small_config() -> SolverConfig {
    SolverConfig { t_start: 2.0, t_max: 12.0, dt: 0.25, frame_every: 2, ..SolverConfig::default() }
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm()
}

#[test]
fn zero_data_stays_zero() {
    let z = RealField::zeros(grid());
    let run = forward_solve_zk(&z, 0.0, 1.0, 0.1).unwrap();
    assert!(run.frames.iter().all(|f| f.l2_norm() == 0.0));
    let cfg = small_config();
    let mut setup = ScatteringSetup::new(&z, &cfg, &QuadratureSpec::default()).unwrap();
    for mode in [SolveMode::BackwardIntegrate, SolveMode::Picard] {
        let traj = setup.solve(mode).unwrap();
        for i in 0..traj.len() {
            assert_eq!(traj.w_spectrum(i).unwrap().l2_norm(), 0.0);
        }
        assert_eq!(traj.metadata.solver.as_ref().unwrap().z_norm.value, 0.0);
    }
}

#[test]
fn short_run_conserves_mass_and_energy() {
    let u0 = FinalData::gaussian(1.0, 2.0).build(grid()).unwrap();
    let run = forward_solve_zk_with(&u0, 0.0, 2.0, &ForwardOptions { dt: 0.02, save_every: 10, blowup_factor: 10.0 })
        .unwrap();
    assert_eq!(run.times.len(), 11);
    assert!(run.mass_drift() < 1e-10, "{}", run.mass_drift());
    assert!(run.energy_drift() < 1e-8, "{}", run.energy_drift());
}

#[test]
fn rk4_converges_at_fourth_order() {
    let u0 = FinalData::gaussian(2.0, 2.0).build(grid()).unwrap();
    let at = |dt: f64| forward_solve_zk(&u0, 0.0, 1.0, dt).unwrap().last().clone();
    let (a, b, c) = (at(0.2), at(0.1), at(0.05));
    let e1 = a.sub(&b).unwrap().l2_norm();
    let e2 = b.sub(&c).unwrap().l2_norm();
    let order = (e1 / e2).log2();
    assert!(order >= 3.5, "order {order} ({e1:e}, {e2:e})");
}

#[test]
fn blow_up_detector_fires() {
    let u0 = FinalData::gaussian(2.0, 2.0).build(grid()).unwrap();
    let opts = ForwardOptions { dt: 0.05, save_every: 1, blowup_factor: 1.0 + 1e-9 };
    assert!(matches!(forward_solve_zk_with(&u0, 0.0, 1.0, &opts), Err(Error::BlowUp { .. })));
}

#[test]
fn modes_agree_and_validate() {
    let cfg = small_config();
    let u = data(0.2);
    let mut setup = ScatteringSetup::new(&u, &cfg, &QuadratureSpec::default()).unwrap();
    let bi = setup.solve(SolveMode::BackwardIntegrate).unwrap();
    let pic = setup.solve(SolveMode::Picard).unwrap();
    let d = rel(&pic.w_spectrum(0).unwrap(), &bi.w_spectrum(0).unwrap());
    assert!(d < 1e-4, "{d}");
    let report = pic.metadata.solver.as_ref().unwrap().picard.clone().unwrap();
    assert!(report.converged);
    assert!(report.ratios.iter().all(|r| *r < 1.0), "{:?}", report.ratios);

    let v = validate_scattering(&bi, &cfg).unwrap();
    assert!(v.residual < 1e-4, "{}", v.residual);
    assert!(v.triangle_holds);
    assert_eq!(v.terminal_w, 0.0);
    // u = w + u₁ + u₂ at every stored time.
    for i in [0, bi.len() / 2] {
        let sum = bi
            .w_spectrum(i)
            .unwrap()
            .add(&bi.u1_spectrum(i).unwrap())
            .unwrap()
            .add(&bi.u2_spectrum(i).unwrap())
            .unwrap();
        assert!(rel(&bi.u_spectrum(i).unwrap(), &sum) < 1e-15);
    }
}

#[test]
fn contraction_ratio_is_even_in_the_data() {
    let cfg = SolverConfig { mode: SolveMode::Picard, ..small_config() };
    let q = QuadratureSpec::default();
    let ratios = |a: f64| {
        let traj = construct_w(&data(a), &cfg, &q).unwrap();
        traj.metadata.solver.unwrap().picard.unwrap().ratios
    };
    let (p, m) = (ratios(0.2), ratios(-0.2));
    for (a, b) in p.iter().zip(&m).take(4) {
        assert!((a - b).abs() <= 0.05 * a.abs(), "{p:?} vs {m:?}");
    }
}

#[test]
fn regularization_converges() {
    let u = data(0.2);
    let q = QuadratureSpec::default();
    let w_at_t = |lambda: f64, mu: f64| {
        let cfg = SolverConfig { lambda, mu, ..small_config() };
        construct_w(&u, &cfg, &q).unwrap().w_spectrum(0).unwrap()
    };
    let exact = w_at_t(0.0, 0.0);
    let errs: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&e| rel(&w_at_t(e / 10.0, e), &exact)).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 0.5 * errs[0], "{errs:?}");
}

#[test]
fn large_data_diverges() {
    let cfg = SolverConfig { mode: SolveMode::Picard, picard_max_iter: 40, ..small_config() };
    match construct_w(&data(40.0), &cfg, &QuadratureSpec::default()) {
        Err(Error::PicardDivergence { ratios }) => assert!(ratios.iter().rev().take(3).all(|r| *r >= 1.0)),
        Err(Error::NonFiniteStep { .. }) => {}
        other => panic!("expected divergence, got {:?}", other.map(|t| t.metadata.solver.unwrap().picard)),
    }
}

#[test]
fn config_errors_name_the_field() {
    let cfg = SolverConfig { t_max: 1.0, ..small_config() };
    match construct_w(&data(0.1), &cfg, &QuadratureSpec::default()) {
        Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "physics.T_max"),
        other => panic!("{:?}", other.err()),
    }
}
