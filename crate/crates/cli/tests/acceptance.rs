//! Exit criteria at desk scale (n = 64, L = 32π). Each test prints one
//! `PASS`/`FAIL` line; run with `--nocapture` to see them all.
//!
//! The thresholds below are fixed here on purpose and do not read the
//! configurable gates, so loosening a config file cannot turn these green.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zk_cli::config::ExperimentConfig;
use zk_cli::report::RunReport;
use zk_cli::{Command, Experiment};
use zk_core::propagator::free_evolve;
use zk_core::spectral::{dealias_two_thirds, from_spectral, lebesgue_norm, to_spectral, Grid3, RealField};
use zk_symbols::{float_bridge, verify_identity_exact, verify_intermediates, CoefficientName, CoefficientTable};

fn verdict(id: u32, what: &str, pass: bool, detail: String) -> bool {
    println!("criterion {id:>2} {what:<28} {}  {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn out_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zk-acceptance-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// Runs one experiment at the default configuration, once per process.
fn report(e: Experiment) -> &'static RunReport {
    static CELLS: [OnceLock<RunReport>; 6] = [const { OnceLock::new() }; 6];
    let i = Experiment::ALL.iter().position(|x| *x == e).unwrap();
    CELLS[i].get_or_init(|| {
        let cfg = ExperimentConfig::default();
        zk_cli::run(Command::One(e), &cfg, &out_dir(e.name()), true).unwrap()
    })
}

fn measured(r: &RunReport, check: &str) -> f64 {
    r.get(check).unwrap_or_else(|| panic!("no check {check}")).measured
}

#[test]
fn c01_exact_identity() {
    let start = Instant::now();
    let id = verify_identity_exact(&CoefficientTable::printed());
    let inter = verify_intermediates();
    let secs = start.elapsed().as_secs_f64();
    let failing = inter.checks.iter().filter(|c| !c.pass).count();
    let pass = id.pass() && failing == 0 && secs < 10.0;
    let detail = format!(
        "residual terms {}, intermediates {}/{} exact, {secs:.2} s (< 10 s)",
        id.checks[0].residual_terms,
        inter.checks.len() - failing,
        inter.checks.len()
    );
    assert!(verdict(1, "exact identity", pass, detail));
}

#[test]
fn c02_fault_sensitivity() {
    const REQUIRED: usize = 19;
    let printed = CoefficientTable::printed();
    let detected =
        CoefficientName::ALL.iter().filter(|&&n| !verify_identity_exact(&printed.with_sign_flipped(n)).pass()).count();
    let pass = detected >= REQUIRED;
    let detail = format!("{detected}/{REQUIRED} sign flips detected ({} coefficients in the table)", printed.len());
    assert!(verdict(2, "fault sensitivity", pass, detail));
}

#[test]
fn c03_float_bridge() {
    const TOL: f64 = 1e-9;
    let r = float_bridge(&CoefficientTable::printed(), 1000, 20240601);
    let pass = r.max_relative_residual <= TOL;
    assert!(verdict(
        3,
        "float bridge",
        pass,
        format!("max relative {:.3e} (<= {TOL:e}), 1000 points", r.max_relative_residual)
    ));
}

#[test]
fn c04_unitarity_and_group_law() {
    const TOL: f64 = 1e-12;
    let g = Grid3::new(64, 32.0 * PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let raw = RealField::new(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
    let f = from_spectral(&dealias_two_thirds(&to_spectral(&raw).unwrap()));
    let l2 = |h: &RealField| lebesgue_norm(h, 2.0).unwrap();
    let nf = l2(&f);
    let (mut unit, mut group) = (0.0f64, 0.0f64);
    for (t, s) in [(0.37, 1.9), (-4.2, 2.5), (11.0, -30.0)] {
        unit = unit.max((l2(&free_evolve(&f, t).unwrap()) / nf - 1.0).abs());
        let two = free_evolve(&free_evolve(&f, s).unwrap(), t).unwrap();
        let one = free_evolve(&f, t + s).unwrap();
        group = group.max(l2(&two.sub(&one).unwrap()) / nf);
    }
    let pass = unit <= TOL && group <= TOL;
    assert!(verdict(
        4,
        "unitarity and group law",
        pass,
        format!("|ratio - 1| {unit:.2e}, group {group:.2e} (<= {TOL:e})")
    ));
}

#[test]
fn c05_conservation() {
    let r = report(Experiment::Conserve);
    let (m, e) = (measured(r, "mass_drift"), measured(r, "energy_drift"));
    let pass = m <= 1e-10 && e <= 1e-8 && r.config.conserve.t1 == 10.0;
    assert!(verdict(
        5,
        "conservation",
        pass,
        format!("mass {m:.2e} (<= 1e-10), energy {e:.2e} (<= 1e-8), t in [0, 10]")
    ));
}

#[test]
fn c06_linear_decay() {
    let r = report(Experiment::LinearDecay);
    let (b1, b0) = (measured(r, "linear_slope"), measured(r, "flat_slope"));
    let pass = b1 <= -7.0 / 6.0 + 0.2 && b0.abs() <= 0.02 && r.config.linear.a == 0.5;
    assert!(verdict(
        6,
        "linear decay",
        pass,
        format!("b=1 slope {b1:.4} (<= {:.4}), b=0 slope {b0:.2e} (|.| <= 0.02)", -7.0 / 6.0 + 0.2)
    ));
}

#[test]
fn c07_kpv_decay() {
    let s = measured(report(Experiment::KpvDecay), "kpv_slope");
    assert!(verdict(7, "projected decay", s <= -1.5 + 0.3, format!("slope {s:.4} (<= -1.2)")));
}

#[test]
fn c08_bilinear_decay() {
    let r = report(Experiment::BilinearDecay);
    let (s, b) = (measured(r, "u2_slope"), measured(r, "u2_bilinearity"));
    let pass = s <= -1.0 + 0.2 && b <= 1e-10 && r.config.physics.delta == 0.5;
    assert!(verdict(8, "bilinear decay", pass, format!("slope {s:.4} (<= -0.8), bilinearity {b:.2e} (<= 1e-10)")));
}

#[test]
fn c09_u1_decay() {
    let s = measured(report(Experiment::BilinearDecay), "u1_slope");
    assert!(verdict(9, "u1 decay", s <= -1.0 + 0.2, format!("W4,inf slope {s:.4} (<= -0.8)")));
}

#[test]
fn c10_leibniz_expansions() {
    let d = measured(report(Experiment::BilinearDecay), "leibniz");
    assert!(verdict(10, "product rules", d <= 1e-9, format!("max relative {d:.2e} (<= 1e-9)")));
}

#[test]
fn c11_duhamel_residual() {
    let r = report(Experiment::BilinearDecay);
    let d = measured(r, "duhamel_residual");
    let pass = d <= 1e-4 && r.config.bilinear.residual_h == 0.01;
    assert!(verdict(11, "Duhamel residual", pass, format!("relative {d:.2e} (<= 1e-4), h = 0.01")));
}

#[test]
fn c12_scattering_construction() {
    let r = report(Experiment::Scatter);
    let ok = measured(r, "construction_converged") == 1.0;
    let res = measured(r, "forward_residual");
    let slope = measured(r, "h3_decay_slope");
    let pass = r.errors.is_empty() && ok && res <= 1e-4 && slope <= -0.5 + 0.15;
    let detail = format!("converged {ok}, residual {res:.2e} (<= 1e-4), H3 slope {slope:.4} (<= -0.35)");
    assert!(verdict(12, "scattering construction", pass, detail));
}

#[test]
fn c13_cross_method_agreement() {
    let d = measured(report(Experiment::Scatter), "mode_agreement");
    assert!(verdict(13, "backward vs Picard", d <= 1e-4, format!("relative L2 at t = T {d:.2e} (<= 1e-4)")));
}

#[test]
fn c14_determinism() {
    let mut cfg = ExperimentConfig::from_toml_str(
        "[grid]\nn = 32\nL = 50.26548245743669\n[physics]\nT = 2.0\nT_max = 12.0\n[conserve]\nt1 = 1.0\n\
         [algebra]\nbound_samples = 200\nfloat_points = 100\n",
    )
    .unwrap();
    cfg.seed = 99;
    let a = zk_cli::run(Command::All, &cfg, &out_dir("det-a"), true).unwrap();
    let b = zk_cli::run(Command::All, &cfg, &out_dir("det-b"), true).unwrap();
    let pass = a.canonical_json() == b.canonical_json();
    assert!(verdict(
        14,
        "determinism",
        pass,
        format!("{} checks, {} scans, reports identical: {pass}", a.checks.len(), a.scans.len())
    ));
}
