use serde_json::json;
use zk_core::propagator::{kpv_decay_scan, linear_decay_scan};
use zk_core::spectral::{apply_multiplier, to_spectral, MultiplierSpec};

use super::{build, core_err, Ctx, Experiment};
use crate::plot::write_scan_table;
use crate::report::{CheckRecord, Relation, ScanRecord};
use crate::RunError;

pub(super) fn run_linear(ctx: &mut Ctx) -> Result<(), RunError> {
    const NAME: &str = "linear-decay";
    let cfg = ctx.cfg;
    let u = build(&cfg.linear.data, ctx.grid(), "linear.data")?;
    let settings = cfg.scan.settings();
    let a = cfg.linear.a;
    ctx.say(NAME, format!("b = 1 and b = 0 scans, a = {a}"));
    let err = |e| core_err(e, "linear");
    let b1 = linear_decay_scan(&u, a, 1.0, &settings).map_err(err)?;
    let b0 = linear_decay_scan(&u, a, 0.0, &settings).map_err(err)?;
    let doubled = linear_decay_scan(&u.scale(2.0), a, 1.0, &settings).map_err(err)?;
    write_scan_table(&ctx.out.join("linear_b1.csv"), &b1, false)?;
    write_scan_table(&ctx.out.join("linear_b0.csv"), &b0, false)?;

    let g = &cfg.gates;
    let r = &mut *ctx.report;
    r.check(CheckRecord::new(
        NAME,
        "linear_slope",
        Relation::AtMost,
        b1.target_exponent,
        b1.fitted_exponent,
        g.linear_slope_tol,
    ));
    r.check(CheckRecord::new(NAME, "flat_slope", Relation::Within, 0.0, b0.fitted_exponent, g.flat_slope_tol));
    r.check(CheckRecord::new(
        NAME,
        "linear_scaling_invariance",
        Relation::Within,
        0.0,
        (doubled.fitted_exponent - b1.fitted_exponent).abs(),
        1e-12,
    ));
    r.scans.push(ScanRecord::from_scan("linear_b1", &b1));
    r.scans.push(ScanRecord::from_scan("linear_b0", &b0));
    ctx.detail(Experiment::LinearDecay, json!({ "b1": b1, "b0": b0 }));
    Ok(())
}

pub(super) fn run_kpv(ctx: &mut Ctx) -> Result<(), RunError> {
    const NAME: &str = "kpv-decay";
    let cfg = ctx.cfg;
    let u = build(&cfg.kpv.data, ctx.grid(), "kpv.data")?;
    ctx.say(NAME, format!("cone band {}", cfg.kpv.band));
    let err = |e| core_err(e, "kpv");
    let scan = kpv_decay_scan(&u, cfg.kpv.band, &cfg.scan.settings()).map_err(err)?;
    write_scan_table(&ctx.out.join("kpv.csv"), &scan, false)?;

    // P is a 0/1 multiplier, so applying it twice changes nothing.
    let p = MultiplierSpec::cone_band_projection(cfg.kpv.band);
    let once = apply_multiplier(&to_spectral(&u).map_err(err)?, &p).map_err(err)?;
    let twice = apply_multiplier(&once, &p).map_err(err)?;
    let idempotence = twice.sub(&once).map_err(err)?.l2_norm();

    let r = &mut *ctx.report;
    r.check(CheckRecord::new(
        NAME,
        "kpv_slope",
        Relation::AtMost,
        scan.target_exponent,
        scan.fitted_exponent,
        cfg.gates.kpv_slope_tol,
    ));
    r.check(CheckRecord::new(NAME, "kpv_fit_residual", Relation::AtMost, 0.0, scan.residual, 0.1).informational());
    r.check(CheckRecord::new(NAME, "projection_idempotent", Relation::Within, 0.0, idempotence, 0.0));
    r.scans.push(ScanRecord::from_scan("kpv", &scan));
    ctx.detail(Experiment::KpvDecay, json!({ "scan": scan }));
    Ok(())
}
