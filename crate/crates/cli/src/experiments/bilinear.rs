use serde_json::json;
use zk_core::duhamel::{
    bilinear_decay_scan, duhamel_residual, leibniz_checks, u1_decay_scan, u2_series, QuadratureSpec,
};

use super::{build, core_err, Ctx, Experiment};
use crate::plot::write_scan_table;
use crate::report::{CheckRecord, Relation, ScanRecord};
use crate::RunError;

const NAME: &str = "bilinear-decay";

pub(super) fn run(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let b = &cfg.bilinear;
    let g = &cfg.gates;
    let err = |e| core_err(e, "bilinear");
    let grid = ctx.grid();
    let u = build(&b.data, grid, "bilinear.data")?;
    let other = build(&b.residual_data, grid, "bilinear.residual_data")?;
    let quad = cfg.quadrature.spec();
    let settings = cfg.scan.settings();
    let delta = cfg.physics.delta;

    ctx.say(NAME, "u2 decay scan");
    let u2 = bilinear_decay_scan(&u, delta, &settings, &quad, b.guard).map_err(err)?;
    write_scan_table(&ctx.out.join("bilinear_u2.csv"), &u2.scan, true)?;

    ctx.say(NAME, "bilinearity");
    let one = u2_series(&u, &[b.scaling_t], &quad).map_err(err)?.u2_spectrum(0).map_err(err)?.scale(4.0);
    let two = u2_series(&u.scale(2.0), &[b.scaling_t], &quad).map_err(err)?.u2_spectrum(0).map_err(err)?;
    let scaling = two.sub(&one).map_err(err)?.l2_norm() / one.l2_norm();

    ctx.say(NAME, "u1 decay scan");
    let u1 = u1_decay_scan(&u, delta, &settings, b.guard).map_err(err)?;
    write_scan_table(&ctx.out.join("u1_decay.csv"), &u1.scan, true)?;

    ctx.say(NAME, "product rules");
    let lq = QuadratureSpec { rule: quad.rule, ..QuadratureSpec::default() }
        .with_panels(b.leibniz_panels)
        .with_t_max(b.leibniz_t_max);
    let leibniz = leibniz_checks(&u, &other, b.leibniz_t, &lq).map_err(err)?;

    ctx.say(NAME, "Duhamel residual");
    let residual = duhamel_residual(&other, b.residual_t, b.residual_h, &quad).map_err(err)?;

    let r = &mut *ctx.report;
    // The rate is checked against -1; the sharper -1 - δ/3 is the scan target.
    r.check(CheckRecord::new(NAME, "u2_slope", Relation::AtMost, -1.0, u2.scan.fitted_exponent, g.bilinear_slope_tol));
    r.check(CheckRecord::new(
        NAME,
        "u2_constant_spread",
        Relation::AtMost,
        g.constant_spread,
        u2.constant_spread(),
        0.0,
    ));
    r.check(CheckRecord::new(NAME, "u2_bilinearity", Relation::AtMost, 0.0, scaling, g.bilinearity));
    r.check(CheckRecord::new(NAME, "u1_slope", Relation::AtMost, -1.0, u1.scan.fitted_exponent, g.u1_slope_tol));
    r.check(CheckRecord::new(NAME, "leibniz", Relation::AtMost, 0.0, leibniz.max_discrepancy(), g.leibniz));
    r.check(CheckRecord::new(NAME, "duhamel_residual", Relation::AtMost, 0.0, residual.relative, g.duhamel_residual));
    r.scans.push(ScanRecord::from_scan("u2_decay", &u2.scan));
    r.scans.push(ScanRecord::from_scan("u1_decay", &u1.scan));
    ctx.detail(
        Experiment::BilinearDecay,
        json!({
            "u2": u2,
            "u1": u1,
            "bilinearity": { "t": b.scaling_t, "relative_l2": scaling },
            "leibniz": leibniz,
            "residual": residual,
        }),
    );
    Ok(())
}
