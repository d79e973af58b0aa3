use serde::Serialize;
use zk_core::propagator::DecayScanResult;
use zk_core::scattering::{
    validate_scattering_with, PicardReport, ScatteringSetup, SolveMode, ValidationOptions, ValidationReport, ZNorm,
};
use zk_core::spectral::write_snapshot;
use zk_core::trajectory::TrajectorySet;

use super::{build, core_err, Ctx, Experiment};
use crate::report::{CheckRecord, Relation, ScanRecord};
use crate::RunError;

const NAME: &str = "scatter";

/// The summary written next to the trajectory.
#[derive(Serialize)]
struct Summary<'a> {
    mode: SolveMode,
    fitted_alpha_slope: f64,
    fit_window: (f64, f64),
    residual: f64,
    z_norm: &'a ZNorm,
    contraction_ratios: Vec<f64>,
    tail_estimates: &'a [f64],
    mode_difference: Option<f64>,
    triangle_max_ratio: f64,
    terminal_w: f64,
    wrap_time: f64,
    notes: &'a [String],
}

fn other(mode: SolveMode) -> SolveMode {
    match mode {
        SolveMode::BackwardIntegrate => SolveMode::Picard,
        SolveMode::Picard => SolveMode::BackwardIntegrate,
    }
}

fn label(mode: SolveMode) -> &'static str {
    match mode {
        SolveMode::BackwardIntegrate => "backward-integrate",
        SolveMode::Picard => "picard",
    }
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let err = |e| core_err(e, "physics");
    let u_plus = build(&cfg.data, ctx.grid(), "data")?;
    let solver = cfg.physics.solver();
    let quad = cfg.quadrature.spec();

    ctx.say(NAME, format!("tabulating u2 on [{}, {}], {} steps", solver.t_start, solver.t_max, solver.steps()));
    let mut setup = ScatteringSetup::new(&u_plus, &solver, &quad).map_err(err)?;
    ctx.say(NAME, format!("solving for w ({})", label(solver.mode)));
    let main = setup.solve(solver.mode).map_err(err)?;

    let opts = ValidationOptions {
        residual_span: cfg.scatter.residual_span,
        residual_dt: None,
        fit_window: cfg.scatter.fit_window.clone(),
        wrap_mass_fraction: cfg.scan.wrap_mass_fraction,
    };
    ctx.say(NAME, "validating against the forward flow");
    let v = validate_scattering_with(&main, &solver, &opts).map_err(err)?;

    let (cross, mode_difference) = if cfg.scatter.cross_check {
        ctx.say(NAME, format!("cross-check ({})", label(other(solver.mode))));
        let t = setup.solve(other(solver.mode)).map_err(err)?;
        let a = main.w_spectrum(0).map_err(err)?;
        let b = t.w_spectrum(0).map_err(err)?;
        let d = a.sub(&b).map_err(err)?.l2_norm() / a.l2_norm().max(f64::MIN_POSITIVE);
        (Some(t), Some(d))
    } else {
        (None, None)
    };

    let picard: Option<PicardReport> = [Some(&main), cross.as_ref()]
        .into_iter()
        .flatten()
        .find_map(|t| t.metadata.solver.as_ref().and_then(|d| d.picard.clone()));
    let diag = main.metadata.solver.as_ref().expect("solver trajectories carry diagnostics");
    let finite = diag.series.iter().all(|s| s.w_h3.is_finite() && s.remainder_h3.is_finite());
    let contracting = picard.as_ref().is_some_and(|p| p.converged && p.ratios.iter().all(|r| *r < 1.0));
    let converged = match solver.mode {
        SolveMode::BackwardIntegrate => finite || contracting,
        SolveMode::Picard => contracting,
    };

    write_series(ctx, &main)?;
    if cfg.scatter.snapshot_every > 0 {
        write_snapshots(ctx, &main, cfg.scatter.snapshot_every)?;
    }
    let ratios = picard.as_ref().map(|p| p.ratios.clone()).unwrap_or_default();
    let summary = Summary {
        mode: solver.mode,
        fitted_alpha_slope: v.decay_fit.exponent,
        fit_window: v.fit_window,
        residual: v.residual,
        z_norm: &v.z_norm,
        contraction_ratios: ratios.clone(),
        tail_estimates: &v.tail_estimates,
        mode_difference,
        triangle_max_ratio: v.triangle_max_ratio,
        terminal_w: v.terminal_w,
        wrap_time: v.wrap_time,
        notes: &main.metadata.notes,
    };
    std::fs::write(
        ctx.out.join("scatter_summary.json"),
        serde_json::to_string_pretty(&summary).expect("serializes") + "\n",
    )?;

    let g = &cfg.gates;
    let r = &mut *ctx.report;
    r.check(CheckRecord::new(
        NAME,
        "construction_converged",
        Relation::Within,
        1.0,
        f64::from(u8::from(converged)),
        0.0,
    ));
    if let Some(max) = ratios.iter().copied().reduce(f64::max) {
        r.check(CheckRecord::new(NAME, "picard_max_ratio", Relation::AtMost, 1.0, max, 0.0).informational());
    }
    r.check(CheckRecord::new(NAME, "forward_residual", Relation::AtMost, 0.0, v.residual, g.forward_residual));
    r.check(CheckRecord::new(
        NAME,
        "h3_decay_slope",
        Relation::AtMost,
        -0.5,
        v.decay_fit.exponent,
        g.scatter_slope_tol,
    ));
    r.check(
        CheckRecord::new(NAME, "slope_vs_alpha", Relation::AtMost, -solver.alpha, v.decay_fit.exponent, 0.0)
            .informational(),
    );
    r.check(CheckRecord::new(NAME, "triangle_ratio", Relation::AtMost, 1.0, v.triangle_max_ratio, 1e-12));
    r.check(CheckRecord::new(NAME, "terminal_w", Relation::Within, 0.0, v.terminal_w, 0.0));
    if let Some(d) = mode_difference {
        r.check(CheckRecord::new(NAME, "mode_agreement", Relation::AtMost, 0.0, d, g.mode_agreement));
    }
    r.scans.push(scan_record(&v, diag.series.iter().map(|s| (s.t, s.remainder_h3)).collect(), solver.alpha));
    ctx.detail(
        Experiment::Scatter,
        serde_json::json!({
            "validation": v,
            "picard": picard,
            "mode_difference": mode_difference,
            "series": diag.series,
            "notes": main.metadata.notes,
        }),
    );
    Ok(())
}

fn scan_record(v: &ValidationReport, samples: Vec<(f64, f64)>, alpha: f64) -> ScanRecord {
    let s = DecayScanResult {
        norm_spec: "|| u(t) - V(t) u+ ||_H3".into(),
        samples,
        target_exponent: -alpha,
        fitted_exponent: v.decay_fit.exponent,
        prefactor: v.decay_fit.prefactor,
        fit_window: v.fit_window,
        fit_points: v.decay_fit.points,
        wrap_time: v.wrap_time,
        residual: v.decay_fit.residual,
        tail_estimates: Vec::new(),
        empirical_constants: Vec::new(),
    };
    ScanRecord::from_scan("scatter_h3", &s)
}

fn write_series(ctx: &Ctx, traj: &TrajectorySet) -> Result<(), RunError> {
    let diag = traj.metadata.solver.as_ref().expect("diagnostics");
    let mut w = csv::Writer::from_path(ctx.out.join("scatter.csv")).map_err(std::io::Error::other)?;
    w.write_record(["t", "u_minus_free_h3", "w_h3", "u2_h3"]).map_err(std::io::Error::other)?;
    for s in &diag.series {
        let row = [s.t, s.remainder_h3, s.w_h3, s.u2_h3].map(|v| format!("{v:?}"));
        w.write_record(&row).map_err(std::io::Error::other)?;
    }
    w.flush()?;
    Ok(())
}

fn write_snapshots(ctx: &Ctx, traj: &TrajectorySet, every: usize) -> Result<(), RunError> {
    let dir = ctx.out.join("trajectory");
    std::fs::create_dir_all(&dir)?;
    let err = |e| core_err(e, "scatter");
    let mut frames: Vec<usize> = (0..traj.len()).step_by(every).collect();
    if frames.last() != Some(&(traj.len() - 1)) {
        frames.push(traj.len() - 1);
    }
    let mut index = csv::Writer::from_path(dir.join("index.csv")).map_err(std::io::Error::other)?;
    index.write_record(["frame", "t", "u", "w"]).map_err(std::io::Error::other)?;
    for i in frames {
        let (u, w) = (format!("u_{i:04}.zkf"), format!("w_{i:04}.zkf"));
        write_snapshot(&dir.join(&u), &traj.u(i).map_err(err)?).map_err(err)?;
        write_snapshot(&dir.join(&w), &traj.w(i).map_err(err)?).map_err(err)?;
        index.write_record([i.to_string(), format!("{:?}", traj.times()[i]), u, w]).map_err(std::io::Error::other)?;
    }
    index.flush()?;
    Ok(())
}
