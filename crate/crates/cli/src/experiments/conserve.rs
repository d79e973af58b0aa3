use serde_json::json;
use zk_core::scattering::{forward_solve_zk_with, ForwardOptions};

use super::{build, core_err, Ctx, Experiment};
use crate::report::{CheckRecord, Relation};
use crate::RunError;

const NAME: &str = "conserve";

pub(super) fn run(ctx: &mut Ctx) -> Result<(), RunError> {
    let cfg = ctx.cfg;
    let c = &cfg.conserve;
    let u = build(&c.data, ctx.grid(), "conserve.data")?;
    ctx.say(NAME, format!("forward solve on [0, {}] with dt = {}", c.t1, c.dt));
    // About every half time unit.
    let save_every = ((0.5 / c.dt).round() as usize).max(1);
    let opts = ForwardOptions { dt: c.dt, save_every, blowup_factor: 10.0 };
    let run = forward_solve_zk_with(&u, 0.0, c.t1, &opts).map_err(|e| core_err(e, "conserve"))?;

    let mut w = csv::Writer::from_path(ctx.out.join("conserve.csv")).map_err(std::io::Error::other)?;
    w.write_record(["t", "mass", "energy", "h1"]).map_err(std::io::Error::other)?;
    for i in 0..run.times.len() {
        let row = [run.times[i], run.mass[i], run.energy[i], run.h1[i]].map(|v| format!("{v:?}"));
        w.write_record(&row).map_err(std::io::Error::other)?;
    }
    w.flush()?;

    let (mass, energy) = (run.mass_drift(), run.energy_drift());
    let g = &cfg.gates;
    ctx.report.check(CheckRecord::new(NAME, "mass_drift", Relation::AtMost, 0.0, mass, g.mass_drift));
    ctx.report.check(CheckRecord::new(NAME, "energy_drift", Relation::AtMost, 0.0, energy, g.energy_drift));
    ctx.detail(
        Experiment::Conserve,
        json!({
            "dt": run.dt,
            "times": run.times,
            "mass": run.mass,
            "energy": run.energy,
            "h1": run.h1,
            "mass_drift": mass,
            "energy_drift": energy,
        }),
    );
    Ok(())
}
