use serde::Serialize;
use zk_symbols::{
    float_bridge, rederive_coefficients, sample_coefficient_bounds, verify_identity_exact, verify_intermediates,
    CoefficientName, CoefficientTable,
};

use super::{Ctx, Experiment};
use crate::report::{CheckRecord, Relation};
use crate::RunError;

const NAME: &str = "verify-algebra";

#[derive(Serialize)]
struct Intermediate {
    eq: String,
    pass: bool,
}

#[derive(Serialize)]
struct DiffRow {
    name: String,
    printed: String,
    derived: String,
}

#[derive(Serialize)]
struct BoundRatio {
    name: String,
    max_ratio: f64,
    degree_mismatch: i32,
    scaling_exponent: f64,
    unbounded: bool,
}

#[derive(Serialize)]
struct Mutation {
    coefficient: String,
    detected: bool,
    residual_terms: usize,
}

#[derive(Serialize)]
struct AlgebraReport {
    identity: &'static str,
    cleared_denominator: Option<String>,
    offending: Vec<String>,
    intermediates: Vec<Intermediate>,
    coefficient_diff: Vec<DiffRow>,
    derived_identity_holds: bool,
    bound_ratios: Vec<BoundRatio>,
    mutations: Vec<Mutation>,
    float_bridge_max_relative: f64,
}

pub(super) fn run(ctx: &mut Ctx) -> Result<(), RunError> {
    let seed = ctx.cfg.seed;
    let printed = CoefficientTable::printed();

    ctx.say(NAME, "exact identity and intermediates");
    let identity = verify_identity_exact(&printed);
    let inter = verify_intermediates();
    let (_, diff) = rederive_coefficients();

    ctx.say(NAME, "sign-flip mutations");
    let mutations: Vec<Mutation> = CoefficientName::ALL
        .iter()
        .map(|&n| {
            let r = verify_identity_exact(&printed.with_sign_flipped(n));
            Mutation { coefficient: n.label().into(), detected: !r.pass(), residual_terms: r.checks[0].residual_terms }
        })
        .collect();
    let detected = mutations.iter().filter(|m| m.detected).count();

    ctx.say(NAME, "bound sampling and float cross-check");
    let bounds = sample_coefficient_bounds(ctx.cfg.algebra.bound_samples, seed);
    let bridge = float_bridge(&printed, ctx.cfg.algebra.float_points, seed);

    let failing = inter.checks.iter().filter(|c| !c.pass).count();
    let g = &ctx.cfg.gates;
    let r = &mut *ctx.report;
    r.check(CheckRecord::new(
        NAME,
        "identity_residual_terms",
        Relation::Within,
        0.0,
        identity.checks[0].residual_terms as f64,
        0.0,
    ));
    r.check(CheckRecord::new(NAME, "intermediates_failing", Relation::Within, 0.0, failing as f64, 0.0));
    r.check(
        CheckRecord::new(NAME, "fault_sensitivity", Relation::AtLeast, printed.len() as f64, detected as f64, 0.0)
            .informational(),
    );
    r.check(
        CheckRecord::new(NAME, "float_bridge", Relation::AtMost, 0.0, bridge.max_relative_residual, g.float_bridge)
            .informational(),
    );
    r.check(
        CheckRecord::new(
            NAME,
            "coefficient_discrepancies",
            Relation::Within,
            0.0,
            diff.discrepancies().len() as f64,
            0.0,
        )
        .informational(),
    );

    let out = AlgebraReport {
        identity: if identity.pass() { "pass" } else { "fail" },
        cleared_denominator: identity.cleared_denominator.clone(),
        offending: identity.checks[0].offending.clone(),
        intermediates: inter.checks.iter().map(|c| Intermediate { eq: c.name.clone(), pass: c.pass }).collect(),
        coefficient_diff: diff
            .discrepancies()
            .into_iter()
            .map(|d| DiffRow { name: d.name.clone(), printed: d.printed.clone(), derived: d.derived.clone() })
            .collect(),
        derived_identity_holds: diff.derived_identity_holds,
        bound_ratios: bounds
            .entries
            .iter()
            .map(|e| BoundRatio {
                name: e.name.clone(),
                max_ratio: e.max_ratio,
                degree_mismatch: e.degree_mismatch,
                scaling_exponent: e.scaling_exponent,
                unbounded: e.unbounded,
            })
            .collect(),
        mutations,
        float_bridge_max_relative: bridge.max_relative_residual,
    };
    let text = serde_json::to_string_pretty(&out).expect("serializes") + "\n";
    std::fs::write(ctx.out.join("verify-algebra.json"), text)?;
    ctx.detail(Experiment::VerifyAlgebra, &out);
    Ok(())
}
