//! The weighted seminorms `X_δ` and `Y_δ` on final data.
//!
//! Both are sums of three terms,
//! `‖⟨∇⟩^{k} |∂1|^{−δ} ⟨x⟩f‖_{L¹} + ‖C^{−2}⟨x⟩f‖_{H^{k+1}} + ‖C^{−3}f‖_{H^{k+2}}`
//! with `C = 3∂1²−∂2²−∂3²`, and `k = 6` for `X_δ`, `k = 2` for `Y_δ`.
//! The singular multipliers are evaluated twice: guarded, and raw.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{
    apply_multiplier, from_spectral, lebesgue_norm, to_spectral, weighted_field, Guard, MultiplierSpec, RealField,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormTerm {
    pub name: String,
    pub guarded: f64,
    /// `None` when the unguarded symbol is infinite on the data's support.
    pub raw: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormReport {
    pub name: String,
    pub delta: f64,
    pub guard: Guard,
    pub value_guarded: f64,
    pub value_raw: Option<f64>,
    pub components: Vec<SeminormTerm>,
}

impl SeminormReport {
    pub fn raw_is_infinite(&self) -> bool {
        self.value_raw.is_none()
    }
}

pub fn seminorm_x(f: &RealField, delta: f64, guard: Guard) -> Result<SeminormReport> {
    seminorm("X", f, delta, guard, 6.0)
}

pub fn seminorm_y(f: &RealField, delta: f64, guard: Guard) -> Result<SeminormReport> {
    seminorm("Y", f, delta, guard, 2.0)
}

fn seminorm(name: &str, f: &RealField, delta: f64, guard: Guard, k: f64) -> Result<SeminormReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    guard.validate()?;
    let fs = to_spectral(f)?;
    let xf = to_spectral(&weighted_field(f))?;

    let first = MultiplierSpec::abs_dx1_pow(-delta, guard).then(&MultiplierSpec::bessel(k));
    let second = MultiplierSpec::cone_power(-2, guard);
    let third = MultiplierSpec::cone_power(-3, guard);

    let l1 = |m: &MultiplierSpec| -> Result<f64> { lebesgue_norm(&from_spectral(&apply_multiplier(&xf, m)?), 1.0) };
    let hs = |data, m: &MultiplierSpec, s: f64| -> Result<f64> { Ok(apply_multiplier(data, m)?.sobolev_l2_norm(s)) };
    let raw = |r: Result<f64>| -> Result<Option<f64>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::NonFiniteSymbol { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let terms = vec![
        SeminormTerm {
            name: format!("|d1|^-{delta} <x> f in W^{k},1"),
            guarded: l1(&first)?,
            raw: raw(l1(&first.clone().with_guard(Guard::None)))?,
        },
        SeminormTerm {
            name: format!("C^-2 <x> f in H^{}", k + 1.0),
            guarded: hs(&xf, &second, k + 1.0)?,
            raw: raw(hs(&xf, &second.clone().with_guard(Guard::None), k + 1.0))?,
        },
        SeminormTerm {
            name: format!("C^-3 f in H^{}", k + 2.0),
            guarded: hs(&fs, &third, k + 2.0)?,
            raw: raw(hs(&fs, &third.clone().with_guard(Guard::None), k + 2.0))?,
        },
    ];
    let value_guarded = terms.iter().map(|t| t.guarded).sum();
    let value_raw = terms.iter().map(|t| t.raw).sum::<Option<f64>>();
    Ok(SeminormReport { name: name.into(), delta, guard, value_guarded, value_raw, components: terms })
}
