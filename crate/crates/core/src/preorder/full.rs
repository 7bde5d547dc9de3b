use std::fmt;

use serde::Serialize;

use super::{
    check_functor_search, check_s_preorder, check_twist_preorder, FeasibleReport, FunctorSearchConfig,
    MonotoneCertificate, PreorderMode, SConfig, TwistConfig, Verdict,
};
use crate::error::Result;
use crate::modular::ModularData;
use crate::scalar::Real;

/// Mandatory wording for a verdict without obstruction.
pub const NO_OBSTRUCTION_NOTE: &str =
    "NO-OBSTRUCTION: every monotone check passed; this is not a proof that the channel exists";
const OBSTRUCTED_NOTE: &str =
    "OBSTRUCTED: no finite-depth channel maps the target state onto the source state";
const UNKNOWN_NOTE: &str = "UNKNOWN: no obstruction found, but at least one check was inconclusive";

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FullConfig {
    pub twist: TwistConfig,
    pub functor: FunctorSearchConfig,
    pub s: SConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OverallVerdict {
    #[serde(rename = "OBSTRUCTED")]
    Obstructed,
    #[serde(rename = "NO-OBSTRUCTION")]
    NoObstruction,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for OverallVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OverallVerdict::Obstructed => "OBSTRUCTED",
            OverallVerdict::NoObstruction => "NO-OBSTRUCTION",
            OverallVerdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullReport<T: Real> {
    pub verdict: OverallVerdict,
    /// Stage that produced the obstruction, if any.
    pub decided_by: Option<PreorderMode>,
    /// `None` for stages skipped after an obstruction.
    pub twist: Option<Verdict<T>>,
    pub functor: Option<Verdict<T>>,
    pub s: Option<Verdict<T>>,
    pub note: &'static str,
}

impl<T: Real> FullReport<T> {
    pub fn stages(&self) -> [(PreorderMode, Option<&Verdict<T>>); 3] {
        [
            (PreorderMode::Twist, self.twist.as_ref()),
            (PreorderMode::Functor, self.functor.as_ref()),
            (PreorderMode::SMatrix, self.s.as_ref()),
        ]
    }
}

/// Twist check, then functor search, then the S search. The first
/// obstruction ends the run.
pub fn check_preorder_full<T: Real>(
    source: &ModularData<T>,
    target: &ModularData<T>,
    cfg: &FullConfig,
) -> Result<FullReport<T>> {
    let obstructed = |mode, twist, functor, s| FullReport {
        verdict: OverallVerdict::Obstructed,
        decided_by: Some(mode),
        twist,
        functor,
        s,
        note: OBSTRUCTED_NOTE,
    };
    let twist = check_twist_preorder(source.theta(), source.dims(), target.theta(), target.dims(), &cfg.twist)?;
    if twist.is_obstructed() {
        return Ok(obstructed(PreorderMode::Twist, Some(twist), None, None));
    }
    let functor = check_functor_search(source, target, &cfg.functor)?;
    if functor.is_obstructed() {
        return Ok(obstructed(PreorderMode::Functor, Some(twist), Some(functor), None));
    }
    let s = match functor.certificates().first() {
        Some(c) => Verdict::Feasible(FeasibleReport {
            mode: PreorderMode::SMatrix,
            certificates: vec![MonotoneCertificate {
                mode: PreorderMode::SMatrix,
                ..c.clone()
            }],
            total: 1,
        }),
        None => check_s_preorder(source.s(), source.dims(), target.s(), target.dims(), &cfg.s)?,
    };
    if s.is_obstructed() {
        return Ok(obstructed(PreorderMode::SMatrix, Some(twist), Some(functor), Some(s)));
    }
    let all = twist.is_feasible() && functor.is_feasible() && s.is_feasible();
    let (verdict, note) = if all {
        (OverallVerdict::NoObstruction, NO_OBSTRUCTION_NOTE)
    } else {
        (OverallVerdict::Unknown, UNKNOWN_NOTE)
    };
    Ok(FullReport {
        verdict,
        decided_by: None,
        twist: Some(twist),
        functor: Some(functor),
        s: Some(s),
        note,
    })
}
