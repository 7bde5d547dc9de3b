//! Searches for the monotone preorders `≺_t` and `≺_s` between two sets of
//! modular data, and for the multiplicity shadow of a braided functor.
//!
//! Argument order is fixed everywhere: `source` is the degraded state `ω₂`,
//! `target` the clean state `ω₁`, and a certificate maps source data onto
//! target data (`θ₂ = N θ₁`, `S₂ = X S₁ Y`).

mod full;
mod functor_search;
mod nnls;
mod s_matrix;
mod twist;
pub mod verify;

pub use full::{check_preorder_full, FullConfig, FullReport, OverallVerdict, NO_OBSTRUCTION_NOTE};
pub use functor_search::{check_functor_search, FunctorSearchConfig};
pub use nnls::nnls;
pub use s_matrix::{check_s_preorder, SConfig};
pub use twist::{check_twist_preorder, TwistConfig};

use serde::Serialize;

use crate::matrix::Matrix;
use crate::scalar::Real;

/// Per-row candidate cap shared by the enumerators.
pub const CANDIDATE_CAP: u64 = 10_000_000;
/// Default entry cap.
pub const DEFAULT_BOUND: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PreorderMode {
    Twist,
    SMatrix,
    Functor,
}

impl std::fmt::Display for PreorderMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PreorderMode::Twist => "twist",
            PreorderMode::SMatrix => "s_matrix",
            PreorderMode::Functor => "functor",
        })
    }
}

/// Witness for a preorder relation. `y` is stored in the transport
/// orientation (`|Δ₁| × |Δ₂|`, `S₂ = X S₁ Y`); the preorder's `Yᵀ` convention
/// is its transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCertificate<T: Real> {
    pub mode: PreorderMode,
    pub n: Option<Matrix<u32>>,
    pub m: Option<Matrix<u32>>,
    pub x: Option<Matrix<T>>,
    pub y: Option<Matrix<T>>,
    pub residuals: Vec<(String, T)>,
}

impl<T: Real> MonotoneCertificate<T> {
    pub(crate) fn twist(n: Matrix<u32>, residual: T) -> Self {
        Self {
            mode: PreorderMode::Twist,
            n: Some(n),
            m: None,
            x: None,
            y: None,
            residuals: vec![("theta2 = N theta1".to_string(), residual)],
        }
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |m, (_, r)| m.max(*r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchBounds {
    pub entry_cap: Option<u32>,
    pub dimension_cap: Option<f64>,
    pub candidate_cap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub mode: PreorderMode,
    pub bounds: SearchBounds,
    pub exhaustive: bool,
    /// Source label whose row has no candidate, when the obstruction is row-local.
    pub row: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnknownReport {
    pub mode: PreorderMode,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleReport<T: Real> {
    pub mode: PreorderMode,
    /// At most the configured number, ascending in the lexicographic order of
    /// the flattened integer matrix.
    pub certificates: Vec<MonotoneCertificate<T>>,
    /// Number of certificates found (saturating).
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<T: Real> {
    Feasible(FeasibleReport<T>),
    Obstructed(ObstructionReport),
    Unknown(UnknownReport),
}

impl<T: Real> Verdict<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn is_obstructed(&self) -> bool {
        matches!(self, Verdict::Obstructed(_))
    }

    pub fn certificates(&self) -> &[MonotoneCertificate<T>] {
        match self {
            Verdict::Feasible(f) => &f.certificates,
            _ => &[],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Feasible(_) => "feasible",
            Verdict::Obstructed(_) => "obstructed",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Node budget for the depth-first enumerators.
pub(crate) struct Budget {
    pub(crate) used: u64,
    pub(crate) cap: u64,
}

impl Budget {
    pub(crate) fn new(cap: u64) -> Self {
        Self { used: 0, cap }
    }

    pub(crate) fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.cap
    }
}

/// All `n ∈ ℕ^r` with `Σ_a n_a d(a) = target` within `tol` and entries at most
/// `entry_cap`, in ascending lexicographic order. `None` if the budget runs out.
pub(crate) fn rows_with_dimension<T: Real>(
    d: &[T],
    target: T,
    entry_cap: u32,
    tol: T,
    budget: &mut Budget,
) -> Option<Vec<Vec<u32>>> {
    fn go<T: Real>(
        d: &[T],
        target: T,
        cap: u32,
        tol: T,
        a: usize,
        acc: T,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        budget: &mut Budget,
    ) -> bool {
        if !budget.tick() {
            return false;
        }
        if a == d.len() {
            if (acc - target).abs() <= tol {
                out.push(cur.clone());
            }
            return true;
        }
        let mut n = 0u32;
        loop {
            let next = acc + T::count(n as usize) * d[a];
            if next > target + tol || n > cap {
                break;
            }
            cur.push(n);
            let ok = go(d, target, cap, tol, a + 1, next, cur, out, budget);
            cur.pop();
            if !ok {
                return false;
            }
            n += 1;
        }
        true
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d.len());
    if go(d, target, entry_cap, tol, 0, T::zero(), &mut cur, &mut out, budget) {
        Some(out)
    } else {
        None
    }
}
