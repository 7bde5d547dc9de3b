use num_traits::Zero;
use rand::Rng;

use super::nnls::nnls;
use super::{
    rows_with_dimension, Budget, FeasibleReport, MonotoneCertificate, ObstructionReport, PreorderMode, SearchBounds,
    UnknownReport, Verdict, CANDIDATE_CAP, DEFAULT_BOUND,
};
use crate::error::{input, Result};
use crate::matrix::{CMatrix, Matrix};
use crate::sampling::{seeded, DEFAULT_SEED};
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SConfig {
    /// Try `X = M`, `Y = Mᵀ` for integer `M` with dimension-preserving rows first.
    pub structured: bool,
    pub multistart: usize,
    pub iters: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub bound: u32,
    pub node_cap: u64,
}

impl Default for SConfig {
    fn default() -> Self {
        Self {
            structured: true,
            multistart: 8,
            iters: 400,
            seed: DEFAULT_SEED,
            tolerance: 1e-9,
            bound: DEFAULT_BOUND,
            node_cap: CANDIDATE_CAP,
        }
    }
}

/// Searches nonnegative `X`, `Y` with `S₂ = X S₁ Y`, `X d₁ = d₂`, `Yᵀ d₁ = d₂`.
///
/// Only the rank screen can return `Obstructed`; a failed heuristic search is
/// `Unknown`.
pub fn check_s_preorder<T: Real>(
    s2: &CMatrix<T>,
    d2: &[T],
    s1: &CMatrix<T>,
    d1: &[T],
    cfg: &SConfig,
) -> Result<Verdict<T>> {
    let (r2, r1) = (d2.len(), d1.len());
    if s2.shape() != (r2, r2) || s1.shape() != (r1, r1) || r1 == 0 || r2 == 0 {
        return Err(input("S matrices must be square and match their dimension vectors"));
    }
    let tol = T::floor_tol(cfg.tolerance);
    for (name, s) in [("S₂", s2), ("S₁", s1)] {
        if (s[(0, 0)] - C::new(T::one(), T::zero())).norm() > tol {
            return Err(input(format!("{name}[0][0] = {}, expected 1", s[(0, 0)])));
        }
    }
    let rank_tol = T::floor_tol(1e-9);
    let (k2, k1) = (s2.rank(rank_tol), s1.rank(rank_tol));
    if k2 > k1 {
        return Ok(Verdict::Obstructed(ObstructionReport {
            mode: PreorderMode::SMatrix,
            bounds: SearchBounds {
                entry_cap: None,
                dimension_cap: None,
                candidate_cap: 0,
            },
            exhaustive: true,
            row: None,
            reason: format!("rank(S₂) = {k2} exceeds rank(S₁) = {k1}; rank(X S₁ Y) ≤ rank(S₁)"),
        }));
    }

    if cfg.structured {
        if let Some(m) = structured_search(s2, d2, s1, d1, cfg, tol) {
            let x = m.to_real::<T>();
            let y = x.transpose();
            return Ok(feasible(certificate(s2, d2, s1, d1, x, y, Some(m))));
        }
    }

    let mut rng = seeded(cfg.seed);
    let mut best = T::infinity();
    for _ in 0..cfg.multistart {
        let y0 = Matrix::from_fn(r1, r2, |_, _| T::lit(rng.gen_range(0.0..1.0)));
        let (x, y, res) = alternate(s2, d2, s1, d1, y0, cfg.iters, tol);
        if res <= tol {
            return Ok(feasible(certificate(s2, d2, s1, d1, x, y, None)));
        }
        best = best.min(res);
    }
    Ok(Verdict::Unknown(UnknownReport {
        mode: PreorderMode::SMatrix,
        reason: format!(
            "rank screen passed; {} alternating NNLS starts reached residual {best:e} > {}",
            cfg.multistart, cfg.tolerance
        ),
    }))
}

fn feasible<T: Real>(cert: MonotoneCertificate<T>) -> Verdict<T> {
    Verdict::Feasible(FeasibleReport {
        mode: PreorderMode::SMatrix,
        certificates: vec![cert],
        total: 1,
    })
}

fn certificate<T: Real>(
    s2: &CMatrix<T>,
    d2: &[T],
    s1: &CMatrix<T>,
    d1: &[T],
    x: Matrix<T>,
    y: Matrix<T>,
    m: Option<Matrix<u32>>,
) -> MonotoneCertificate<T> {
    let [rs, rx, ry] = residuals(s2, d2, s1, d1, &x, &y);
    MonotoneCertificate {
        mode: PreorderMode::SMatrix,
        n: None,
        m,
        x: Some(x),
        y: Some(y),
        residuals: vec![
            ("S2 = X S1 Y".to_string(), rs),
            ("X d1 = d2".to_string(), rx),
            ("Y^T d1 = d2".to_string(), ry),
        ],
    }
}

fn residuals<T: Real>(s2: &CMatrix<T>, d2: &[T], s1: &CMatrix<T>, d1: &[T], x: &Matrix<T>, y: &Matrix<T>) -> [T; 3] {
    let xsy = x.to_complex().matmul(s1).matmul(&y.to_complex());
    let diff = |v: Vec<T>| v.iter().zip(d2).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
    [xsy.max_abs_diff(s2), diff(x.matvec(d1)), diff(y.transpose().matvec(d1))]
}

/// Depth-first search over integer `M` with vacuum row `e₀` and
/// `Σ_a M[ζ][a] d₁(a) = d₂(ζ)`, checking `S₂ = M S₁ Mᵀ` as rows are fixed.
fn structured_search<T: Real>(
    s2: &CMatrix<T>,
    d2: &[T],
    s1: &CMatrix<T>,
    d1: &[T],
    cfg: &SConfig,
    tol: T,
) -> Option<Matrix<u32>> {
    let r1 = d1.len();
    let mut budget = Budget::new(cfg.node_cap);
    let mut rows: Vec<Vec<Vec<u32>>> = Vec::with_capacity(d2.len());
    for (z, &dz) in d2.iter().enumerate() {
        if z == 0 {
            let mut e0 = vec![0; r1];
            e0[0] = 1;
            rows.push(vec![e0]);
        } else {
            let cands = rows_with_dimension(d1, dz, cfg.bound, tol, &mut budget)?;
            if cands.is_empty() {
                return None;
            }
            rows.push(cands);
        }
    }
    // pair value row_i S₁ row_jᵀ
    let pair = |u: &[u32], v: &[u32]| -> C<T> {
        let mut acc = C::<T>::zero();
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0 {
                continue;
            }
            for (b, &vb) in v.iter().enumerate() {
                if vb != 0 {
                    acc = acc + s1[(a, b)] * T::count((ua * vb) as usize);
                }
            }
        }
        acc
    };
    fn go<T: Real>(
        rows: &[Vec<Vec<u32>>],
        chosen: &mut Vec<Vec<u32>>,
        s2: &CMatrix<T>,
        pair: &dyn Fn(&[u32], &[u32]) -> C<T>,
        tol: T,
        budget: &mut Budget,
    ) -> bool {
        let k = chosen.len();
        if k == rows.len() {
            return true;
        }
        for cand in &rows[k] {
            if !budget.tick() {
                return false;
            }
            let fits = (0..=k).all(|i| {
                let other = if i == k { cand.as_slice() } else { chosen[i].as_slice() };
                (pair(other, cand) - s2[(i, k)]).norm() <= tol && (pair(cand, other) - s2[(k, i)]).norm() <= tol
            });
            if fits {
                chosen.push(cand.clone());
                if go(rows, chosen, s2, pair, tol, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(rows.len());
    if go(&rows, &mut chosen, s2, &pair, tol, &mut budget) {
        Matrix::from_rows(chosen)
    } else {
        None
    }
}

/// Alternating NNLS from a starting `Y`. Returns the final `X`, `Y` and the
/// largest of the three residuals.
fn alternate<T: Real>(
    s2: &CMatrix<T>,
    d2: &[T],
    s1: &CMatrix<T>,
    d1: &[T],
    mut y: Matrix<T>,
    iters: usize,
    tol: T,
) -> (Matrix<T>, Matrix<T>, T) {
    let (r2, r1) = (d2.len(), d1.len());
    let mut x = Matrix::zeros(r2, r1);
    let mut res = T::infinity();
    let mut stall = 0;
    for _ in 0..iters {
        // rows of X against S₁Y
        let s1y = s1.matmul(&y.to_complex());
        for z in 0..r2 {
            let a = Matrix::from_fn(2 * r2 + 1, r1, |i, col| {
                if i < r2 {
                    s1y[(col, i)].re
                } else if i < 2 * r2 {
                    s1y[(col, i - r2)].im
                } else {
                    d1[col]
                }
            });
            let b: Vec<T> = (0..2 * r2 + 1)
                .map(|i| if i < r2 { s2[(z, i)].re } else if i < 2 * r2 { s2[(z, i - r2)].im } else { d2[z] })
                .collect();
            for (col, v) in nnls(&a, &b).into_iter().enumerate() {
                x[(z, col)] = v;
            }
        }
        // columns of Y against XS₁
        let xs1 = x.to_complex().matmul(s1);
        for xi in 0..r2 {
            let a = Matrix::from_fn(2 * r2 + 1, r1, |i, col| {
                if i < r2 {
                    xs1[(i, col)].re
                } else if i < 2 * r2 {
                    xs1[(i - r2, col)].im
                } else {
                    d1[col]
                }
            });
            let b: Vec<T> = (0..2 * r2 + 1)
                .map(|i| if i < r2 { s2[(i, xi)].re } else if i < 2 * r2 { s2[(i - r2, xi)].im } else { d2[xi] })
                .collect();
            for (row, v) in nnls(&a, &b).into_iter().enumerate() {
                y[(row, xi)] = v;
            }
        }
        let next = residuals(s2, d2, s1, d1, &x, &y).into_iter().fold(T::zero(), T::max);
        if next <= tol {
            return (x, y, next);
        }
        if next > res * (T::one() - T::lit(1e-12)) {
            stall += 1;
            if stall >= 25 {
                return (x, y, next.min(res));
            }
        } else {
            stall = 0;
        }
        res = res.min(next);
    }
    (x, y, res)
}
