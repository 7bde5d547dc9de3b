use num_traits::Zero;

use super::{
    rows_with_dimension, Budget, FeasibleReport, MonotoneCertificate, ObstructionReport, PreorderMode, SearchBounds,
    Verdict, CANDIDATE_CAP, DEFAULT_BOUND,
};
use crate::error::{input, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistConfig {
    /// Require `Σ_a n_a d₁(a) = d₂(ζ)` on every row.
    pub dim_rows: bool,
    /// Force row 0 to the vacuum indicator.
    pub vacuum_row: bool,
    /// Entry cap without `dim_rows`; with it, rows are capped at
    /// `bound · max d₂` in weighted size.
    pub bound: u32,
    pub max_certificates: usize,
    pub tolerance: f64,
    pub candidate_cap: u64,
}

impl Default for TwistConfig {
    fn default() -> Self {
        Self {
            dim_rows: true,
            vacuum_row: true,
            bound: DEFAULT_BOUND,
            max_certificates: 16,
            tolerance: 1e-9,
            candidate_cap: CANDIDATE_CAP,
        }
    }
}

impl TwistConfig {
    /// The relation exactly as stated: any nonnegative-integer `N`.
    pub fn literal() -> Self {
        Self {
            dim_rows: false,
            vacuum_row: false,
            ..Self::default()
        }
    }
}

fn combine<T: Real>(row: &[u32], theta: &[C<T>]) -> C<T> {
    row.iter()
        .zip(theta)
        .fold(C::<T>::zero(), |acc, (&n, t)| acc + t * T::count(n as usize))
}

/// Decides `θ₂ ≺_t θ₁` by exhaustive row-by-row enumeration.
///
/// `theta*` are unit-modulus twists; the relation is tested on the twist
/// traces `d(a) θ_a`, which equal `θ` for pointed data.
pub fn check_twist_preorder<T: Real>(
    theta2: &[C<T>],
    d2: &[T],
    theta1: &[C<T>],
    d1: &[T],
    cfg: &TwistConfig,
) -> Result<Verdict<T>> {
    if theta2.len() != d2.len() || theta1.len() != d1.len() || theta2.is_empty() || theta1.is_empty() {
        return Err(input("twist and dimension vectors must be nonempty and of equal length"));
    }
    let tol = T::floor_tol(cfg.tolerance);
    let t2: Vec<C<T>> = theta2.iter().zip(d2).map(|(t, &d)| t * d).collect();
    let t1: Vec<C<T>> = theta1.iter().zip(d1).map(|(t, &d)| t * d).collect();
    let r1 = t1.len();
    let max_d2 = d2.iter().fold(T::zero(), |m, &d| m.max(d));
    let dim_cap = T::count(cfg.bound as usize) * max_d2;
    let bounds = SearchBounds {
        entry_cap: (!cfg.dim_rows).then_some(cfg.bound),
        dimension_cap: cfg.dim_rows.then(|| dim_cap.to_f64().unwrap_or(f64::INFINITY)),
        candidate_cap: cfg.candidate_cap,
    };
    if !cfg.dim_rows {
        let per_row = (cfg.bound as f64 + 1.0).powi(r1 as i32);
        if per_row > cfg.candidate_cap as f64 {
            return Err(Error::Resource(format!(
                "{per_row:.3e} candidates per row exceed the cap of {}",
                cfg.candidate_cap
            )));
        }
    }

    let mut per_row: Vec<Vec<Vec<u32>>> = Vec::with_capacity(t2.len());
    for (z, &target) in t2.iter().enumerate() {
        let candidates: Vec<Vec<u32>> = if z == 0 && cfg.vacuum_row {
            let mut e0 = vec![0; r1];
            e0[0] = 1;
            vec![e0]
        } else if cfg.dim_rows {
            let mut budget = Budget::new(cfg.candidate_cap);
            if d2[z] > dim_cap + tol {
                Vec::new()
            } else {
                rows_with_dimension(d1, d2[z], u32::MAX, tol, &mut budget).ok_or_else(|| {
                    Error::Resource(format!("row {z} exceeds the cap of {} candidates", cfg.candidate_cap))
                })?
            }
        } else {
            odometer(r1, cfg.bound)
        };
        let hits: Vec<Vec<u32>> = candidates
            .into_iter()
            .filter(|row| (combine(row, &t1) - target).norm() <= tol)
            .collect();
        if hits.is_empty() {
            let reason = format!(
                "no nonnegative-integer combination of θ₁ equals θ₂ entry {z} ({}){}",
                target,
                if cfg.dim_rows { " with matching dimension" } else { "" }
            );
            return Ok(Verdict::Obstructed(ObstructionReport {
                mode: PreorderMode::Twist,
                bounds,
                exhaustive: true,
                row: Some(z),
                reason,
            }));
        }
        per_row.push(hits);
    }

    let total = per_row
        .iter()
        .fold(1u64, |acc, rows| acc.saturating_mul(rows.len() as u64));
    let mut certificates = Vec::new();
    let mut pick = vec![0usize; per_row.len()];
    while certificates.len() < cfg.max_certificates {
        let rows: Vec<Vec<u32>> = pick.iter().zip(&per_row).map(|(&i, rows)| rows[i].clone()).collect();
        let n = Matrix::from_rows(rows).expect("rows share length");
        let residual = (0..n.rows()).fold(T::zero(), |m, z| m.max((combine(n.row(z), &t1) - t2[z]).norm()));
        certificates.push(MonotoneCertificate::twist(n, residual));
        // advance, last row fastest, so flattened N ascends lexicographically
        let mut k = pick.len();
        loop {
            if k == 0 {
                return Ok(feasible(certificates, total));
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < per_row[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
    Ok(feasible(certificates, total))
}

fn feasible<T: Real>(certificates: Vec<MonotoneCertificate<T>>, total: u64) -> Verdict<T> {
    Verdict::Feasible(FeasibleReport {
        mode: PreorderMode::Twist,
        certificates,
        total,
    })
}

/// Every vector in `{0..=bound}^r`, ascending lexicographically.
fn odometer(r: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    loop {
        out.push(cur.clone());
        let mut k = r;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < bound {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogModel;
    use crate::modular::ModularData;

    fn cat(name: &str) -> ModularData<f64> {
        CatalogModel::parse(name).unwrap().build().unwrap()
    }

    fn run(source: &str, target: &str, cfg: &TwistConfig) -> Verdict<f64> {
        let (s, t) = (cat(source), cat(target));
        check_twist_preorder(s.theta(), s.dims(), t.theta(), t.dims(), cfg).unwrap()
    }

    #[test]
    fn odometer_order() {
        assert_eq!(odometer(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn semion_over_trivial_obstructed() {
        for cfg in [TwistConfig::default(), TwistConfig::literal()] {
            match run("semion", "trivial", &cfg) {
                Verdict::Obstructed(r) => {
                    assert!(r.exhaustive);
                    assert_eq!(r.row, Some(1));
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn toric_code_over_trivial_obstructed_at_f() {
        match run("toric_code_z2", "trivial", &TwistConfig::literal()) {
            Verdict::Obstructed(r) => assert_eq!(r.row, Some(3)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn decohered_over_toric_code() {
        let v = run("decohered_toric_code", "toric_code_z2", &TwistConfig::default());
        let Verdict::Feasible(f) = v else { panic!("{v:?}") };
        // the e row may be 1, e or m: all have dimension 1 and twist 1
        assert_eq!(f.total, 3);
        let ns: Vec<Vec<Vec<u32>>> = f.certificates.iter().map(|c| c.n.as_ref().unwrap().to_rows()).collect();
        assert_eq!(
            ns,
            vec![
                vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]],
                vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]],
                vec![vec![1, 0, 0, 0], vec![1, 0, 0, 0]],
            ]
        );
        let literal = run("decohered_toric_code", "toric_code_z2", &TwistConfig { bound: 4, ..TwistConfig::literal() });
        let Verdict::Feasible(lf) = literal else { panic!() };
        assert!(lf.total > 3);
    }

    #[test]
    fn certificate_cap_respected() {
        let cfg = TwistConfig {
            max_certificates: 2,
            ..TwistConfig::default()
        };
        let Verdict::Feasible(f) = run("decohered_toric_code", "toric_code_z2", &cfg) else { panic!() };
        assert_eq!(f.certificates.len(), 2);
        assert_eq!(f.total, 3);
    }

    #[test]
    fn oversized_literal_search_refused() {
        let big = cat("toric_code_zn(8)");
        let err = check_twist_preorder(big.theta(), big.dims(), big.theta(), big.dims(), &TwistConfig::literal());
        assert!(matches!(err, Err(Error::Resource(_))));
    }

    #[test]
    fn fibonacci_needs_dimension_weighting() {
        let fib = cat("fibonacci");
        let v = check_twist_preorder(fib.theta(), fib.dims(), fib.theta(), fib.dims(), &TwistConfig::default()).unwrap();
        let Verdict::Feasible(f) = v else { panic!() };
        assert_eq!(f.total, 1);
        assert_eq!(f.certificates[0].n.as_ref().unwrap(), &Matrix::identity(2));
    }
}
