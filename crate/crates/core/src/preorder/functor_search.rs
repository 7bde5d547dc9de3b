use num_traits::Zero;

use super::{
    rows_with_dimension, Budget, FeasibleReport, MonotoneCertificate, ObstructionReport, PreorderMode, SearchBounds,
    UnknownReport, Verdict, CANDIDATE_CAP, DEFAULT_BOUND,
};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::modular::ModularData;
use crate::scalar::{Real, C};
use crate::transport::{transport_matrices, verify_theorem, FunctorCheckOptions, TensorFunctorData};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctorSearchConfig {
    /// Cap on every multiplicity.
    pub bound: u32,
    pub max_certificates: usize,
    /// Total search-node budget; running out gives `Unknown`.
    pub node_cap: u64,
    pub tolerance: f64,
}

impl Default for FunctorSearchConfig {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
            max_certificates: 16,
            node_cap: CANDIDATE_CAP,
            tolerance: 1e-9,
        }
    }
}

/// Searches multiplicity matrices `M` (source rows, target columns) that
/// preserve dimensions and twists, fix the vacuum, respect duals, and are
/// fusion-ring homomorphisms; each complete `M` must then pass the transport
/// relations with standard solutions.
pub fn check_functor_search<T: Real>(
    source: &ModularData<T>,
    target: &ModularData<T>,
    cfg: &FunctorSearchConfig,
) -> Result<Verdict<T>> {
    let tol = T::floor_tol(cfg.tolerance);
    let r2 = source.rank();
    let r1 = target.rank();
    let src = source.ring();
    let tgt = target.ring();
    let bounds = SearchBounds {
        entry_cap: Some(cfg.bound),
        dimension_cap: Some(source.dims().iter().fold(0f64, |m, d| m.max(d.to_f64().unwrap_or(0.0))).ceil()),
        candidate_cap: cfg.node_cap,
    };
    let t1 = target.twist_traces();
    let t2 = source.twist_traces();
    let mut budget = Budget::new(cfg.node_cap);
    let unknown = |used: u64| {
        Ok(Verdict::Unknown(UnknownReport {
            mode: PreorderMode::Functor,
            reason: format!("search budget of {} nodes exhausted after {used} nodes", cfg.node_cap),
        }))
    };

    let mut per_row: Vec<Vec<Vec<u32>>> = Vec::with_capacity(r2);
    for z in 0..r2 {
        let rows = if z == 0 {
            let mut e0 = vec![0; r1];
            e0[0] = 1;
            vec![e0]
        } else {
            match rows_with_dimension(target.dims(), source.dims()[z], cfg.bound, tol, &mut budget) {
                Some(rows) => rows,
                None => return unknown(budget.used),
            }
        };
        let self_dual = src.dual(z) == z;
        let rows: Vec<Vec<u32>> = rows
            .into_iter()
            .filter(|row| {
                let image = row.iter().zip(&t1).fold(C::<T>::zero(), |acc, (&n, t)| acc + t * T::count(n as usize));
                (image - t2[z]).norm() <= tol
            })
            .filter(|row| !self_dual || (0..r1).all(|a| row[tgt.dual(a)] == row[a]))
            .collect();
        if rows.is_empty() {
            return Ok(Verdict::Obstructed(ObstructionReport {
                mode: PreorderMode::Functor,
                bounds,
                exhaustive: true,
                row: Some(z),
                reason: format!(
                    "no image for {} has dimension {} and twist {}",
                    src.name(z),
                    source.dims()[z],
                    source.theta()[z]
                ),
            }));
        }
        per_row.push(rows);
    }

    // pairs (ζ, ξ) become checkable once every row they touch is assigned
    let mut ready: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r2];
    for z in 0..r2 {
        for x in 0..r2 {
            let mut k = z.max(x);
            for g in 0..r2 {
                if src.n(z, x, g) > 0 {
                    k = k.max(g);
                }
            }
            ready[k].push((z, x));
        }
    }

    let mut search = Search {
        source,
        target,
        per_row: &per_row,
        ready: &ready,
        cfg,
        budget,
        assigned: Vec::with_capacity(r2),
        certificates: Vec::new(),
        total: 0,
        ring_ok: 0,
    };
    if !search.descend()? {
        return unknown(search.budget.used);
    }
    if search.total > 0 {
        return Ok(Verdict::Feasible(FeasibleReport {
            mode: PreorderMode::Functor,
            certificates: search.certificates,
            total: search.total,
        }));
    }
    let reason = if search.ring_ok == 0 {
        "no multiplicity matrix is a dimension- and twist-preserving fusion-ring homomorphism".to_string()
    } else {
        format!(
            "{} ring-compatible multiplicity matrices fail S₂ = M S₁ Mᵀ",
            search.ring_ok
        )
    };
    Ok(Verdict::Obstructed(ObstructionReport {
        mode: PreorderMode::Functor,
        bounds,
        exhaustive: true,
        row: None,
        reason,
    }))
}

struct Search<'a, T: Real> {
    source: &'a ModularData<T>,
    target: &'a ModularData<T>,
    per_row: &'a [Vec<Vec<u32>>],
    ready: &'a [Vec<(usize, usize)>],
    cfg: &'a FunctorSearchConfig,
    budget: Budget,
    assigned: Vec<Vec<u32>>,
    certificates: Vec<MonotoneCertificate<T>>,
    total: u64,
    ring_ok: u64,
}

impl<T: Real> Search<'_, T> {
    /// Returns `false` when the budget runs out.
    fn descend(&mut self) -> Result<bool> {
        let k = self.assigned.len();
        if k == self.per_row.len() {
            self.leaf()?;
            return Ok(true);
        }
        let src = self.source.ring();
        let tgt = self.target.ring();
        let dk = src.dual(k);
        for i in 0..self.per_row[k].len() {
            if !self.budget.tick() {
                return Ok(false);
            }
            let row = &self.per_row[k][i];
            if dk < k {
                let partner = &self.assigned[dk];
                if (0..row.len()).any(|a| row[a] != partner[tgt.dual(a)]) {
                    continue;
                }
            }
            self.assigned.push(row.clone());
            let ok = self.ready[k].iter().all(|&(z, x)| self.homomorphic(z, x));
            if ok && !self.descend()? {
                return Ok(false);
            }
            self.assigned.pop();
        }
        Ok(true)
    }

    fn homomorphic(&self, z: usize, x: usize) -> bool {
        let src = self.source.ring();
        let r1 = self.target.rank();
        let mut lhs = vec![0u64; r1];
        for g in 0..src.rank() {
            let n = src.n(z, x, g) as u64;
            if n > 0 {
                for (l, &v) in lhs.iter_mut().zip(&self.assigned[g]) {
                    *l += n * v as u64;
                }
            }
        }
        lhs == self.target.ring().fuse_vectors(&self.assigned[z], &self.assigned[x])
    }

    fn leaf(&mut self) -> Result<()> {
        self.ring_ok += 1;
        let m = Matrix::from_rows(self.assigned.clone()).expect("rows share length");
        let fd = TensorFunctorData::new(self.source.clone(), self.target.clone(), m.clone())?;
        let opts = FunctorCheckOptions {
            tolerance: self.cfg.tolerance,
            ..FunctorCheckOptions::default()
        };
        if !fd.validate(opts).is_valid() {
            return Ok(());
        }
        let tr = transport_matrices(&fd)?;
        if !verify_theorem(&tr, &fd, self.cfg.tolerance).passed() {
            return Ok(());
        }
        self.total += 1;
        if self.certificates.len() < self.cfg.max_certificates {
            let r = tr.residuals;
            self.certificates.push(MonotoneCertificate {
                mode: PreorderMode::Functor,
                n: Some(tr.n),
                m: Some(m),
                x: Some(tr.x),
                y: Some(tr.y),
                residuals: vec![
                    ("S2 = X S1 Y".to_string(), r.s),
                    ("X d1 = d2".to_string(), r.dims_x),
                    ("Y^T d1 = d2".to_string(), r.dims_y),
                    ("theta2 = N theta1".to_string(), r.theta),
                ],
            });
        }
        Ok(())
    }
}
