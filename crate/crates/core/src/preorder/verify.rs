//! Independent re-checking of search output.
//!
//! Everything here works on plain `f64` arrays with explicit loops and reads
//! only raw model data (fusion coefficients, S, θ, d); it calls none of the
//! search, transport, or matrix routines, so a bug there cannot hide itself.

use rand::Rng;
use serde::Serialize;

use super::{MonotoneCertificate, ObstructionReport, PreorderMode};
use crate::modular::ModularData;
use crate::sampling::seeded;
use crate::scalar::Real;

type Cx = (f64, f64);

fn cabs(a: Cx) -> f64 {
    a.0.hypot(a.1)
}

/// Plain snapshot of one model.
struct Raw {
    rank: usize,
    s: Vec<Vec<Cx>>,
    /// `d(a) θ_a`
    twist: Vec<Cx>,
    d: Vec<f64>,
    dual: Vec<usize>,
    fusion: Vec<u32>,
}

impl Raw {
    fn new<T: Real>(md: &ModularData<T>) -> Self {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let rank = md.rank();
        let d: Vec<f64> = md.dims().iter().map(|&x| f(x)).collect();
        let twist = (0..rank).map(|a| (f(md.theta()[a].re) * d[a], f(md.theta()[a].im) * d[a])).collect();
        let s = (0..rank)
            .map(|a| (0..rank).map(|b| (f(md.s()[(a, b)].re), f(md.s()[(a, b)].im))).collect())
            .collect();
        let ring = md.ring();
        let mut fusion = vec![0; rank * rank * rank];
        for a in 0..rank {
            for b in 0..rank {
                for c in 0..rank {
                    fusion[(a * rank + b) * rank + c] = ring.n(a, b, c);
                }
            }
        }
        Raw {
            rank,
            s,
            twist,
            d,
            dual: ring.duals().to_vec(),
            fusion,
        }
    }

    fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.fusion[(a * self.rank + b) * self.rank + c]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub passed: bool,
    pub failures: Vec<String>,
}

fn to_f64<T: Real>(m: &crate::matrix::Matrix<T>) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_f64().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn to_f64_int(m: &crate::matrix::Matrix<u32>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)] as f64).collect()).collect()
}

fn twist_relation(n: &[Vec<f64>], src: &Raw, tgt: &Raw, tol: f64, out: &mut Vec<String>) {
    for z in 0..src.rank {
        let mut acc = (0.0, 0.0);
        for a in 0..tgt.rank {
            acc.0 += n[z][a] * tgt.twist[a].0;
            acc.1 += n[z][a] * tgt.twist[a].1;
        }
        let err = cabs((acc.0 - src.twist[z].0, acc.1 - src.twist[z].1));
        if !(err <= tol) {
            out.push(format!("theta relation off by {err:e} at row {z}"));
        }
    }
}

fn xy_relations(x: &[Vec<f64>], y: &[Vec<f64>], src: &Raw, tgt: &Raw, tol: f64, out: &mut Vec<String>) {
    let (r2, r1) = (src.rank, tgt.rank);
    if x.len() != r2 || x.iter().any(|r| r.len() != r1) || y.len() != r1 || y.iter().any(|r| r.len() != r2) {
        out.push("X or Y has the wrong shape".to_string());
        return;
    }
    for (name, m) in [("X", x), ("Y", y)] {
        if m.iter().flatten().any(|&v| !(v >= 0.0)) {
            out.push(format!("{name} has a negative or non-finite entry"));
        }
    }
    let mut worst: f64 = 0.0;
    for z in 0..r2 {
        for xi in 0..r2 {
            let mut acc = (0.0, 0.0);
            for a in 0..r1 {
                for b in 0..r1 {
                    let w = x[z][a] * y[b][xi];
                    if w != 0.0 {
                        acc.0 += w * tgt.s[a][b].0;
                        acc.1 += w * tgt.s[a][b].1;
                    }
                }
            }
            worst = worst.max(cabs((acc.0 - src.s[z][xi].0, acc.1 - src.s[z][xi].1)));
        }
    }
    if !(worst <= tol) {
        out.push(format!("S relation off by {worst:e}"));
    }
    for z in 0..r2 {
        let xd: f64 = (0..r1).map(|a| x[z][a] * tgt.d[a]).sum();
        let yd: f64 = (0..r1).map(|b| y[b][z] * tgt.d[b]).sum();
        if !((xd - src.d[z]).abs() <= tol) {
            out.push(format!("X d1 differs from d2 at row {z}: {xd}"));
        }
        if !((yd - src.d[z]).abs() <= tol) {
            out.push(format!("Y^T d1 differs from d2 at row {z}: {yd}"));
        }
    }
}

fn functor_axioms(m: &[Vec<f64>], src: &Raw, tgt: &Raw, tol: f64, out: &mut Vec<String>) {
    let (r2, r1) = (src.rank, tgt.rank);
    if m.len() != r2 || m.iter().any(|r| r.len() != r1) {
        out.push("M has the wrong shape".to_string());
        return;
    }
    for a in 0..r1 {
        if m[0][a] != if a == 0 { 1.0 } else { 0.0 } {
            out.push("vacuum row is not the vacuum indicator".to_string());
            break;
        }
    }
    for z in 0..r2 {
        let dim: f64 = (0..r1).map(|a| m[z][a] * tgt.d[a]).sum();
        if !((dim - src.d[z]).abs() <= tol) {
            out.push(format!("row {z} does not preserve dimension"));
        }
        for a in 0..r1 {
            if m[src.dual[z]][tgt.dual[a]] != m[z][a] {
                out.push(format!("dual compatibility fails at ({z}, {a})"));
            }
        }
    }
    for z in 0..r2 {
        for xi in 0..r2 {
            for c in 0..r1 {
                let mut lhs = 0.0;
                for g in 0..r2 {
                    lhs += src.n(z, xi, g) as f64 * m[g][c];
                }
                let mut rhs = 0.0;
                for a in 0..r1 {
                    for b in 0..r1 {
                        rhs += m[z][a] * m[xi][b] * tgt.n(a, b, c) as f64;
                    }
                }
                if lhs != rhs {
                    out.push(format!("fusion not preserved at ({z}, {xi}) component {c}"));
                }
            }
        }
    }
}

/// Re-checks a certificate against the raw data of both models.
pub fn verify_certificate<T: Real>(
    cert: &MonotoneCertificate<T>,
    source: &ModularData<T>,
    target: &ModularData<T>,
    tol: f64,
) -> CertificateCheck {
    let src = Raw::new(source);
    let tgt = Raw::new(target);
    let mut failures = Vec::new();
    match cert.mode {
        PreorderMode::Twist => match &cert.n {
            Some(n) => {
                let n = to_f64_int(n);
                if n.len() != src.rank || n.iter().any(|r| r.len() != tgt.rank) {
                    failures.push("N has the wrong shape".to_string());
                } else {
                    twist_relation(&n, &src, &tgt, tol, &mut failures);
                }
            }
            None => failures.push("twist certificate without N".to_string()),
        },
        PreorderMode::SMatrix | PreorderMode::Functor => {
            match (&cert.x, &cert.y) {
                (Some(x), Some(y)) => xy_relations(&to_f64(x), &to_f64(y), &src, &tgt, tol, &mut failures),
                _ => failures.push("certificate without X and Y".to_string()),
            }
            if cert.mode == PreorderMode::Functor {
                match &cert.m {
                    Some(m) => {
                        let m = to_f64_int(m);
                        functor_axioms(&m, &src, &tgt, tol, &mut failures);
                        if failures.is_empty() {
                            twist_relation(&m, &src, &tgt, tol, &mut failures);
                        }
                    }
                    None => failures.push("functor certificate without M".to_string()),
                }
            }
        }
    }
    CertificateCheck {
        passed: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerOutcome {
    pub draws: u64,
    pub counterexample: Option<String>,
}

/// Draws random candidates inside the bounds of an exhaustive obstruction and
/// reports any that satisfies every constraint the search claimed impossible.
pub fn sample_obstruction<T: Real>(
    report: &ObstructionReport,
    source: &ModularData<T>,
    target: &ModularData<T>,
    draws: u64,
    seed: u64,
    tol: f64,
) -> SamplerOutcome {
    let src = Raw::new(source);
    let tgt = Raw::new(target);
    let mut rng = seeded(seed);
    let (r2, r1) = (src.rank, tgt.rank);
    let dims_on = report.mode != PreorderMode::Twist || report.bounds.dimension_cap.is_some();
    let entry_cap = report.bounds.entry_cap.unwrap_or(u32::MAX);
    let dmin = tgt.d.iter().cloned().fold(f64::INFINITY, f64::min);
    let cap_for = |z: usize| -> u32 {
        if dims_on {
            let by_dim = (src.d[z] / dmin + tol).floor() as u32;
            by_dim.min(entry_cap)
        } else {
            entry_cap
        }
    };
    let draw_row = |rng: &mut crate::sampling::SampleRng, z: usize| -> Vec<f64> {
        let cap = cap_for(z);
        (0..r1).map(|_| rng.gen_range(0..=cap) as f64).collect()
    };
    let row_ok = |row: &[f64], z: usize, check_dual: bool| -> bool {
        if dims_on {
            let dim: f64 = row.iter().zip(&tgt.d).map(|(n, d)| n * d).sum();
            if (dim - src.d[z]).abs() > tol {
                return false;
            }
        }
        let mut acc = (0.0, 0.0);
        for a in 0..r1 {
            acc.0 += row[a] * tgt.twist[a].0;
            acc.1 += row[a] * tgt.twist[a].1;
        }
        if cabs((acc.0 - src.twist[z].0, acc.1 - src.twist[z].1)) > tol {
            return false;
        }
        !check_dual || src.dual[z] != z || (0..r1).all(|a| row[tgt.dual[a]] == row[a])
    };

    for i in 0..draws {
        let found = match (report.mode, report.row) {
            (PreorderMode::Twist, Some(z)) => {
                let row = draw_row(&mut rng, z);
                row_ok(&row, z, false).then(|| format!("row {z} = {row:?}"))
            }
            (PreorderMode::Functor, Some(z)) => {
                let row = draw_row(&mut rng, z);
                row_ok(&row, z, true).then(|| format!("row {z} = {row:?}"))
            }
            (PreorderMode::Functor, None) | (PreorderMode::Twist, None) => {
                let mut m: Vec<Vec<f64>> = (0..r2).map(|z| draw_row(&mut rng, z)).collect();
                m[0] = (0..r1).map(|a| if a == 0 { 1.0 } else { 0.0 }).collect();
                let mut fails = Vec::new();
                if (0..r2).all(|z| row_ok(&m[z], z, true)) {
                    functor_axioms(&m, &src, &tgt, tol, &mut fails);
                    if fails.is_empty() {
                        let y: Vec<Vec<f64>> = (0..r1).map(|a| (0..r2).map(|z| m[z][a]).collect()).collect();
                        xy_relations(&m, &y, &src, &tgt, tol, &mut fails);
                    }
                    fails.is_empty().then(|| format!("M = {m:?}"))
                } else {
                    None
                }
            }
            (PreorderMode::SMatrix, _) => {
                let x: Vec<Vec<f64>> = (0..r2).map(|_| (0..r1).map(|_| rng.gen_range(0.0..2.0)).collect()).collect();
                let y: Vec<Vec<f64>> = (0..r1).map(|_| (0..r2).map(|_| rng.gen_range(0.0..2.0)).collect()).collect();
                let mut fails = Vec::new();
                xy_relations(&x, &y, &src, &tgt, tol, &mut fails);
                fails.is_empty().then(|| format!("X = {x:?}, Y = {y:?}"))
            }
        };
        if let Some(c) = found {
            return SamplerOutcome {
                draws: i + 1,
                counterexample: Some(c),
            };
        }
    }
    SamplerOutcome {
        draws,
        counterexample: None,
    }
}
