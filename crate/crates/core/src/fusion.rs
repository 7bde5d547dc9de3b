//! Finite fusion rings: labels, multiplicities, duals, and quantum dimensions.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::scalar::Real;
use crate::validation::{CheckSink, ValidationReport};

/// Largest rank accepted anywhere in the crate.
pub const MAX_RANK: usize = 64;

/// Index of a simple object within its ring. The vacuum is always `Label(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub usize);

impl Label {
    pub const VACUUM: Label = Label(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Fusion ring with vacuum at index 0.
///
/// Construction only checks shapes; axioms are checked by [`FusionRing::validate`]
/// so that broken rings can still be inspected and reported on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    names: Vec<String>,
    dual: Vec<usize>,
    /// `N_{ab}^c` at `(a * rank + b) * rank + c`.
    fusion: Vec<u32>,
}

impl FusionRing {
    pub fn new(names: Vec<String>, dual: Vec<usize>, fusion: Vec<u32>) -> Result<Self> {
        let rank = names.len();
        if rank == 0 {
            return Err(input("fusion ring needs at least the vacuum label"));
        }
        if rank > MAX_RANK {
            return Err(input(format!("rank {rank} exceeds the limit of {MAX_RANK}")));
        }
        if dual.len() != rank {
            return Err(input(format!(
                "dual has {} entries, expected rank {rank}",
                dual.len()
            )));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= rank) {
            return Err(input(format!("dual entry {bad} out of range for rank {rank}")));
        }
        if fusion.len() != rank * rank * rank {
            return Err(input(format!(
                "fusion tensor has {} entries, expected {}",
                fusion.len(),
                rank * rank * rank
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(input(format!("duplicate label name {name:?}")));
            }
        }
        Ok(Self { names, dual, fusion })
    }

    /// Builds from sparse `(a, b, c, N_{ab}^c)` entries; unspecified entries are zero.
    pub fn from_triples(
        names: Vec<String>,
        dual: Option<Vec<usize>>,
        triples: &[(usize, usize, usize, u32)],
    ) -> Result<Self> {
        let rank = names.len();
        let mut fusion = vec![0u32; rank * rank * rank];
        for &(a, b, c, n) in triples {
            if a >= rank || b >= rank || c >= rank {
                return Err(input(format!(
                    "fusion entry ({a},{b},{c}) out of range for rank {rank}"
                )));
            }
            fusion[(a * rank + b) * rank + c] = n;
        }
        let dual = match dual {
            Some(d) => d,
            None => dual_from_fusion(rank, &fusion)?,
        };
        Self::new(names, dual, fusion)
    }

    /// Group ring of `Z_{n1} × … × Z_{nk}`, element index in mixed radix with
    /// the first factor varying fastest.
    pub fn group_ring(orders: &[u32], names: Vec<String>) -> Result<Self> {
        let order: usize = orders.iter().map(|&n| n as usize).product();
        if names.len() != order {
            return Err(input(format!(
                "{} names supplied for a group of order {order}",
                names.len()
            )));
        }
        let digits = |mut g: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&n| {
                    let d = g % n as usize;
                    g /= n as usize;
                    d
                })
                .collect()
        };
        let index = |ds: &[usize]| -> usize {
            ds.iter()
                .zip(orders)
                .rev()
                .fold(0, |acc, (&d, &n)| acc * n as usize + d % n as usize)
        };
        let mut fusion = vec![0u32; order * order * order];
        let mut dual = vec![0usize; order];
        for g in 0..order {
            let dg = digits(g);
            let neg: Vec<usize> = dg
                .iter()
                .zip(orders)
                .map(|(&d, &n)| (n as usize - d) % n as usize)
                .collect();
            dual[g] = index(&neg);
            for h in 0..order {
                let sum: Vec<usize> = dg.iter().zip(digits(h)).map(|(a, b)| a + b).collect();
                fusion[(g * order + h) * order + index(&sum)] = 1;
            }
        }
        Self::new(names, dual, fusion)
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        let r = self.rank();
        self.fusion[(a * r + b) * r + c]
    }

    #[inline]
    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.rank()).map(Label)
    }

    /// Looks up a label by display name.
    pub fn label(&self, name: &str) -> Result<Label> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Label)
            .ok_or_else(|| input(format!("no label named {name:?}")))
    }

    pub fn check_label(&self, a: Label) -> Result<()> {
        if a.0 < self.rank() {
            Ok(())
        } else {
            Err(input(format!(
                "label {} out of range for rank {}",
                a.0,
                self.rank()
            )))
        }
    }

    /// Nonzero `(c, N_{ab}^c)` pairs in ascending label order.
    pub fn fuse(&self, a: Label, b: Label) -> Result<Vec<(Label, u32)>> {
        self.check_label(a)?;
        self.check_label(b)?;
        Ok((0..self.rank())
            .filter_map(|c| {
                let n = self.n(a.0, b.0, c);
                (n > 0).then_some((Label(c), n))
            })
            .collect())
    }

    /// Fuses two multiplicity vectors: `(x ⊗ y)_c = Σ_{a,b} x_a y_b N_{ab}^c`.
    pub fn fuse_vectors(&self, x: &[u32], y: &[u32]) -> Vec<u64> {
        let r = self.rank();
        let mut out = vec![0u64; r];
        for (a, &xa) in x.iter().enumerate().filter(|(_, &v)| v > 0) {
            for (b, &yb) in y.iter().enumerate().filter(|(_, &v)| v > 0) {
                for (c, slot) in out.iter_mut().enumerate() {
                    *slot += xa as u64 * yb as u64 * self.n(a, b, c) as u64;
                }
            }
        }
        out
    }

    /// Deligne product; label `(i, j)` sits at `i * other.rank() + j`.
    pub fn product(&self, other: &FusionRing) -> Result<Self> {
        let (r1, r2) = (self.rank(), other.rank());
        let r = r1 * r2;
        if r > MAX_RANK {
            return Err(input(format!("product rank {r} exceeds the limit of {MAX_RANK}")));
        }
        let names = (0..r)
            .map(|k| format!("{}⊠{}", self.names[k / r2], other.names[k % r2]))
            .collect();
        let dual = (0..r)
            .map(|k| self.dual[k / r2] * r2 + other.dual[k % r2])
            .collect();
        let mut fusion = vec![0u32; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    fusion[(a * r + b) * r + c] = self.n(a / r2, b / r2, c / r2)
                        * other.n(a % r2, b % r2, c % r2);
                }
            }
        }
        Self::new(names, dual, fusion)
    }

    /// Relabels so that `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let r = self.rank();
        let mut inv = vec![usize::MAX; r];
        for (new, &old) in perm.iter().enumerate() {
            if old >= r || inv[old] != usize::MAX {
                return Err(input("relabeling is not a permutation"));
            }
            inv[old] = new;
        }
        if perm.len() != r {
            return Err(input("relabeling is not a permutation"));
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        let dual = perm.iter().map(|&o| inv[self.dual[o]]).collect();
        let mut fusion = vec![0u32; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    fusion[(a * r + b) * r + c] = self.n(perm[a], perm[b], perm[c]);
                }
            }
        }
        Self::new(names, dual, fusion)
    }

    /// Checks the ring axioms. Violations come out grouped by check, each in
    /// ascending index order.
    pub fn validate(&self) -> ValidationReport {
        let r = self.rank();
        let mut report = ValidationReport::default();
        {
            let mut sink = CheckSink::new(&mut report, "unit");
            for b in 0..r {
                for c in 0..r {
                    let want = u32::from(b == c);
                    if self.n(0, b, c) != want {
                        sink.fail(|| format!("N_{{0,{b}}}^{c} = {} (expected {want})", self.n(0, b, c)));
                    }
                    if self.n(b, 0, c) != want {
                        sink.fail(|| format!("N_{{{b},0}}^{c} = {} (expected {want})", self.n(b, 0, c)));
                    }
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "dual");
            if self.dual[0] != 0 {
                sink.fail(|| format!("dual(0) = {} (expected 0)", self.dual[0]));
            }
            for a in 0..r {
                if self.dual[self.dual[a]] != a {
                    sink.fail(|| format!("dual(dual({a})) = {} (expected {a})", self.dual[self.dual[a]]));
                }
                for b in 0..r {
                    let want = u32::from(b == self.dual[a]);
                    if self.n(a, b, 0) != want {
                        sink.fail(|| {
                            format!("N_{{{a},{b}}}^0 = {} (expected {want})", self.n(a, b, 0))
                        });
                    }
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "associativity");
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        for f in 0..r {
                            let left: u64 = (0..r)
                                .map(|e| self.n(a, b, e) as u64 * self.n(e, c, f) as u64)
                                .sum();
                            let right: u64 = (0..r)
                                .map(|e| self.n(b, c, e) as u64 * self.n(a, e, f) as u64)
                                .sum();
                            if left != right {
                                sink.fail(|| {
                                    format!("(({a}·{b})·{c})→{f} has {left}, ({a}·({b}·{c}))→{f} has {right}")
                                });
                            }
                        }
                    }
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "dual symmetry");
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        let mirrored = self.n(self.dual[b], self.dual[a], self.dual[c]);
                        if self.n(a, b, c) != mirrored {
                            sink.fail(|| {
                                format!(
                                    "N_{{{a},{b}}}^{c} = {} but N_{{{},{}}}^{} = {mirrored}",
                                    self.n(a, b, c),
                                    self.dual[b],
                                    self.dual[a],
                                    self.dual[c]
                                )
                            });
                        }
                    }
                }
            }
        }
        report
    }

    /// Perron–Frobenius dimensions: the positive vector with
    /// `d_a d_b = Σ_c N_{ab}^c d_c`, normalized to `d_0 = 1`.
    ///
    /// Power iteration on `I + Σ_a N_a`; the identity shift removes any
    /// periodicity so the dominant eigenvector is reached.
    pub fn quantum_dims<T: Real>(&self) -> Result<Vec<T>> {
        const MAX_ITERS: usize = 100_000;
        let r = self.rank();
        let tol = T::floor_tol(1e-12);
        let mut shifted = vec![T::zero(); r * r];
        for b in 0..r {
            shifted[b * r + b] = T::one();
            for c in 0..r {
                let total: u32 = (0..r).map(|a| self.n(a, b, c)).sum();
                shifted[b * r + c] = shifted[b * r + c] + T::count(total as usize);
            }
        }
        let mut v = vec![T::one(); r];
        for _ in 0..MAX_ITERS {
            let mut next: Vec<T> = (0..r)
                .map(|b| {
                    (0..r).fold(T::zero(), |acc, c| acc + shifted[b * r + c] * v[c])
                })
                .collect();
            let scale = next.iter().fold(T::zero(), |m, &x| m.max(x));
            if scale <= T::zero() || !scale.is_finite() {
                return Err(Error::Numerical(
                    "power iteration collapsed; fusion data is degenerate".into(),
                ));
            }
            next.iter_mut().for_each(|x| *x = *x / scale);
            let delta = next
                .iter()
                .zip(&v)
                .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
            v = next;
            if delta < tol {
                let v0 = v[0];
                if v0 <= T::zero() {
                    return Err(Error::Numerical("vacuum dimension vanished".into()));
                }
                return Ok(v.into_iter().map(|x| x / v0).collect());
            }
        }
        Err(Error::Numerical(format!(
            "quantum dimensions did not converge in {MAX_ITERS} iterations"
        )))
    }
}

/// Recovers the dual permutation from the vacuum channel `N_{ab}^0 = δ_{b,ā}`.
pub fn dual_from_fusion(rank: usize, fusion: &[u32]) -> Result<Vec<usize>> {
    if fusion.len() != rank * rank * rank {
        return Err(input("fusion tensor shape does not match rank"));
    }
    (0..rank)
        .map(|a| {
            let hits: Vec<usize> = (0..rank)
                .filter(|&b| fusion[(a * rank + b) * rank] > 0)
                .collect();
            match hits.as_slice() {
                [b] if fusion[(a * rank + b) * rank] == 1 => Ok(*b),
                [] => Err(input(format!("label {a} has no dual: N_{{{a},b}}^0 = 0 for all b"))),
                _ => Err(input(format!(
                    "dual of label {a} is ambiguous: vacuum channel hits {hits:?}"
                ))),
            }
        })
        .collect()
}
