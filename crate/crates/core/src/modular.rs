//! Unnormalized S-matrix, twists, and dimensions over a fusion ring.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{input, Error, Result};
use crate::fusion::FusionRing;
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::{close, re, Real, C};
use crate::validation::{CheckSink, ValidationReport};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Entrywise tolerance when comparing Verlinde output with ring fusion.
pub const VERLINDE_TOLERANCE: f64 = 1e-8;

/// `(S, θ, d)` for a fusion ring. `S` is stored unnormalized, so
/// `S_{0,a} = d(a)` and `S_{0,0} = 1`.
///
/// Non-modular data (degenerate `S`) is a first-class value; only
/// [`ModularData::validate`] with `strict` demands modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularData<T: Real> {
    ring: Arc<FusionRing>,
    s: CMatrix<T>,
    theta: Vec<C<T>>,
    dims: Vec<T>,
    tolerance: T,
}

impl<T: Real> ModularData<T> {
    /// Shape-checked constructor. Missing `dims` are computed from the ring.
    pub fn new(
        ring: Arc<FusionRing>,
        s: CMatrix<T>,
        theta: Vec<C<T>>,
        dims: Option<Vec<T>>,
    ) -> Result<Self> {
        let r = ring.rank();
        if s.shape() != (r, r) {
            return Err(input(format!(
                "S is {}x{}, ring rank is {r}",
                s.rows(),
                s.cols()
            )));
        }
        if theta.len() != r {
            return Err(input(format!("theta has {} entries, ring rank is {r}", theta.len())));
        }
        let dims = match dims {
            Some(d) if d.len() != r => {
                return Err(input(format!("dims has {} entries, ring rank is {r}", d.len())))
            }
            Some(d) => d,
            None => ring.quantum_dims()?,
        };
        Ok(Self {
            ring,
            s,
            theta,
            dims,
            tolerance: T::floor_tol(DEFAULT_TOLERANCE),
        })
    }

    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn s(&self) -> &CMatrix<T> {
        &self.s
    }

    pub fn theta(&self) -> &[C<T>] {
        &self.theta
    }

    pub fn dims(&self) -> &[T] {
        &self.dims
    }

    /// Trace of the self-braiding on `τ_a ⊗ τ_a`, i.e. `d(a) θ_a`. This is the
    /// twist vector the transport relations and `≺_t` are stated for; it
    /// coincides with `θ` when every dimension is 1.
    pub fn twist_traces(&self) -> Vec<C<T>> {
        self.theta.iter().zip(&self.dims).map(|(t, &d)| t * d).collect()
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    /// `D² = Σ_a d(a)²`.
    pub fn global_dim_sq(&self) -> T {
        self.dims.iter().fold(T::zero(), |acc, &d| acc + d * d)
    }

    pub fn same_ring(&self, other: &FusionRing) -> bool {
        std::ptr::eq(self.ring.as_ref(), other) || *self.ring == *other
    }

    /// Deligne product: `S = S_A ⊗ S_B`, `θ = θ_A ⊗ θ_B`, `d = d_A ⊗ d_B`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let ring = Arc::new(self.ring.product(&other.ring)?);
        let s = self.s.kron(&other.s);
        let theta = self
            .theta
            .iter()
            .flat_map(|&a| other.theta.iter().map(move |&b| a * b))
            .collect();
        let dims = self
            .dims
            .iter()
            .flat_map(|&a| other.dims.iter().map(move |&b| a * b))
            .collect();
        Ok(Self::new(ring, s, theta, Some(dims))?.with_tolerance(self.tolerance.max(other.tolerance)))
    }

    /// Checks the structural identities; `strict` adds modularity
    /// (`S S† = D² I`, full rank) and Verlinde integrality.
    pub fn validate(&self, strict: bool) -> ValidationReport {
        let r = self.rank();
        let tol = self.tolerance;
        let mut report = ValidationReport::default();
        for v in self.ring.validate().violations {
            report.push(&format!("ring {}", v.check), v.detail);
        }
        {
            let mut sink = CheckSink::new(&mut report, "dimensions");
            for a in 0..r {
                if !(self.dims[a] > T::zero()) {
                    sink.fail(|| format!("d({a}) = {} is not positive", self.dims[a]));
                }
            }
            for a in 0..r {
                for b in 0..r {
                    let rhs = (0..r).fold(T::zero(), |acc, c| {
                        acc + T::count(self.ring.n(a, b, c) as usize) * self.dims[c]
                    });
                    let lhs = self.dims[a] * self.dims[b];
                    if (lhs - rhs).abs() > tol * rhs.max(T::one()) {
                        sink.fail(|| format!("d({a})d({b}) = {lhs} but fusion gives {rhs}"));
                    }
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "s vacuum row");
            if !close(self.s[(0, 0)], C::one(), tol) {
                sink.fail(|| format!("S(0,0) = {} (expected 1)", self.s[(0, 0)]));
            }
            for a in 1..r {
                let d = re(self.dims[a]);
                if !close(self.s[(0, a)], d, tol) {
                    sink.fail(|| format!("S(0,{a}) = {} but d({a}) = {}", self.s[(0, a)], self.dims[a]));
                }
                if !close(self.s[(a, 0)], d, tol) {
                    sink.fail(|| format!("S({a},0) = {} but d({a}) = {}", self.s[(a, 0)], self.dims[a]));
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "s symmetry");
            for a in 0..r {
                for b in a + 1..r {
                    if !close(self.s[(a, b)], self.s[(b, a)], tol) {
                        sink.fail(|| {
                            format!("S({a},{b}) = {} but S({b},{a}) = {}", self.s[(a, b)], self.s[(b, a)])
                        });
                    }
                }
            }
        }
        if !close(self.theta[0], C::one(), tol) {
            report.push("vacuum twist", format!("θ(0) = {} (expected 1)", self.theta[0]));
        }
        {
            let mut sink = CheckSink::new(&mut report, "twist modulus");
            for a in 0..r {
                if (self.theta[a].norm() - T::one()).abs() > tol {
                    sink.fail(|| format!("|θ({a})| = {}", self.theta[a].norm()));
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "twist duality");
            for a in 0..r {
                let ab = self.ring.dual(a);
                if a < ab && !close(self.theta[a], self.theta[ab], tol) {
                    sink.fail(|| {
                        format!("θ({a}) = {} but θ(dual {a} = {ab}) = {}", self.theta[a], self.theta[ab])
                    });
                }
            }
        }
        if strict {
            self.validate_strict(&mut report);
        }
        report
    }

    fn validate_strict(&self, report: &mut ValidationReport) {
        let r = self.rank();
        let d2 = self.global_dim_sq();
        let gram = self.s.matmul(&self.s.adjoint());
        let target: CMatrix<T> = Matrix::identity(r).map(|z: &C<T>| z * d2);
        let err = gram.max_abs_diff(&target);
        let modular_tol = self.tolerance * d2.max(T::one());
        let modular = err <= modular_tol;
        if !modular {
            report.push(
                "modularity",
                format!("max |S S† − D² I| = {err:e} with D² = {d2}"),
            );
        }
        let rank = self.s.rank(T::floor_tol(1e-10));
        if rank < r {
            report.push("s rank", format!("numerical rank {rank} < {r}"));
        }
        if !modular {
            report.push("verlinde", "skipped: S is not modular");
            return;
        }
        match self.verlinde_fusion() {
            Ok(tensor) => {
                let vtol = T::floor_tol(VERLINDE_TOLERANCE).max(self.tolerance);
                let mut sink = CheckSink::new(report, "verlinde");
                for a in 0..r {
                    for b in 0..r {
                        for c in 0..r {
                            let v = tensor[(a * r + b) * r + c];
                            let n = T::count(self.ring.n(a, b, c) as usize);
                            if (v - n).abs() > vtol {
                                sink.fail(|| format!("Verlinde N_{{{a},{b}}}^{c} = {v} but ring has {n}"));
                            }
                        }
                    }
                }
            }
            Err(e) => report.push("verlinde", e.to_string()),
        }
    }

    /// `N'_{ab}^c = Σ_x S_{ax} S_{bx} conj(S_{cx}) / (D² S_{0x})`, flattened at
    /// `(a * rank + b) * rank + c`. Imaginary parts above tolerance are an error.
    pub fn verlinde_fusion(&self) -> Result<Vec<T>> {
        let r = self.rank();
        let d2 = self.global_dim_sq();
        let gram = self.s.matmul(&self.s.adjoint());
        let target: CMatrix<T> = Matrix::identity(r).map(|z: &C<T>| z * d2);
        if gram.max_abs_diff(&target) > self.tolerance * d2.max(T::one()) {
            return Err(input("Verlinde formula needs modular data (S S† = D² I)"));
        }
        let zero_tol = T::floor_tol(1e-12);
        for x in 0..r {
            if self.s[(0, x)].norm() <= zero_tol {
                return Err(Error::Numerical(format!("S(0,{x}) vanishes")));
            }
        }
        let mut out = vec![T::zero(); r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let mut acc = C::<T>::zero();
                    for x in 0..r {
                        acc = acc
                            + self.s[(a, x)] * self.s[(b, x)] * self.s[(c, x)].conj()
                                / (self.s[(0, x)] * d2);
                    }
                    if acc.im.abs() > T::floor_tol(VERLINDE_TOLERANCE) {
                        return Err(Error::Numerical(format!(
                            "Verlinde N_{{{a},{b}}}^{c} has imaginary part {}",
                            acc.im
                        )));
                    }
                    out[(a * r + b) * r + c] = acc.re;
                }
            }
        }
        Ok(out)
    }
}

impl<T: Real> ModularData<T> {
    /// Helper for building `S` from a closure over label pairs.
    pub fn s_from_fn(rank: usize, f: impl FnMut(usize, usize) -> C<T>) -> CMatrix<T> {
        Matrix::from_fn(rank, rank, f)
    }
}
