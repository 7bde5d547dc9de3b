//! Tensor-functor multiplicity data, transport of conjugate solutions, and the
//! `X`, `Y`, `N` matrices relating the source and target invariants.
//!
//! Orientation: the functor goes from `source` (the degraded state, `ω₂`) to
//! `target` (the clean state, `ω₁`). `M[ζ][a]` is the multiplicity of the
//! target simple `a` in `F(τ_ζ)`, so `M` is `|Δ₂| × |Δ₁|`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::fusion::Label;
use crate::matrix::{CMatrix, Matrix};
use crate::modular::ModularData;
use crate::sampling::{random_unitary_deformation, SampleRng};
use crate::scalar::{Real, C};
use crate::semisimple::{solution_coefficients, ConjugateDeformation, SemisimpleObject, Side};
use crate::validation::{CheckSink, ValidationReport};

/// Absolute tolerance for the theorem residuals.
pub const THEOREM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct TensorFunctorData<T: Real> {
    source: ModularData<T>,
    target: ModularData<T>,
    m: Matrix<u32>,
    deformations: Vec<Option<ConjugateDeformation<T>>>,
}

#[derive(Debug, Clone, Copy)]
pub struct FunctorCheckOptions {
    /// Report twist compatibility as a warning instead of a violation.
    pub twist_as_warning: bool,
    pub tolerance: f64,
}

impl Default for FunctorCheckOptions {
    fn default() -> Self {
        Self {
            twist_as_warning: false,
            tolerance: THEOREM_TOLERANCE,
        }
    }
}

impl<T: Real> TensorFunctorData<T> {
    pub fn new(source: ModularData<T>, target: ModularData<T>, m: Matrix<u32>) -> Result<Self> {
        if m.shape() != (source.rank(), target.rank()) {
            return Err(input(format!(
                "multiplicity matrix is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                source.rank(),
                target.rank()
            )));
        }
        let deformations = vec![None; source.rank()];
        Ok(Self {
            source,
            target,
            m,
            deformations,
        })
    }

    /// `M = I` on a single model.
    pub fn identity(md: ModularData<T>) -> Self {
        let m = Matrix::identity(md.rank());
        Self::new(md.clone(), md, m).expect("square")
    }

    pub fn source(&self) -> &ModularData<T> {
        &self.source
    }

    pub fn target(&self) -> &ModularData<T> {
        &self.target
    }

    pub fn m(&self) -> &Matrix<u32> {
        &self.m
    }

    pub fn deformation(&self, zeta: Label) -> Option<&ConjugateDeformation<T>> {
        self.deformations.get(zeta.0).and_then(Option::as_ref)
    }

    /// `F(τ_ζ)` as a target-side object.
    pub fn image_object(&self, zeta: Label) -> Result<SemisimpleObject> {
        self.source.ring().check_label(zeta)?;
        SemisimpleObject::new(self.target.ring_arc().clone(), self.m.row(zeta.0).to_vec())
    }

    /// Attaches a deformation of the transported solution on `F(τ_ζ)`.
    pub fn with_deformation(mut self, zeta: Label, def: ConjugateDeformation<T>) -> Result<Self> {
        let obj = self.image_object(zeta)?;
        if *def.object() != obj {
            return Err(input(format!(
                "deformation for {} lives on a different object than F({})",
                self.source.ring().name(zeta.0),
                self.source.ring().name(zeta.0)
            )));
        }
        self.deformations[zeta.0] = Some(def);
        Ok(self)
    }

    pub fn clear_deformations(mut self) -> Self {
        self.deformations = vec![None; self.source.rank()];
        self
    }

    /// Replaces every deformation by a random unitary one. Unitary `T` keeps
    /// the transported norms equal to `d₂(ζ)`, which the theorem requires.
    pub fn with_random_unitary_deformations(mut self, rng: &mut SampleRng) -> Result<Self> {
        for zeta in 0..self.source.rank() {
            let obj = self.image_object(Label(zeta))?;
            self.deformations[zeta] = if obj.is_zero() {
                None
            } else {
                Some(random_unitary_deformation(&obj, rng))
            };
        }
        Ok(self)
    }

    /// Checks (i) vacuum row, faithfulness, (ii) fusion homomorphism,
    /// (iii) dual compatibility, (iv) dimension preservation, (v) twist
    /// compatibility.
    pub fn validate(&self, opts: FunctorCheckOptions) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (r2, r1) = self.m.shape();
        let src = self.source.ring();
        let tgt = self.target.ring();
        let tol = T::floor_tol(opts.tolerance);
        {
            let mut sink = CheckSink::new(&mut report, "vacuum row");
            for a in 0..r1 {
                let want = u32::from(a == 0);
                if self.m[(0, a)] != want {
                    sink.fail(|| format!("M[{}][{}] = {}, expected {want}", src.name(0), tgt.name(a), self.m[(0, a)]));
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "faithful");
            for z in 0..r2 {
                if self.m.row(z).iter().all(|&n| n == 0) {
                    sink.fail(|| format!("row {} is zero", src.name(z)));
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "homomorphism");
            for z in 0..r2 {
                for x in 0..r2 {
                    let mut lhs = vec![0u64; r1];
                    for g in 0..r2 {
                        let n = src.n(z, x, g) as u64;
                        if n > 0 {
                            for (l, &v) in lhs.iter_mut().zip(self.m.row(g)) {
                                *l += n * v as u64;
                            }
                        }
                    }
                    let rhs = tgt.fuse_vectors(self.m.row(z), self.m.row(x));
                    if lhs != rhs {
                        sink.fail(|| {
                            format!(
                                "F({0} ⊗ {1}) has multiplicities {lhs:?}, F({0}) ⊗ F({1}) has {rhs:?}",
                                src.name(z),
                                src.name(x)
                            )
                        });
                    }
                }
            }
        }
        {
            let mut sink = CheckSink::new(&mut report, "dual compatibility");
            for z in 0..r2 {
                for a in 0..r1 {
                    let (dz, da) = (src.dual(z), tgt.dual(a));
                    if self.m[(dz, da)] != self.m[(z, a)] {
                        sink.fail(|| {
                            format!(
                                "M[{}][{}] = {} but M[{}][{}] = {}",
                                src.name(dz),
                                tgt.name(da),
                                self.m[(dz, da)],
                                src.name(z),
                                tgt.name(a),
                                self.m[(z, a)]
                            )
                        });
                    }
                }
            }
        }
        {
            let d1 = self.target.dims();
            let d2 = self.source.dims();
            let mut sink = CheckSink::new(&mut report, "dimension");
            for z in 0..r2 {
                let image = weighted_row(self.m.row(z), d1);
                if (image - d2[z]).abs() > tol {
                    sink.fail(|| format!("dim F({}) = {image}, d({}) = {}", src.name(z), src.name(z), d2[z]));
                }
            }
        }
        {
            let t1 = self.target.twist_traces();
            let t2 = self.source.twist_traces();
            let mut failures = Vec::new();
            for z in 0..r2 {
                let image = self
                    .m
                    .row(z)
                    .iter()
                    .zip(&t1)
                    .fold(C::<T>::zero(), |acc, (&n, t)| acc + t * T::count(n as usize));
                if (image - t2[z]).norm() > tol {
                    failures.push(format!(
                        "θ({}) = {} but the image gives {}",
                        src.name(z),
                        t2[z],
                        image
                    ));
                }
            }
            for f in failures {
                if opts.twist_as_warning {
                    report.warn("twist", f);
                } else {
                    report.push("twist", f);
                }
            }
        }
        report
    }

    /// Transported solution on `F(τ_ζ)`: the attached deformation, or the
    /// standard solution when none was given.
    pub fn transport_solution(&self, zeta: Label) -> Result<ConjugateDeformation<T>> {
        self.validate(FunctorCheckOptions::default()).into_result()?;
        self.transported(zeta)
    }

    fn transported(&self, zeta: Label) -> Result<ConjugateDeformation<T>> {
        match self.deformation(zeta) {
            Some(def) => Ok(def.clone()),
            None => ConjugateDeformation::standard(&self.image_object(zeta)?),
        }
    }
}

fn weighted_row<T: Real>(row: &[u32], d: &[T]) -> T {
    row.iter()
        .zip(d)
        .fold(T::zero(), |acc, (&n, &x)| acc + T::count(n as usize) * x)
}

/// Max-abs errors of the four theorem equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals<T: Real> {
    /// `‖S₂ − X S₁ Y‖_max`
    pub s: T,
    /// `‖X d₁ − d₂‖_max`
    pub dims_x: T,
    /// `‖Yᵀ d₁ − d₂‖_max`
    pub dims_y: T,
    /// `‖θ₂ − N θ₁‖_max`, on twist traces.
    pub theta: T,
}

impl<T: Real> Residuals<T> {
    pub fn max(&self) -> T {
        self.s.max(self.dims_x).max(self.dims_y).max(self.theta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult<T: Real> {
    /// `|Δ₂| × |Δ₁|`, `X[ζ][a] = t_a` of the solution on `F(τ_ζ)`.
    pub x: Matrix<T>,
    /// `|Δ₁| × |Δ₂|`, `Y[b][ξ] = s_b` of the solution on `F(τ_ξ)`.
    pub y: Matrix<T>,
    pub n: Matrix<u32>,
    pub residuals: Residuals<T>,
}

/// Evaluates `X`, `Y`, `N` for a valid functor and the theorem residuals.
pub fn transport_matrices<T: Real>(fd: &TensorFunctorData<T>) -> Result<TransportResult<T>> {
    fd.validate(FunctorCheckOptions::default()).into_result()?;
    let (r2, r1) = fd.m.shape();
    let d1 = fd.target.dims();
    let mut x = Matrix::zeros(r2, r1);
    let mut y = Matrix::zeros(r1, r2);
    for z in 0..r2 {
        let def = fd.transported(Label(z))?;
        let t = solution_coefficients(&def, Side::Left, d1)?;
        let s = solution_coefficients(&def, Side::Right, d1)?;
        for a in 0..r1 {
            x[(z, a)] = t[a];
            y[(a, z)] = s[a];
        }
    }
    let n = fd.m.clone();
    let residuals = residuals(&x, &y, &n, fd.source(), fd.target());
    Ok(TransportResult { x, y, n, residuals })
}

/// Residuals of `S₂ = X S₁ Y`, `X d₁ = d₂`, `Yᵀ d₁ = d₂`, `θ₂ = N θ₁`.
pub fn residuals<T: Real>(
    x: &Matrix<T>,
    y: &Matrix<T>,
    n: &Matrix<u32>,
    source: &ModularData<T>,
    target: &ModularData<T>,
) -> Residuals<T> {
    let xs: CMatrix<T> = x.to_complex().matmul(target.s()).matmul(&y.to_complex());
    let s = xs.max_abs_diff(source.s());
    let d1 = target.dims();
    let d2 = source.dims();
    let xd = x.matvec(d1);
    let yd = y.transpose().matvec(d1);
    let max_diff = |v: &[T]| v.iter().zip(d2).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
    let t1 = target.twist_traces();
    let t2 = source.twist_traces();
    let nt = n.to_real::<T>().to_complex().matvec(&t1);
    let theta = nt.iter().zip(&t2).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()));
    Residuals {
        s,
        dims_x: max_diff(&xd),
        dims_y: max_diff(&yd),
        theta,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&TheoremCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Re-checks a transport result from its matrices: the four equations, sign
/// and integrality of the entries, and the shared support of `X`, `Y`, `N`.
pub fn verify_theorem<T: Real>(tr: &TransportResult<T>, fd: &TensorFunctorData<T>, tol: f64) -> TheoremReport {
    let tol_t = T::floor_tol(tol);
    let mut checks = Vec::new();
    let (r2, r1) = fd.m.shape();
    let shapes_ok = tr.x.shape() == (r2, r1) && tr.y.shape() == (r1, r2) && tr.n.shape() == (r2, r1);
    checks.push(TheoremCheck {
        name: "shapes",
        passed: shapes_ok,
        detail: format!("X {:?}, Y {:?}, N {:?}", tr.x.shape(), tr.y.shape(), tr.n.shape()),
    });
    if !shapes_ok {
        return TheoremReport { checks };
    }
    let res = residuals(&tr.x, &tr.y, &tr.n, fd.source(), fd.target());
    for (name, value) in [
        ("S2 = X S1 Y", res.s),
        ("X d1 = d2", res.dims_x),
        ("Y^T d1 = d2", res.dims_y),
        ("theta2 = N theta1", res.theta),
    ] {
        checks.push(TheoremCheck {
            name,
            passed: value <= tol_t,
            detail: format!("residual {value:e}"),
        });
    }
    let negative = |m: &Matrix<T>| m.iter().filter(|&&v| v < T::zero() || !v.is_finite()).count();
    checks.push(TheoremCheck {
        name: "X nonnegative",
        passed: negative(&tr.x) == 0,
        detail: format!("{} negative entries", negative(&tr.x)),
    });
    checks.push(TheoremCheck {
        name: "Y nonnegative",
        passed: negative(&tr.y) == 0,
        detail: format!("{} negative entries", negative(&tr.y)),
    });
    checks.push(TheoremCheck {
        name: "N integral",
        passed: tr.n == fd.m,
        detail: "N equals the functor multiplicities".to_string(),
    });
    let mut mismatched = Vec::new();
    for z in 0..r2 {
        for a in 0..r1 {
            let in_n = tr.n[(z, a)] > 0;
            if in_n != (tr.x[(z, a)] > T::zero()) || in_n != (tr.y[(a, z)] > T::zero()) {
                mismatched.push(format!("({}, {})", fd.source.ring().name(z), fd.target.ring().name(a)));
            }
        }
    }
    checks.push(TheoremCheck {
        name: "shared support",
        passed: mismatched.is_empty(),
        detail: if mismatched.is_empty() {
            "X rows, Y columns and N rows share supports".to_string()
        } else {
            format!("support differs at {}", mismatched.join(", "))
        },
    });
    TheoremReport { checks }
}

/// `G ∘ F` for `F: A → B`, `G: B → C`, with multiplicities `M_F · M_G`.
/// Deformations are dropped.
pub fn compose<T: Real>(f: &TensorFunctorData<T>, g: &TensorFunctorData<T>) -> Result<TensorFunctorData<T>> {
    if !g.source.same_ring(f.target.ring()) {
        return Err(Error::RingMismatch);
    }
    let (ra, rb) = f.m.shape();
    let rc = g.m.cols();
    let m = Matrix::from_fn(ra, rc, |i, k| (0..rb).map(|j| f.m[(i, j)] * g.m[(j, k)]).sum());
    TensorFunctorData::new(f.source.clone(), g.target.clone(), m)
}
