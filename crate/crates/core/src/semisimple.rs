//! Semisimple objects as multiplicity vectors, morphisms as per-label blocks,
//! and the trace calculus for deformed conjugate-equation solutions.
//!
//! The block basis stands in for the isometries `u_c^ρ(μ)`: a morphism
//! `X: ρ → σ` is one `n_{σ,c} × n_{ρ,c}` complex block per simple label `c`,
//! and the central projection `p_c^ρ` is the identity block at `c`.
//!
//! A (not necessarily standard) solution `(R, R̄)` for `(ρ, ρ̄)` is stored only
//! through the invertible `T ∈ End(ρ)` relating it to the standard one:
//! `R = (id ⊗ T*) R'`, `R̄ = (T⁻¹ ⊗ id) R̄'`. Every quantity evaluated here
//! factors through `T*T`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{input, Error, Result};
use crate::fusion::{FusionRing, Label};
use crate::matrix::{CMatrix, Matrix};
use crate::modular::ModularData;
use crate::scalar::{re, Real, C};

/// Condition-number cap on each block of a deformation.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct SemisimpleObject {
    ring: Arc<FusionRing>,
    mult: Vec<u32>,
}

impl SemisimpleObject {
    pub fn new(ring: Arc<FusionRing>, mult: Vec<u32>) -> Result<Self> {
        if mult.len() != ring.rank() {
            return Err(input(format!(
                "multiplicity vector has {} entries, ring rank is {}",
                mult.len(),
                ring.rank()
            )));
        }
        Ok(Self { ring, mult })
    }

    pub fn zero(ring: Arc<FusionRing>) -> Self {
        let r = ring.rank();
        Self { ring, mult: vec![0; r] }
    }

    pub fn simple(ring: Arc<FusionRing>, a: Label) -> Result<Self> {
        ring.check_label(a)?;
        let mut mult = vec![0; ring.rank()];
        mult[a.0] = 1;
        Ok(Self { ring, mult })
    }

    /// Direct sum of the given labels, repeats allowed.
    pub fn sum_of(ring: Arc<FusionRing>, labels: &[Label]) -> Result<Self> {
        let mut mult = vec![0; ring.rank()];
        for &a in labels {
            ring.check_label(a)?;
            mult[a.0] += 1;
        }
        Ok(Self { ring, mult })
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    pub fn mult(&self) -> &[u32] {
        &self.mult
    }

    #[inline]
    pub fn n(&self, a: usize) -> usize {
        self.mult[a] as usize
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&n| n == 0)
    }

    /// Labels with nonzero multiplicity, ascending.
    pub fn support(&self) -> Vec<Label> {
        (0..self.mult.len())
            .filter(|&a| self.mult[a] > 0)
            .map(Label)
            .collect()
    }

    pub fn same_ring(&self, other: &FusionRing) -> bool {
        std::ptr::eq(self.ring.as_ref(), other) || *self.ring == *other
    }

    /// `Σ_a n_a d(a)`.
    pub fn dimension<T: Real>(&self, dims: &[T]) -> T {
        self.mult
            .iter()
            .zip(dims)
            .fold(T::zero(), |acc, (&n, &d)| acc + T::count(n as usize) * d)
    }
}

/// `ρ̄`: multiplicities transported along the dual, `n_{ρ̄, ā} = n_{ρ, a}`.
pub fn conjugate_object(rho: &SemisimpleObject) -> SemisimpleObject {
    let mut mult = vec![0; rho.mult.len()];
    for (a, &n) in rho.mult.iter().enumerate() {
        mult[rho.ring.dual(a)] = n;
    }
    SemisimpleObject {
        ring: rho.ring.clone(),
        mult,
    }
}

/// Morphism `source → target` between semisimple objects over one ring.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMorphism<T: Real> {
    source: SemisimpleObject,
    target: SemisimpleObject,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> BlockMorphism<T> {
    pub fn new(
        source: SemisimpleObject,
        target: SemisimpleObject,
        blocks: Vec<CMatrix<T>>,
    ) -> Result<Self> {
        if !source.same_ring(&target.ring) {
            return Err(Error::RingMismatch);
        }
        if blocks.len() != source.mult.len() {
            return Err(input(format!(
                "{} blocks supplied for rank {}",
                blocks.len(),
                source.mult.len()
            )));
        }
        for (a, b) in blocks.iter().enumerate() {
            if b.shape() != (target.n(a), source.n(a)) {
                return Err(input(format!(
                    "block at label {a} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    target.n(a),
                    source.n(a)
                )));
            }
        }
        Ok(Self {
            source,
            target,
            blocks,
        })
    }

    /// Endomorphism of `obj` from its blocks.
    pub fn endo(obj: &SemisimpleObject, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        Self::new(obj.clone(), obj.clone(), blocks)
    }

    pub fn identity(obj: &SemisimpleObject) -> Self {
        let blocks = (0..obj.mult.len()).map(|a| Matrix::identity(obj.n(a))).collect();
        Self {
            source: obj.clone(),
            target: obj.clone(),
            blocks,
        }
    }

    pub fn zero(source: &SemisimpleObject, target: &SemisimpleObject) -> Result<Self> {
        let blocks = (0..source.mult.len())
            .map(|a| Matrix::zeros(target.n(a), source.n(a)))
            .collect();
        Self::new(source.clone(), target.clone(), blocks)
    }

    /// Endomorphism acting as the scalar `values[a]` on the isotypic component `a`.
    pub fn scalar_blocks(obj: &SemisimpleObject, values: &[C<T>]) -> Result<Self> {
        if values.len() != obj.mult.len() {
            return Err(input("one scalar per label required"));
        }
        let blocks = (0..obj.mult.len())
            .map(|a| Matrix::identity(obj.n(a)).map(|z: &C<T>| z * values[a]))
            .collect();
        Self::endo(obj, blocks)
    }

    pub fn source(&self) -> &SemisimpleObject {
        &self.source
    }

    pub fn target(&self) -> &SemisimpleObject {
        &self.target
    }

    pub fn block(&self, a: usize) -> &CMatrix<T> {
        &self.blocks[a]
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// `self ∘ rhs`, requiring `rhs.target == self.source`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if rhs.target != self.source {
            return Err(input("composition: codomain and domain differ"));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| a.matmul(b))
            .collect();
        Ok(Self {
            source: rhs.source.clone(),
            target: self.target.clone(),
            blocks,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: self.blocks.iter().map(CMatrix::adjoint).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.source != rhs.source || self.target != rhs.target {
            return Err(input("sum of morphisms with different domains"));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] + b[(i, j)]))
            .collect();
        Ok(Self {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        })
    }

    /// Max-abs entry difference; `None` on domain mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> Option<T> {
        if self.source != rhs.source || self.target != rhs.target {
            return None;
        }
        Some(
            self.blocks
                .iter()
                .zip(&rhs.blocks)
                .fold(T::zero(), |m, (a, b)| m.max(a.max_abs_diff(b))),
        )
    }

    /// Blockwise inverse; fails on any singular block.
    pub fn inverse(&self) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(a, b)| {
                b.inverse().ok_or(Error::SingularDeformation {
                    label: a,
                    condition: f64::INFINITY,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks,
        })
    }
}

/// `Tr_ρ(X) = Σ_a d(a) · tr(X_a)` for `X ∈ End(ρ)`.
pub fn categorical_trace<T: Real>(x: &BlockMorphism<T>, dims: &[T]) -> Result<C<T>> {
    if !x.is_endomorphism() {
        return Err(input("trace needs an endomorphism"));
    }
    if x.source.is_zero() {
        return Err(Error::ZeroObject("categorical trace"));
    }
    if dims.len() != x.blocks.len() {
        return Err(input("dimension vector does not match ring rank"));
    }
    Ok(x.blocks
        .iter()
        .zip(dims)
        .fold(C::zero(), |acc, (b, &d)| acc + b.trace() * d))
}

/// Central projection `p_a^ρ`: identity block at `a`, zero elsewhere.
pub fn central_projection<T: Real>(rho: &SemisimpleObject, a: Label) -> Result<BlockMorphism<T>> {
    rho.ring.check_label(a)?;
    let blocks = (0..rho.mult.len())
        .map(|c| {
            if c == a.0 {
                Matrix::identity(rho.n(c))
            } else {
                Matrix::zeros(rho.n(c), rho.n(c))
            }
        })
        .collect();
    BlockMorphism::endo(rho, blocks)
}

/// An invertible `T ∈ End(ρ)` parameterizing a solution of the conjugate
/// equations relative to the standard one. `T = id` is the standard solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateDeformation<T: Real> {
    t: BlockMorphism<T>,
}

impl<T: Real> ConjugateDeformation<T> {
    pub fn new(t: BlockMorphism<T>) -> Result<Self> {
        if !t.is_endomorphism() {
            return Err(input("deformation must be an endomorphism"));
        }
        if t.source.is_zero() {
            return Err(Error::ZeroObject("conjugate deformation"));
        }
        let cap = T::lit(MAX_CONDITION);
        for (a, b) in t.blocks.iter().enumerate() {
            if b.rows() == 0 {
                continue;
            }
            let cond = b.condition_number();
            if !(cond <= cap) {
                return Err(Error::SingularDeformation {
                    label: a,
                    condition: cond.to_f64().unwrap_or(f64::INFINITY),
                });
            }
        }
        Ok(Self { t })
    }

    pub fn standard(obj: &SemisimpleObject) -> Result<Self> {
        Self::new(BlockMorphism::identity(obj))
    }

    pub fn object(&self) -> &SemisimpleObject {
        &self.t.source
    }

    pub fn morphism(&self) -> &BlockMorphism<T> {
        &self.t
    }

    /// `T*T`.
    pub fn gram(&self) -> BlockMorphism<T> {
        self.t.adjoint().compose(&self.t).expect("endomorphism")
    }

    /// `(T*T)⁻¹`.
    pub fn gram_inverse(&self) -> Result<BlockMorphism<T>> {
        self.gram().inverse()
    }
}

/// `(‖R‖², ‖R̄‖²) = (Tr_ρ(T*T), Tr_ρ((T*T)⁻¹))`.
pub fn solution_norms<T: Real>(def: &ConjugateDeformation<T>, dims: &[T]) -> Result<(T, T)> {
    let left = categorical_trace(&def.gram(), dims)?;
    let right = categorical_trace(&def.gram_inverse()?, dims)?;
    Ok((left.re, right.re))
}

/// Which half of the solution a coefficient vector comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `t_a = d(a)⁻¹ Tr_ρ(p_a T*T)`, from `R`.
    Left,
    /// `s_b = d(b)⁻¹ Tr_σ(p_b (W*W)⁻¹)`, from `R̄`.
    Right,
}

/// Per-label coefficients of the deformed solution; zero off the support.
pub fn solution_coefficients<T: Real>(
    def: &ConjugateDeformation<T>,
    side: Side,
    dims: &[T],
) -> Result<Vec<T>> {
    let rho = def.object();
    let positive = match side {
        Side::Left => def.gram(),
        Side::Right => def.gram_inverse()?,
    };
    (0..rho.mult.len())
        .map(|a| {
            if rho.n(a) == 0 {
                return Ok(T::zero());
            }
            let p = central_projection(rho, Label(a))?;
            let tr = categorical_trace(&p.compose(&positive)?, dims)?;
            Ok(tr.re / dims[a])
        })
        .collect()
}

/// Double-braiding trace of two deformed solutions, evaluated through the
/// coefficient shortcut `Σ_{a,b} t_a^ρ s_b^σ S_{a,b}`.
pub fn double_braiding_trace<T: Real>(
    rho_def: &ConjugateDeformation<T>,
    sigma_def: &ConjugateDeformation<T>,
    md: &ModularData<T>,
) -> Result<C<T>> {
    if !md.same_ring(rho_def.object().ring()) || !md.same_ring(sigma_def.object().ring()) {
        return Err(Error::RingMismatch);
    }
    let t = solution_coefficients(rho_def, Side::Left, md.dims())?;
    let s = solution_coefficients(sigma_def, Side::Right, md.dims())?;
    let mut acc = C::zero();
    for (a, &ta) in t.iter().enumerate() {
        if ta == T::zero() {
            continue;
        }
        for (b, &sb) in s.iter().enumerate() {
            if sb != T::zero() {
                acc = acc + md.s()[(a, b)] * (ta * sb);
            }
        }
    }
    Ok(acc)
}

/// Self-braiding trace `Σ_a n_{ρ,a} θ(a)` with `θ(a) = d(a) θ_a` the trace of
/// `ε(τ_a, τ_a)`.
///
/// The multiplicity is recovered as `tr(p_a T*T (T*T)⁻¹)`, so the deformation
/// genuinely enters the computation and cancels only numerically.
pub fn twist_trace<T: Real>(def: &ConjugateDeformation<T>, md: &ModularData<T>) -> Result<C<T>> {
    if !md.same_ring(def.object().ring()) {
        return Err(Error::RingMismatch);
    }
    let gram = def.gram();
    let cancel = gram.compose(&def.gram_inverse()?)?;
    let rho = def.object();
    let theta = md.twist_traces();
    let mut acc = C::zero();
    for a in (0..rho.mult.len()).filter(|&a| rho.n(a) > 0) {
        let p = central_projection(rho, Label(a))?;
        let weight = p.compose(&cancel)?.blocks[a].trace();
        acc = acc + weight * theta[a];
    }
    Ok(acc)
}

/// Standard-solution value of the double braiding: `Σ n_{ρ,a} n_{σ,b} S_{a,b}`.
pub fn standard_double_braiding<T: Real>(
    rho: &SemisimpleObject,
    sigma: &SemisimpleObject,
    md: &ModularData<T>,
) -> C<T> {
    let mut acc = C::zero();
    for a in 0..rho.mult.len() {
        for b in 0..sigma.mult.len() {
            let w = rho.mult[a] as usize * sigma.mult[b] as usize;
            if w > 0 {
                acc = acc + md.s()[(a, b)] * re(T::count(w));
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogModel;
    use crate::sampling::{random_deformation, random_morphism, random_object, seeded};
    use crate::scalar::{c, close};

    fn cat(name: &str) -> ModularData<f64> {
        CatalogModel::parse(name).unwrap().build().unwrap()
    }

    fn obj(md: &ModularData<f64>, names: &[&str]) -> SemisimpleObject {
        let labels: Vec<Label> = names.iter().map(|n| md.ring().label(n).unwrap()).collect();
        SemisimpleObject::sum_of(md.ring_arc().clone(), &labels).unwrap()
    }

    fn diag_def(o: &SemisimpleObject, values: &[f64]) -> ConjugateDeformation<f64> {
        let v: Vec<C<f64>> = values.iter().map(|&x| c(x, 0.0)).collect();
        ConjugateDeformation::new(BlockMorphism::scalar_blocks(o, &v).unwrap()).unwrap()
    }

    #[test]
    fn conjugates() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["1", "e"]);
        assert_eq!(conjugate_object(&o), o);
        let z3 = cat("toric_code_zn(3)");
        let o = obj(&z3, &["e", "e"]);
        let bar = conjugate_object(&o);
        assert_eq!(bar.n(z3.ring().label("e^2").unwrap().0), 2);
        assert_eq!(bar.n(z3.ring().label("e").unwrap().0), 0);
        let zero = SemisimpleObject::zero(z3.ring_arc().clone());
        assert!(conjugate_object(&zero).is_zero());
    }

    #[test]
    fn traces_of_identities_and_diagonals() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["1", "e", "e"]);
        let tr = categorical_trace(&BlockMorphism::identity(&o), tc.dims()).unwrap();
        assert!(close(tr, c(3.0, 0.0), 1e-12));

        let fib = cat("fibonacci");
        let tau = obj(&fib, &["τ"]);
        let tr = categorical_trace(&BlockMorphism::identity(&tau), fib.dims()).unwrap();
        assert!((tr.re - 1.618_033_988_7).abs() < 1e-9);

        let o = obj(&tc, &["1", "e"]);
        let x = BlockMorphism::scalar_blocks(&o, &[c(4.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(close(categorical_trace(&x, tc.dims()).unwrap(), c(5.0, 0.0), 1e-12));
    }

    #[test]
    fn zero_object_rejected() {
        let tc = cat("toric_code_z2");
        let zero = SemisimpleObject::zero(tc.ring_arc().clone());
        let id = BlockMorphism::<f64>::identity(&zero);
        assert_eq!(categorical_trace(&id, tc.dims()), Err(Error::ZeroObject("categorical trace")));
        assert!(matches!(ConjugateDeformation::new(id), Err(Error::ZeroObject(_))));
    }

    #[test]
    fn central_projections() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["1", "e"]);
        let e = tc.ring().label("e").unwrap();
        let p: BlockMorphism<f64> = central_projection(&o, e).unwrap();
        assert_eq!(p.block(0), &Matrix::from_rows(vec![vec![c(0.0, 0.0)]]).unwrap());
        assert_eq!(p.block(1), &Matrix::identity(1));

        let o = obj(&tc, &["e", "e", "m"]);
        let mut sum = BlockMorphism::<f64>::zero(&o, &o).unwrap();
        for a in tc.ring().labels() {
            let p = central_projection(&o, a).unwrap();
            sum = sum.add(&p).unwrap();
            assert!(p.compose(&p).unwrap().max_abs_diff(&p).unwrap() < 1e-15);
            assert!(p.adjoint().max_abs_diff(&p).unwrap() < 1e-15);
            for b in tc.ring().labels().filter(|&b| b != a) {
                let q = central_projection(&o, b).unwrap();
                let zero = BlockMorphism::zero(&o, &o).unwrap();
                assert!(p.compose(&q).unwrap().max_abs_diff(&zero).unwrap() < 1e-15);
            }
        }
        assert!(sum.max_abs_diff(&BlockMorphism::identity(&o)).unwrap() < 1e-15);
    }

    #[test]
    fn norms_and_coefficients() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["1", "e"]);
        let std = ConjugateDeformation::standard(&o).unwrap();
        let (l, r) = solution_norms(&std, tc.dims()).unwrap();
        assert!((l - 2.0).abs() < 1e-12 && (r - 2.0).abs() < 1e-12);

        let def = diag_def(&o, &[2.0, 1.0, 1.0, 1.0]);
        let (l, r) = solution_norms(&def, tc.dims()).unwrap();
        assert!((l - 5.0).abs() < 1e-12);
        assert!((r - 1.25).abs() < 1e-12);
        let t = solution_coefficients(&def, Side::Left, tc.dims()).unwrap();
        assert_eq!(t, vec![4.0, 1.0, 0.0, 0.0]);
        let s = solution_coefficients(&def, Side::Right, tc.dims()).unwrap();
        assert!((s[0] - 0.25).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);
        assert_eq!(&s[2..], &[0.0, 0.0]);

        let fib = cat("fibonacci");
        let tau = obj(&fib, &["τ"]);
        let (l, r) = solution_norms(&ConjugateDeformation::standard(&tau).unwrap(), fib.dims()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((l - phi).abs() < 1e-12 && (r - phi).abs() < 1e-12);
    }

    #[test]
    fn standard_coefficients_are_multiplicities() {
        let ising = cat("ising");
        let o = obj(&ising, &["1", "σ", "σ", "ψ", "ψ", "ψ"]);
        let t = solution_coefficients(&ConjugateDeformation::standard(&o).unwrap(), Side::Left, ising.dims()).unwrap();
        for (a, &ta) in t.iter().enumerate() {
            assert!((ta - o.n(a) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn double_braiding_examples() {
        let tc = cat("toric_code_z2");
        let rho = obj(&tc, &["1", "e"]);
        let sigma = obj(&tc, &["m"]);
        let v = double_braiding_trace(
            &diag_def(&rho, &[2.0, 1.0, 1.0, 1.0]),
            &ConjugateDeformation::standard(&sigma).unwrap(),
            &tc,
        )
        .unwrap();
        assert!(close(v, c(3.0, 0.0), 1e-12));

        let vac = obj(&tc, &["1"]);
        let std = ConjugateDeformation::standard(&vac).unwrap();
        assert!(close(double_braiding_trace(&std, &std, &tc).unwrap(), c(1.0, 0.0), 1e-15));

        let std = ConjugateDeformation::standard(&rho).unwrap();
        assert!(close(double_braiding_trace(&std, &std, &tc).unwrap(), c(4.0, 0.0), 1e-15));
    }

    #[test]
    fn twist_trace_examples() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["e", "f"]);
        let v = twist_trace(&ConjugateDeformation::standard(&o).unwrap(), &tc).unwrap();
        assert!(close(v, c(0.0, 0.0), 1e-15));

        let vac = obj(&tc, &["1"]);
        let def = diag_def(&vac, &[7.0, 1.0, 1.0, 1.0]);
        assert!(close(twist_trace(&def, &tc).unwrap(), c(1.0, 0.0), 1e-12));

        let all = obj(&tc, &["1", "e", "m", "f"]);
        let mut rng = seeded(11);
        let def = random_deformation(&all, &mut rng);
        let deformed = twist_trace(&def, &tc).unwrap();
        let standard = twist_trace(&ConjugateDeformation::standard(&all).unwrap(), &tc).unwrap();
        assert!(close(standard, c(2.0, 0.0), 1e-15));
        assert!(close(deformed, standard, 1e-10));
    }

    #[test]
    fn twist_trace_carries_dimension() {
        let fib = cat("fibonacci");
        let tau = obj(&fib, &["τ", "τ"]);
        let v = twist_trace(&ConjugateDeformation::standard(&tau).unwrap(), &fib).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = crate::scalar::root_of_unity::<f64>(2, 5) * (2.0 * phi);
        assert!(close(v, expected, 1e-12));
    }

    #[test]
    fn ring_mismatch_detected() {
        let tc = cat("toric_code_z2");
        let sem = cat("semion");
        let o = obj(&sem, &["s"]);
        let def = ConjugateDeformation::standard(&o).unwrap();
        assert_eq!(twist_trace(&def, &tc), Err(Error::RingMismatch));
        assert_eq!(double_braiding_trace(&def, &def, &tc), Err(Error::RingMismatch));
    }

    #[test]
    fn singular_and_ill_conditioned_rejected() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["1", "e"]);
        let err = ConjugateDeformation::<f64>::new(
            BlockMorphism::scalar_blocks(&o, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
        );
        assert!(matches!(err, Err(Error::SingularDeformation { label: 0, .. })));

        let o = obj(&tc, &["e", "e"]);
        let skew = Matrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1e-9, 0.0)]]).unwrap();
        let mut blocks: Vec<CMatrix<f64>> = (0..4).map(|a| Matrix::identity(o.n(a))).collect();
        blocks[1] = skew;
        let err = ConjugateDeformation::new(BlockMorphism::endo(&o, blocks).unwrap());
        assert!(matches!(err, Err(Error::SingularDeformation { label: 1, .. })));
    }

    #[test]
    fn block_shape_checked() {
        let tc = cat("toric_code_z2");
        let o = obj(&tc, &["e", "e"]);
        let blocks: Vec<CMatrix<f64>> = (0..4).map(|_| Matrix::identity(1)).collect();
        assert!(BlockMorphism::endo(&o, blocks).is_err());
    }

    #[test]
    fn trace_is_cyclic_and_faithful() {
        let ising = cat("ising");
        let mut rng = seeded(3);
        for _ in 0..20 {
            let rho = random_object(ising.ring_arc(), 3, &mut rng);
            let sigma = random_object(ising.ring_arc(), 3, &mut rng);
            let x = random_morphism(&rho, &sigma, &mut rng);
            let y = random_morphism(&sigma, &rho, &mut rng);
            let xy = categorical_trace(&x.compose(&y).unwrap(), ising.dims()).unwrap();
            let yx = categorical_trace(&y.compose(&x).unwrap(), ising.dims()).unwrap();
            assert!((xy - yx).norm() < 1e-10 * (1.0 + xy.norm()));

            let z = random_morphism(&rho, &rho, &mut rng);
            let pos = categorical_trace(&z.adjoint().compose(&z).unwrap(), ising.dims()).unwrap();
            assert!(pos.re > 0.0 && pos.im.abs() < 1e-12);
        }
    }
}
