//! Pointed braided categories from a finite abelian group and a quadratic
//! form, with explicit contraction of the double braiding and the self-braiding
//! on graded vectors.
//!
//! This is the second evaluation path for the trace lemmas: nothing here calls
//! into the coefficient formulas of [`crate::semisimple`].
//!
//! Gauge: simples are one-dimensional, associators are trivial, and the
//! braiding scalar on `τ_g ⊗ τ_h` is fixed by element index:
//! `R(g,h) = B(g,h)` if `g < h`, `1` if `g > h`, and `R(g,g) = q(g)`.
//! Any other splitting with `R(g,h)R(h,g) = B(g,h)` and `R(g,g) = q(g)` yields
//! the same contractions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{input, Error, Result};
use crate::fusion::{FusionRing, Label};
use crate::matrix::{CMatrix, Matrix};
use crate::modular::ModularData;
use crate::scalar::{root_of_unity, Real, C};
use crate::semisimple::{ConjugateDeformation, SemisimpleObject};

pub const MAX_ORDER: usize = 64;
pub const MAX_EXPONENT: u64 = 12;

/// Finite abelian group as a Cayley table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    names: Vec<String>,
    add: Vec<usize>,
    neg: Vec<usize>,
    exponent: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl FiniteAbelianGroup {
    /// `Z_{n1} × … × Z_{nk}`, first factor varying fastest in the element index.
    /// Element names are digit tuples like `(1,0)`; a single factor uses bare digits.
    pub fn cyclic_product(orders: &[u32]) -> Result<Self> {
        if orders.iter().any(|&n| n == 0) {
            return Err(input("cyclic factor of order 0"));
        }
        let order: usize = orders.iter().map(|&n| n as usize).product();
        if order > MAX_ORDER {
            return Err(input(format!("group order {order} exceeds {MAX_ORDER}")));
        }
        let digits = |mut i: usize| -> Vec<u32> {
            orders
                .iter()
                .map(|&n| {
                    let d = (i % n as usize) as u32;
                    i /= n as usize;
                    d
                })
                .collect()
        };
        let index = |ds: &[u32]| -> usize {
            ds.iter()
                .zip(orders)
                .rev()
                .fold(0usize, |acc, (&d, &n)| acc * n as usize + d as usize)
        };
        let names = (0..order)
            .map(|i| {
                let ds = digits(i);
                if ds.len() == 1 {
                    ds[0].to_string()
                } else {
                    let parts: Vec<String> = ds.iter().map(u32::to_string).collect();
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        let mut add = vec![0; order * order];
        let mut neg = vec![0; order];
        for g in 0..order {
            let dg = digits(g);
            let ng: Vec<u32> = dg.iter().zip(orders).map(|(&d, &n)| (n - d) % n).collect();
            neg[g] = index(&ng);
            for h in 0..order {
                let dh = digits(h);
                let s: Vec<u32> = dg.iter().zip(&dh).zip(orders).map(|((&a, &b), &n)| (a + b) % n).collect();
                add[g * order + h] = index(&s);
            }
        }
        Self::from_table(names, add, neg)
    }

    /// Reads the group off a ring whose fusion is a commutative permutation table.
    pub fn from_ring(ring: &FusionRing) -> Result<Self> {
        let r = ring.rank();
        let mut add = vec![0; r * r];
        for a in 0..r {
            for b in 0..r {
                let out = ring.fuse(Label(a), Label(b))?;
                match out.as_slice() {
                    [(c, 1)] => add[a * r + b] = c.0,
                    _ => {
                        return Err(input(format!(
                            "not pointed: {} ⊗ {} is not a single simple",
                            ring.name(a),
                            ring.name(b)
                        )))
                    }
                }
            }
        }
        for a in 0..r {
            for b in 0..a {
                if add[a * r + b] != add[b * r + a] {
                    return Err(input("not pointed: fusion is not commutative"));
                }
            }
        }
        Self::from_table(ring.names().to_vec(), add, ring.duals().to_vec())
    }

    fn from_table(names: Vec<String>, add: Vec<usize>, neg: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n > MAX_ORDER {
            return Err(input(format!("group order {n} exceeds {MAX_ORDER}")));
        }
        let mut exponent = 1u64;
        for g in 0..n {
            let mut k = 1u64;
            let mut x = g;
            while x != 0 {
                x = add[x * n + g];
                k += 1;
                if k as usize > n {
                    return Err(input("group table has no identity cycle"));
                }
            }
            exponent = exponent / gcd(exponent, k) * k;
        }
        if exponent > MAX_EXPONENT {
            return Err(input(format!("group exponent {exponent} exceeds {MAX_EXPONENT}")));
        }
        Ok(Self {
            names,
            add,
            neg,
            exponent,
        })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn add(&self, g: usize, h: usize) -> usize {
        self.add[g * self.order() + h]
    }

    #[inline]
    pub fn neg(&self, g: usize) -> usize {
        self.neg[g]
    }

    /// Group ring with `dual(g) = −g`.
    pub fn ring(&self) -> Result<FusionRing> {
        let n = self.order();
        let mut fusion = vec![0; n * n * n];
        for g in 0..n {
            for h in 0..n {
                fusion[(g * n + h) * n + self.add(g, h)] = 1;
            }
        }
        FusionRing::new(self.names.clone(), self.neg.clone(), fusion)
    }
}

#[derive(Debug, Clone)]
pub struct PointedCategory<T: Real> {
    group: FiniteAbelianGroup,
    ring: Arc<FusionRing>,
    q: Vec<C<T>>,
    tolerance: T,
}

impl<T: Real> PointedCategory<T> {
    /// Validates `q` exhaustively: `q(0) = 1`, `|q| = 1`, `q(−g) = q(g)`, and
    /// `B(g,h) = q(g+h)/(q(g)q(h))` is a symmetric bicharacter.
    pub fn new(group: FiniteAbelianGroup, q: Vec<C<T>>) -> Result<Self> {
        let ring = Arc::new(group.ring()?);
        Self::with_ring(group, ring, q)
    }

    fn with_ring(group: FiniteAbelianGroup, ring: Arc<FusionRing>, q: Vec<C<T>>) -> Result<Self> {
        let n = group.order();
        if q.len() != n {
            return Err(input(format!("quadratic form has {} values for group of order {n}", q.len())));
        }
        let pc = Self {
            group,
            ring,
            q,
            tolerance: T::floor_tol(1e-9),
        };
        let tol = pc.tolerance;
        let name = |g: usize| pc.group.names[g].clone();
        if (pc.q[0] - C::one()).norm() > tol {
            return Err(input("quadratic form: q(0) must be 1"));
        }
        for g in 0..n {
            if (pc.q[g].norm() - T::one()).abs() > tol {
                return Err(input(format!("quadratic form: |q({})| is not 1", name(g))));
            }
            if (pc.q[g] - pc.q[pc.group.neg(g)]).norm() > tol {
                return Err(input(format!("quadratic form: q(-{0}) differs from q({0})", name(g))));
            }
        }
        for g in 0..n {
            for h in 0..n {
                if (pc.b(g, h) - pc.b(h, g)).norm() > tol {
                    return Err(input(format!("bicharacter not symmetric at ({}, {})", name(g), name(h))));
                }
                for k in 0..n {
                    let lhs = pc.b(pc.group.add(g, h), k);
                    if (lhs - pc.b(g, k) * pc.b(h, k)).norm() > tol {
                        return Err(input(format!(
                            "B is not multiplicative at ({}, {}, {})",
                            name(g),
                            name(h),
                            name(k)
                        )));
                    }
                }
            }
        }
        Ok(pc)
    }

    /// Pointed structure carried by modular data whose ring is a group ring,
    /// with `q = θ`.
    pub fn from_modular_data(md: &ModularData<T>) -> Result<Self> {
        let group = FiniteAbelianGroup::from_ring(md.ring())?;
        Self::with_ring(group, md.ring_arc().clone(), md.theta().to_vec())
    }

    pub fn trivial() -> Self {
        Self::new(FiniteAbelianGroup::cyclic_product(&[]).expect("trivial group"), vec![C::one()])
            .expect("trivial form")
    }

    /// `Z_2` with `q(1) = i`.
    pub fn semion() -> Self {
        let g = FiniteAbelianGroup::cyclic_product(&[2]).expect("Z2");
        Self::new(g, vec![C::one(), root_of_unity(1, 4)]).expect("semion form")
    }

    /// `Z_2 × Z_2` with `q = (1, i, −i, 1)`.
    pub fn double_semion() -> Self {
        let g = FiniteAbelianGroup::cyclic_product(&[2, 2]).expect("Z2xZ2");
        let q = vec![C::one(), root_of_unity(1, 4), root_of_unity(3, 4), C::one()];
        Self::new(g, q).expect("double semion form")
    }

    /// `Z_N × Z_N` with `q(j,k) = exp(2πi jk/N)`.
    pub fn toric_code(n: u32) -> Result<Self> {
        let g = FiniteAbelianGroup::cyclic_product(&[n, n])?;
        let n = n as usize;
        let q = (0..n * n)
            .map(|i| root_of_unity(((i % n) * (i / n)) as i64, n as i64))
            .collect();
        Self::new(g, q)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    pub fn q(&self) -> &[C<T>] {
        &self.q
    }

    /// Monodromy `B(g,h) = q(g+h) / (q(g) q(h))`.
    pub fn b(&self, g: usize, h: usize) -> C<T> {
        self.q[self.group.add(g, h)] / (self.q[g] * self.q[h])
    }

    /// Braiding scalar of `ε(τ_g, τ_h)` in the index-ordered gauge.
    pub fn r_scalar(&self, g: usize, h: usize) -> Result<C<T>> {
        use std::cmp::Ordering::*;
        match g.cmp(&h) {
            Less => Ok(self.b(g, h)),
            Greater => Ok(C::one()),
            Equal => {
                if (self.q[g] * self.q[g] - self.b(g, g)).norm() > self.tolerance {
                    return Err(Error::Numerical(format!(
                        "no valid splitting: q({0})^2 differs from B({0},{0})",
                        self.group.names[g]
                    )));
                }
                Ok(self.q[g])
            }
        }
    }
}

/// `(S, θ, d)` of a pointed category: `S = B`, `θ = q`, `d ≡ 1`.
pub fn pointed_modular_data<T: Real>(pc: &PointedCategory<T>) -> Result<ModularData<T>> {
    let n = pc.group.order();
    let s = Matrix::from_fn(n, n, |g, h| pc.b(g, h));
    ModularData::new(pc.ring.clone(), s, pc.q.clone(), Some(vec![T::one(); n]))
}

/// Multiplicity-graded vector in a fourfold tensor product of semisimple objects.
/// Each component is keyed by its simple labels and stores a dense array over
/// the four multiplicity indices, row-major.
#[derive(Debug, Clone, Default)]
struct GradedVector<T: Real> {
    parts: BTreeMap<[usize; 4], ([usize; 4], Vec<C<T>>)>,
}

impl<T: Real> GradedVector<T> {
    /// `x ⊗ y` for `x` graded on label pairs `(l0, l1)` and `y` on `(l2, l3)`.
    fn tensor(x: &[([usize; 2], CMatrix<T>)], y: &[([usize; 2], CMatrix<T>)]) -> Self {
        let mut parts = BTreeMap::new();
        for (lx, mx) in x {
            for (ly, my) in y {
                let dims = [mx.rows(), mx.cols(), my.rows(), my.cols()];
                let mut data = Vec::with_capacity(dims.iter().product());
                for i0 in 0..dims[0] {
                    for i1 in 0..dims[1] {
                        for i2 in 0..dims[2] {
                            for i3 in 0..dims[3] {
                                data.push(mx[(i0, i1)] * my[(i2, i3)]);
                            }
                        }
                    }
                }
                parts.insert([lx[0], lx[1], ly[0], ly[1]], (dims, data));
            }
        }
        Self { parts }
    }

    /// Braids the two middle factors: `(l0, g, h, l3) → (l0, h, g, l3)` with
    /// multiplicity indices permuted alongside and the scalar `R(g, h)`.
    fn braid_middle(&self, pc: &PointedCategory<T>) -> Result<Self> {
        let mut parts = BTreeMap::new();
        for (labels, (dims, data)) in &self.parts {
            let r = pc.r_scalar(labels[1], labels[2])?;
            let nd = [dims[0], dims[2], dims[1], dims[3]];
            let mut out = vec![C::zero(); data.len()];
            let at = |d: &[usize; 4], i: [usize; 4]| ((i[0] * d[1] + i[1]) * d[2] + i[2]) * d[3] + i[3];
            for i0 in 0..dims[0] {
                for i1 in 0..dims[1] {
                    for i2 in 0..dims[2] {
                        for i3 in 0..dims[3] {
                            out[at(&nd, [i0, i2, i1, i3])] = data[at(dims, [i0, i1, i2, i3])] * r;
                        }
                    }
                }
            }
            parts.insert([labels[0], labels[2], labels[1], labels[3]], (nd, out));
        }
        Ok(Self { parts })
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    fn inner(&self, other: &Self) -> C<T> {
        let mut acc = C::zero();
        for (labels, (dims, data)) in &self.parts {
            if let Some((odims, odata)) = other.parts.get(labels) {
                debug_assert_eq!(dims, odims);
                for (a, b) in data.iter().zip(odata) {
                    acc = acc + a.conj() * b;
                }
            }
        }
        acc
    }
}

fn check_object<T: Real>(pc: &PointedCategory<T>, def: &ConjugateDeformation<T>) -> Result<()> {
    if def.object().ring() != pc.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// Components of `R = (id ⊗ T*) R'` in `Mor(1, ρ̄ ⊗ ρ)`: label `(−g, g)` holds
/// the `n_g × n_g` array `[μ][ν] = conj(T_g[μ][ν])`.
fn r_vector<T: Real>(pc: &PointedCategory<T>, def: &ConjugateDeformation<T>) -> Vec<([usize; 2], CMatrix<T>)> {
    let rho: &SemisimpleObject = def.object();
    rho.support()
        .into_iter()
        .map(|g| ([pc.group.neg(g.0), g.0], def.morphism().block(g.0).conj()))
        .collect()
}

/// Components of `R̄ = (T⁻¹ ⊗ id) R̄'` in `Mor(1, ρ ⊗ ρ̄)`: label `(h, −h)` holds
/// `[κ][λ] = (T_h⁻¹)[κ][λ]`.
fn rbar_vector<T: Real>(
    pc: &PointedCategory<T>,
    def: &ConjugateDeformation<T>,
) -> Result<Vec<([usize; 2], CMatrix<T>)>> {
    def.object()
        .support()
        .into_iter()
        .map(|h| {
            let block = def.morphism().block(h.0);
            let inv = block.inverse().ok_or(Error::SingularDeformation {
                label: h.0,
                condition: f64::INFINITY,
            })?;
            Ok(([h.0, pc.group.neg(h.0)], inv))
        })
        .collect()
}

/// `(R_ρ* ⊗ R̄_σ*)(id ⊗ ε(σ,ρ)ε(ρ,σ) ⊗ id)(R_ρ ⊗ R̄_σ)` by explicit contraction.
pub fn contract_double_braiding<T: Real>(
    pc: &PointedCategory<T>,
    rho: &ConjugateDeformation<T>,
    sigma: &ConjugateDeformation<T>,
) -> Result<C<T>> {
    check_object(pc, rho)?;
    check_object(pc, sigma)?;
    let v = GradedVector::tensor(&r_vector(pc, rho), &rbar_vector(pc, sigma)?);
    let once = v.braid_middle(pc)?;
    let twice = once.braid_middle(pc)?;
    Ok(v.inner(&twice))
}

/// `(R_ρ* ⊗ R̄_ρ*)(id ⊗ ε(ρ,ρ) ⊗ id)(R_ρ ⊗ R̄_ρ)` by explicit contraction.
pub fn contract_twist<T: Real>(pc: &PointedCategory<T>, rho: &ConjugateDeformation<T>) -> Result<C<T>> {
    check_object(pc, rho)?;
    let v = GradedVector::tensor(&r_vector(pc, rho), &rbar_vector(pc, rho)?);
    Ok(v.inner(&v.braid_middle(pc)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogModel;
    use crate::sampling::{random_deformation, seeded};
    use crate::scalar::{c, close};
    use crate::semisimple::BlockMorphism;

    fn obj(pc: &PointedCategory<f64>, names: &[&str]) -> SemisimpleObject {
        let labels: Vec<Label> = names.iter().map(|n| pc.ring().label(n).unwrap()).collect();
        SemisimpleObject::sum_of(pc.ring_arc().clone(), &labels).unwrap()
    }

    fn std(o: &SemisimpleObject) -> ConjugateDeformation<f64> {
        ConjugateDeformation::standard(o).unwrap()
    }

    #[test]
    fn groups() {
        let g = FiniteAbelianGroup::cyclic_product(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.names()[1], "(1,0)");
        assert_eq!(g.names()[2], "(0,1)");
        assert_eq!(g.add(1, 2), 3);
        assert_eq!(g.neg(2), 4);
        assert!(FiniteAbelianGroup::cyclic_product(&[13]).is_err());
        assert!(FiniteAbelianGroup::cyclic_product(&[2, 2, 2, 2, 2, 2, 2]).is_err());
        assert_eq!(FiniteAbelianGroup::cyclic_product(&[]).unwrap().order(), 1);

        let fib = CatalogModel::Fibonacci { conjugate: false }.build::<f64>().unwrap();
        assert!(FiniteAbelianGroup::from_ring(fib.ring()).is_err());
    }

    #[test]
    fn modular_data_examples() {
        let sem = pointed_modular_data(&PointedCategory::<f64>::semion()).unwrap();
        assert!(close(sem.theta()[1], c(0.0, 1.0), 1e-15));
        assert!(close(sem.s()[(1, 1)], c(-1.0, 0.0), 1e-15));
        assert!(close(sem.s()[(0, 1)], c(1.0, 0.0), 1e-15));

        let tc = pointed_modular_data(&PointedCategory::<f64>::toric_code(2).unwrap()).unwrap();
        let f: Vec<f64> = tc.theta().iter().map(|z| z.re).collect();
        assert_eq!(f, vec![1.0, 1.0, 1.0, -1.0]);
        assert!(close(tc.s()[(1, 2)], c(-1.0, 0.0), 1e-15));

        let triv = pointed_modular_data(&PointedCategory::<f64>::trivial()).unwrap();
        assert_eq!(triv.rank(), 1);
        assert!(close(triv.s()[(0, 0)], c(1.0, 0.0), 0.0));
    }

    #[test]
    fn bad_forms_rejected() {
        let z2 = FiniteAbelianGroup::cyclic_product(&[2]).unwrap();
        assert!(PointedCategory::<f64>::new(z2.clone(), vec![c(-1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(PointedCategory::<f64>::new(z2.clone(), vec![c(1.0, 0.0), c(2.0, 0.0)]).is_err());
        // e^{iπ/3} is not a quadratic-form value on Z2
        let bad = PointedCategory::<f64>::new(z2, vec![c(1.0, 0.0), root_of_unity(1, 6)]);
        assert!(bad.is_err());
        let z3 = FiniteAbelianGroup::cyclic_product(&[3]).unwrap();
        assert!(PointedCategory::<f64>::new(z3, vec![c(1.0, 0.0), root_of_unity(1, 3), root_of_unity(2, 3)]).is_err());
    }

    #[test]
    fn splitting_needs_square_root() {
        // Z4 with q(g) = i^{g^2}: B(1,1) = q(2)/q(1)^2 = 1/(-1) = -1 = q(1)^2.
        let z4 = FiniteAbelianGroup::cyclic_product(&[4]).unwrap();
        let q = (0..4).map(|g: i64| root_of_unity(g * g, 4)).collect();
        let pc = PointedCategory::<f64>::new(z4, q).unwrap();
        for g in 0..4 {
            for h in 0..4 {
                let prod = pc.r_scalar(g, h).unwrap() * pc.r_scalar(h, g).unwrap();
                assert!(close(prod, pc.b(g, h), 1e-12));
            }
        }
    }

    #[test]
    fn double_braiding_examples() {
        let pc = PointedCategory::<f64>::toric_code(2).unwrap();
        let rho = obj(&pc, &["(0,0)", "(1,0)"]);
        let t = BlockMorphism::scalar_blocks(&rho, &[c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let t = ConjugateDeformation::new(t).unwrap();
        let sigma = obj(&pc, &["(0,1)"]);
        assert!(close(contract_double_braiding(&pc, &t, &std(&sigma)).unwrap(), c(3.0, 0.0), 1e-12));

        let vac = obj(&pc, &["(0,0)"]);
        assert!(close(contract_double_braiding(&pc, &std(&vac), &std(&vac)).unwrap(), c(1.0, 0.0), 1e-15));

        let sem = PointedCategory::<f64>::semion();
        let s = obj(&sem, &["1"]);
        assert!(close(contract_double_braiding(&sem, &std(&s), &std(&s)).unwrap(), c(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn twist_examples() {
        let pc = PointedCategory::<f64>::toric_code(2).unwrap();
        let ef = obj(&pc, &["(1,0)", "(1,1)"]);
        assert!(close(contract_twist(&pc, &std(&ef)).unwrap(), c(0.0, 0.0), 1e-15));
        let vac = obj(&pc, &["(0,0)"]);
        assert!(close(contract_twist(&pc, &std(&vac)).unwrap(), c(1.0, 0.0), 1e-15));

        let sem = PointedCategory::<f64>::semion();
        let ss = obj(&sem, &["1", "1"]);
        let mut rng = seeded(2);
        for _ in 0..10 {
            let def = random_deformation(&ss, &mut rng);
            assert!(close(contract_twist(&sem, &def).unwrap(), c(0.0, 2.0), 1e-10));
        }
    }

    #[test]
    fn from_catalog_matches_constructors() {
        let md = CatalogModel::DoubleSemion.build::<f64>().unwrap();
        let pc = PointedCategory::from_modular_data(&md).unwrap();
        let again = pointed_modular_data(&pc).unwrap();
        assert!(again.s().max_abs_diff(md.s()) < 1e-12);
    }

    #[test]
    fn wrong_ring_rejected() {
        let pc = PointedCategory::<f64>::semion();
        let tc = PointedCategory::<f64>::toric_code(2).unwrap();
        let o = obj(&tc, &["(1,0)"]);
        assert_eq!(contract_twist(&pc, &std(&o)), Err(Error::RingMismatch));
    }
}
