//! Seeded random objects, morphisms and deformations for property suites
//! and the `--deform random` transport mode.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fusion::FusionRing;
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::{Real, C};
use crate::semisimple::{BlockMorphism, ConjugateDeformation, SemisimpleObject};

pub type SampleRng = ChaCha8Rng;

/// Seed used by every randomized command when none is given.
pub const DEFAULT_SEED: u64 = 7;

/// Largest per-block condition number accepted for a random invertible draw.
const RANDOM_CONDITION_CAP: f64 = 1e4;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry<T: Real>(rng: &mut SampleRng) -> C<T> {
    C::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
}

pub fn random_matrix<T: Real>(rows: usize, cols: usize, rng: &mut SampleRng) -> CMatrix<T> {
    Matrix::from_fn(rows, cols, |_, _| entry(rng))
}

/// Nonzero object with each multiplicity in `0..=max_mult`.
pub fn random_object(ring: &Arc<FusionRing>, max_mult: u32, rng: &mut SampleRng) -> SemisimpleObject {
    loop {
        let mult: Vec<u32> = (0..ring.rank()).map(|_| rng.gen_range(0..=max_mult)).collect();
        if mult.iter().any(|&n| n > 0) {
            return SemisimpleObject::new(ring.clone(), mult).expect("rank matches");
        }
    }
}

pub fn random_morphism<T: Real>(
    source: &SemisimpleObject,
    target: &SemisimpleObject,
    rng: &mut SampleRng,
) -> BlockMorphism<T> {
    let blocks = (0..source.mult().len())
        .map(|a| random_matrix(target.n(a), source.n(a), rng))
        .collect();
    BlockMorphism::new(source.clone(), target.clone(), blocks).expect("shapes match")
}

fn invertible_block<T: Real>(n: usize, rng: &mut SampleRng) -> CMatrix<T> {
    let cap = T::lit(RANDOM_CONDITION_CAP);
    loop {
        let m = random_matrix(n, n, rng);
        if n == 0 || m.condition_number() <= cap {
            return m;
        }
    }
}

/// Random invertible `T` on `obj`, redrawn blockwise until well conditioned.
pub fn random_deformation<T: Real>(obj: &SemisimpleObject, rng: &mut SampleRng) -> ConjugateDeformation<T> {
    let blocks = (0..obj.mult().len()).map(|a| invertible_block(obj.n(a), rng)).collect();
    let t = BlockMorphism::endo(obj, blocks).expect("shapes match");
    ConjugateDeformation::new(t).expect("well-conditioned draw")
}

/// Haar-like unitary block: Gram–Schmidt on the columns of a random matrix.
pub fn random_unitary<T: Real>(n: usize, rng: &mut SampleRng) -> CMatrix<T> {
    let m = invertible_block::<T>(n, rng);
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C<T>> = (0..n).map(|i| m[(i, j)]).collect();
        for q in &cols {
            let proj = q.iter().zip(&v).fold(C::<T>::zero(), |acc, (qi, vi)| acc + qi.conj() * vi);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi = *vi - proj * *qi;
            }
        }
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        for vi in &mut v {
            *vi = *vi / norm;
        }
        cols.push(v);
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random unitary `T` on `obj`. Unitary deformations keep the solution norms
/// equal to the standard ones.
pub fn random_unitary_deformation<T: Real>(obj: &SemisimpleObject, rng: &mut SampleRng) -> ConjugateDeformation<T> {
    let blocks = (0..obj.mult().len()).map(|a| random_unitary(obj.n(a), rng)).collect();
    let t = BlockMorphism::endo(obj, blocks).expect("shapes match");
    ConjugateDeformation::new(t).expect("unitary blocks are well conditioned")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_blocks_are_unitary() {
        let mut rng = seeded(1);
        for n in 1..6 {
            let u = random_unitary::<f64>(n, &mut rng);
            let g = u.adjoint().matmul(&u);
            assert!(g.max_abs_diff(&Matrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_matrix::<f64>(3, 3, &mut seeded(5));
        let b = random_matrix::<f64>(3, 3, &mut seeded(5));
        assert_eq!(a, b);
    }
}
