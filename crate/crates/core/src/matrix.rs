//! Small dense row-major matrices.
//!
//! Everything in this crate is desk-scale (rank ≤ 64), so a flat `Vec` with
//! straightforward loops is all the linear algebra needed. Complex-specific
//! routines (inverse, adjoint, rank) live on `Matrix<C<T>>`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{Real, C};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type CMatrix<T> = Matrix<C<T>>;

impl<E> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from nested rows; returns `None` if rows are ragged.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Option<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return None;
        }
        Some(Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<F, U>(&self, f: F) -> Matrix<U>
    where
        F: FnMut(&E) -> U,
    {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<E: Clone + Zero> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }
}

impl<E: Clone + Zero + One> Matrix<E> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { E::one() } else { E::zero() })
    }

    pub fn diag(entries: &[E]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { E::zero() })
    }
}

impl<E> Matrix<E>
where
    E: Clone + Zero + Mul<Output = E> + Add<Output = E>,
{
    /// Matrix product; panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul inner dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(E::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> E {
        (0..self.rows.min(self.cols)).fold(E::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Kronecker product `self ⊗ rhs`, row index `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)].clone() * rhs[(i % rhs.rows, j % rhs.cols)].clone()
        })
    }
}

impl<E> Matrix<E>
where
    E: Clone + Sub<Output = E>,
{
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Matrix<T> {
    pub fn to_complex(&self) -> CMatrix<T> {
        self.map(|&x| Complex::new(x, T::zero()))
    }
}

impl Matrix<u32> {
    pub fn to_real<T: Real>(&self) -> Matrix<T> {
        self.map(|&n| T::count(n as usize))
    }
}

impl<T: Real> CMatrix<T> {
    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Max-abs distance to `rhs`; panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        self.sub(rhs).max_abs()
    }

    /// Gauss–Jordan inverse with partial pivoting. `None` when a pivot
    /// vanishes relative to the matrix scale.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let scale = self.max_abs();
        if scale == T::zero() {
            return None;
        }
        let tiny = scale * T::epsilon() * T::count(n);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[(r, col)].norm().partial_cmp(&a[(s, col)].norm()).unwrap())
                .unwrap();
            if a[(pivot, col)].norm() <= tiny {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] = a[(col, j)] * p;
                inv[(col, j)] = inv[(col, j)] * p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == Complex::zero() {
                    continue;
                }
                for j in 0..n {
                    let av = a[(col, j)];
                    let iv = inv[(col, j)];
                    a[(r, j)] = a[(r, j)] - f * av;
                    inv[(r, j)] = inv[(r, j)] - f * iv;
                }
            }
        }
        Some(inv)
    }

    /// Frobenius condition number `‖A‖_F · ‖A⁻¹‖_F`; infinite when singular.
    ///
    /// This upper-bounds the spectral condition number by at most a factor `n`.
    pub fn condition_number(&self) -> T {
        match self.inverse() {
            Some(inv) => self.frobenius_norm() * inv.frobenius_norm(),
            None => T::infinity(),
        }
    }

    /// Numerical rank by Gaussian elimination with complete pivoting.
    /// Pivots below `rel_tol · max|A|` count as zero.
    pub fn rank(&self, rel_tol: T) -> usize {
        let scale = self.max_abs();
        if scale == T::zero() {
            return 0;
        }
        let cutoff = scale * rel_tol;
        let mut a = self.clone();
        let (m, n) = self.shape();
        let mut rank = 0;
        let mut row_done = vec![false; m];
        let mut col_done = vec![false; n];
        loop {
            let mut best: Option<(usize, usize, T)> = None;
            for i in (0..m).filter(|&i| !row_done[i]) {
                for j in (0..n).filter(|&j| !col_done[j]) {
                    let v = a[(i, j)].norm();
                    if best.map_or(true, |(_, _, b)| v > b) {
                        best = Some((i, j, v));
                    }
                }
            }
            let Some((pi, pj, pv)) = best else { break };
            if pv <= cutoff {
                break;
            }
            rank += 1;
            row_done[pi] = true;
            col_done[pj] = true;
            let p = a[(pi, pj)];
            for i in (0..m).filter(|&i| !row_done[i]) {
                let f = a[(i, pj)] / p;
                for j in 0..n {
                    let v = a[(pi, j)];
                    a[(i, j)] = a[(i, j)] - f * v;
                }
            }
        }
        rank
    }
}
