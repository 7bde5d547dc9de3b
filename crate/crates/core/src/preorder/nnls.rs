//! Lawson–Hanson nonnegative least squares for small dense systems.

use crate::matrix::Matrix;
use crate::scalar::Real;

/// `argmin ‖A x − b‖₂` subject to `x ≥ 0`.
pub fn nnls<T: Real>(a: &Matrix<T>, b: &[T]) -> Vec<T> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "right-hand side length");
    let norm = a.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
    let tol = T::lit(10.0) * T::epsilon() * norm * T::count(m.max(n).max(1));
    let mut x = vec![T::zero(); n];
    let mut passive = vec![false; n];
    let gradient = |x: &[T]| -> Vec<T> {
        let r: Vec<T> = (0..m)
            .map(|i| b[i] - (0..n).fold(T::zero(), |acc, j| acc + a[(i, j)] * x[j]))
            .collect();
        (0..n)
            .map(|j| (0..m).fold(T::zero(), |acc, i| acc + a[(i, j)] * r[i]))
            .collect()
    };
    let mut w = gradient(&x);
    for _ in 0..3 * n.max(1) {
        let pick = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].partial_cmp(&w[j]).expect("finite gradient"));
        let Some(t) = pick else { break };
        passive[t] = true;
        loop {
            let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let s_p = least_squares(a, b, &cols);
            let mut s = vec![T::zero(); n];
            for (&j, &v) in cols.iter().zip(&s_p) {
                s[j] = v;
            }
            if cols.iter().all(|&j| s[j] > T::zero()) {
                x = s;
                break;
            }
            let mut alpha = T::one();
            for &j in &cols {
                if s[j] <= T::zero() {
                    let denom = x[j] - s[j];
                    if denom > T::zero() {
                        alpha = alpha.min(x[j] / denom);
                    }
                }
            }
            for j in 0..n {
                x[j] = x[j] + alpha * (s[j] - x[j]);
            }
            let mut moved = false;
            for &j in &cols {
                if x[j] <= tol {
                    x[j] = T::zero();
                    passive[j] = false;
                    moved = true;
                }
            }
            if !moved {
                // degenerate step; accept the clipped iterate
                for j in 0..n {
                    x[j] = x[j].max(T::zero());
                }
                break;
            }
        }
        w = gradient(&x);
    }
    x
}

/// Unconstrained least squares on the given columns via Householder QR.
/// Columns that are numerically dependent get coefficient zero.
fn least_squares<T: Real>(a: &Matrix<T>, b: &[T], cols: &[usize]) -> Vec<T> {
    let m = a.rows();
    let k = cols.len();
    let mut q: Vec<Vec<T>> = cols.iter().map(|&j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut rhs = b.to_vec();
    let mut diag = vec![T::zero(); k];
    for c in 0..k.min(m) {
        let norm = (c..m).fold(T::zero(), |acc, i| acc + q[c][i] * q[c][i]).sqrt();
        if norm == T::zero() {
            continue;
        }
        let alpha = if q[c][c] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (c..m).map(|i| q[c][i]).collect();
        v[0] = v[0] - alpha;
        let vv = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        if vv == T::zero() {
            diag[c] = alpha;
            continue;
        }
        let reflect = |col: &mut [T]| {
            let dot = v.iter().zip(&col[c..]).fold(T::zero(), |acc, (&vi, &ci)| acc + vi * ci);
            let f = (dot + dot) / vv;
            for (ci, &vi) in col[c..].iter_mut().zip(&v) {
                *ci = *ci - f * vi;
            }
        };
        for col in q.iter_mut().skip(c) {
            reflect(col);
        }
        reflect(&mut rhs);
        diag[c] = q[c][c];
    }
    let scale = diag.iter().fold(T::zero(), |acc, d| acc.max(d.abs()));
    let cutoff = scale * T::epsilon() * T::count(m.max(k).max(1)) * T::lit(10.0);
    let mut x = vec![T::zero(); k];
    for c in (0..k.min(m)).rev() {
        if q[c][c].abs() <= cutoff {
            continue;
        }
        let mut acc = rhs[c];
        for j in c + 1..k.min(m) {
            acc = acc - q[j][c] * x[j];
        }
        x[c] = acc / q[c][c];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_nonnegative_solution_recovered() {
        let a = Matrix::from_rows(vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![2.0, 0.0, 1.0]]).unwrap();
        let x_true = [0.5f64, 2.0, 1.0];
        let b = a.matvec(&x_true);
        let x = nnls(&a, &b);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn negative_direction_clamped() {
        // unconstrained optimum is x = -1
        let a = Matrix::from_rows(vec![vec![1.0], vec![1.0]]).unwrap();
        assert_eq!(nnls(&a, &[-1.0, -1.0]), vec![0.0]);
        let a = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let x = nnls::<f64>(&a, &[3.0, -2.0]);
        assert!((x[0] - 3.0).abs() < 1e-14 && x[1] == 0.0);
    }

    #[test]
    fn kkt_conditions_hold() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = Matrix::from_fn(6, 4, |_, _| rng.gen_range(-1.0..1.0));
            let b: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = nnls(&a, &b);
            let ax = a.matvec(&x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
            for j in 0..4 {
                let w: f64 = (0..6).map(|i| a[(i, j)] * r[i]).sum();
                assert!(x[j] >= 0.0);
                assert!(w <= 1e-10, "gradient {w} at {j}");
                if x[j] > 0.0 {
                    assert!(w.abs() < 1e-10);
                }
            }
        }
    }
}
