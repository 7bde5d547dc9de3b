//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`) the numeric core is written against.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer count into this scalar type.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Looser of `requested` and a small multiple of machine epsilon.
    fn floor_tol(requested: f64) -> Self {
        let eps = Self::epsilon() * Self::lit(64.0);
        Self::lit(requested).max(eps)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `exp(2πi · num / den)`.
pub fn root_of_unity<T: Real>(num: i64, den: i64) -> C<T> {
    let k = num.rem_euclid(den);
    // quarter turns exactly, so real and imaginary entries stay clean
    if (4 * k) % den == 0 {
        let (o, z) = (T::one(), T::zero());
        return match 4 * k / den {
            0 => Complex::new(o, z),
            1 => Complex::new(z, o),
            2 => Complex::new(-o, z),
            _ => Complex::new(z, -o),
        };
    }
    let angle = T::TAU() * T::lit(k as f64) / T::lit(den as f64);
    Complex::from_polar(T::one(), angle)
}

#[inline]
pub fn close<T: Real>(a: C<T>, b: C<T>, tol: T) -> bool {
    (a - b).norm() <= tol
}
