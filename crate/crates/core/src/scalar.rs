//! Scalar abstraction shared by every numerical module.
//!
//! All geometry and state code is written against [`Real`], which is
//! implemented for `f32` and `f64`. Complex amplitudes are
//! `num_complex::Complex<T>` over the same real type.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar used by the numerical core (`f32` or `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Widens a tolerance stated in double precision so that it stays
    /// meaningful at this type's precision.
    fn tolerance(value: f64) -> Self {
        let floor = Self::default_epsilon() * lit::<Self>(64.0);
        let value = lit::<Self>(value);
        if value > floor {
            value
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{i theta}`
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Squared Euclidean norm of a chart point in `C^n`.
#[inline]
pub fn norm_sqr<T: Real>(z: &[Complex<T>]) -> T {
    z.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
}

#[inline]
pub fn is_finite<T: Real>(x: T) -> bool {
    x.to_f64().is_some_and(f64::is_finite)
}
