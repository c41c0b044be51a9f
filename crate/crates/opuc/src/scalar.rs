//! Scalar abstractions: a ring-level trait for polynomial arithmetic that is
//! satisfied both by complex floats and by exact rationals, and a float-level
//! trait for the analytic machinery.

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// Complex conjugation; the identity on real scalars.
pub trait Conjugate {
    fn conjugate(&self) -> Self;
}

impl Conjugate for f32 {
    fn conjugate(&self) -> Self {
        *self
    }
}

impl Conjugate for f64 {
    fn conjugate(&self) -> Self {
        *self
    }
}

impl<T: Clone + num_traits::Signed> Conjugate for Ratio<T> {
    fn conjugate(&self) -> Self {
        self.clone()
    }
}

impl<T: Clone + Num + Neg<Output = T>> Conjugate for Complex<T> {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

/// Field scalar usable as a polynomial coefficient. Implemented by
/// `Complex<f32>`, `Complex<f64>`, plain floats and exact rationals.
pub trait Scalar: Num + Neg<Output = Self> + Conjugate + Clone + PartialEq + Debug {}

impl<T> Scalar for T where T: Num + Neg<Output = T> + Conjugate + Clone + PartialEq + Debug {}

/// Floating-point scalar for the analytic layer (f32 or f64).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for lossy conversion of an f64 constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Build a complex number from real/imaginary parts given as f64 constants.
pub fn cx<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::of(re), R::of(im))
}
