//! Orthogonal polynomials on the unit circle with exponentially decaying
//! Verblunsky coefficients.
//!
//! The crate builds the monic polynomials by the Szego recursion, locates all
//! of their zeros, and measures the fine structure of the zero set: interior
//! zeros and their limit polynomials, Nevai-Totik zeros outside the critical
//! circle, clock spacing with gaps on the circle itself, and the
//! remainder/interior/outer decomposition valid in the critical annulus.
//!
//! Core arithmetic is generic over the scalar: polynomial and recursion
//! algebra accept any field implementing [`scalar::Scalar`] (complex floats
//! or exact rationals), while the analytic layer is generic over the float
//! type through [`scalar::Real`]. Concrete `f64` aliases are provided at the
//! crate root.

pub mod asymptotics;
pub mod coeffs;
pub mod determinants;
pub mod error;
pub mod fit;
pub mod poly;
pub mod recursion;
pub mod roots;
pub mod scalar;
pub mod szego;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalar.
pub type C32 = num_complex::Complex<f32>;
/// Dense polynomial over [`C64`].
pub type Poly64 = poly::Poly<C64>;
/// Dense polynomial over [`C32`].
pub type Poly32 = poly::Poly<C32>;
/// Exact rational scalar for coefficient-level identities.
pub type Q64 = num_rational::Ratio<i64>;
/// Dense polynomial over [`Q64`].
pub type PolyQ = poly::Poly<Q64>;
/// Coefficient family over `f64`.
pub type Family64 = coeffs::CoefficientFamily<f64>;
