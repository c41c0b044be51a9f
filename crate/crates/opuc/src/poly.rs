//! Dense polynomials with coefficients in an arbitrary scalar field.
//!
//! Coefficients are stored in ascending powers; the zero polynomial is the
//! empty vector. Evaluation is Horner's rule throughout.

use crate::scalar::Scalar;
use num_complex::Complex;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![T::one()],
        }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial z^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = T::one();
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of z^k (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiply by z^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let mut mult = T::zero();
                for _ in 0..k {
                    mult = mult + T::one();
                }
                c.clone() * mult
            })
            .collect();
        Self::new(coeffs)
    }

    /// The reversed polynomial of a degree-`n` polynomial:
    /// coefficient k of the result is conj(coefficient n-k).
    /// This is z^n conj(p(1/conj z)) with `n` supplied explicitly so that
    /// implicit leading zeros are preserved.
    pub fn reversed_conj(&self, n: usize) -> Self {
        let coeffs = (0..=n).map(|k| self.coeff(n - k).conjugate()).collect();
        Self::new(coeffs)
    }

    /// Expand prod (z - r_k).
    pub fn from_roots(roots: &[T]) -> Self {
        let mut p = Self::one();
        for r in roots {
            p = p.mul(&Self::new(vec![-r.clone(), T::one()]));
        }
        p
    }
}

impl<R: crate::scalar::Real> Poly<Complex<R>> {
    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> R {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(R::zero(), |a, b| a.max(b))
    }

    /// Coefficients of p(r w) as a polynomial in w, normalized so the leading
    /// coefficient keeps its magnitude order: coefficient k becomes c_k r^{k-n}.
    pub fn rescaled(&self, r: R) -> Self {
        let n = match self.degree() {
            Some(n) => n,
            None => return Self::zero(),
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let p = R::of(k as f64 - n as f64);
                c * Complex::new(r.powf(p), R::zero())
            })
            .collect();
        Self::new(coeffs)
    }
}

/// Serialization form used by the polynomial JSON interface:
/// `{"n": degree, "coeffs": [[re, im], ...]}`.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl Poly<Complex<f64>> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            n: self.degree().unwrap_or(0),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Self {
        Self::new(j.coeffs.iter().map(|c| Complex::new(c[0], c[1])).collect())
    }
}
