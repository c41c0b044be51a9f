//! Tridiagonal-form determinants
//!
//! ```text
//!           | z+x_1   z x_2                    |
//!           |   1     z+x_2   z x_3            |
//! D_m(z) =  |           1     z+x_3  ...       |
//!           |                  ...    z x_m    |
//!           |                   1     z+x_m    |
//! ```
//!
//! with D_0 = 1, evaluated by three equivalent routes, plus the normalized
//! polynomial (x_1...x_m)^{-1} D_m used in the periodic-ratio literature.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct DeterminantSpec<T> {
    pub x: Vec<T>,
    pub z: T,
}

/// Three-term route: D_m = (z + x_m) D_{m-1} - z x_m D_{m-2}.
pub fn delta_direct<T: Scalar>(spec: &DeterminantSpec<T>) -> T {
    let z = spec.z.clone();
    let mut prev2 = T::one(); // D_0
    if spec.x.is_empty() {
        return prev2;
    }
    let mut prev = z.clone() + spec.x[0].clone(); // D_1
    for xm in &spec.x[1..] {
        let next = (z.clone() + xm.clone()) * prev.clone() - z.clone() * xm.clone() * prev2;
        prev2 = prev;
        prev = next;
    }
    prev
}

/// First-order route: D_m = z D_{m-1} + x_1 x_2 ... x_m.
pub fn delta_recursive<T: Scalar>(spec: &DeterminantSpec<T>) -> T {
    let z = spec.z.clone();
    let mut value = T::one();
    let mut prod = T::one();
    for xm in &spec.x {
        prod = prod * xm.clone();
        value = z.clone() * value + prod.clone();
    }
    value
}

/// Expanded route: z^m + x_1 z^{m-1} + x_1 x_2 z^{m-2} + ... + x_1...x_m,
/// evaluated by Horner on the partial-product coefficients.
pub fn delta_expanded<T: Scalar>(spec: &DeterminantSpec<T>) -> T {
    // ascending coefficients: [x_1...x_m, ..., x_1 x_2, x_1, 1]
    let mut acc = T::one();
    let mut prods = Vec::with_capacity(spec.x.len() + 1);
    prods.push(T::one());
    for xj in &spec.x {
        acc = acc * xj.clone();
        prods.push(acc.clone());
    }
    prods.reverse();
    Poly::new(prods).eval(spec.z.clone())
}

/// Normalized polynomial (x_1...x_m)^{-1} D_m(z) as a coefficient vector
/// [1, x_m^{-1}, (x_m x_{m-1})^{-1}, ..., (x_1...x_m)^{-1}].
pub fn bls_polynomial<T: Scalar>(x: &[T]) -> Result<Poly<T>> {
    let m = x.len();
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(T::one());
    let mut acc = T::one();
    for k in 0..m {
        let factor = x[m - 1 - k].clone();
        if factor.is_zero() {
            return Err(Error::ZeroFactor { index: m - k });
        }
        acc = acc / factor;
        coeffs.push(acc.clone());
    }
    Ok(Poly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::Ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex64;
    type Q = Ratio<i64>;

    /// Cofactor-expansion oracle on the fully materialized matrix;
    /// exponential cost, test-only, capped at small m.
    fn laplace_oracle(x: &[C], z: C) -> C {
        let m = x.len();
        if m == 0 {
            return C::new(1.0, 0.0);
        }
        let mut mat = vec![vec![C::new(0.0, 0.0); m]; m];
        for i in 0..m {
            mat[i][i] = z + x[i];
            if i + 1 < m {
                mat[i][i + 1] = z * x[i + 1];
                mat[i + 1][i] = C::new(1.0, 0.0);
            }
        }
        det_by_cofactors(&mat)
    }

    fn det_by_cofactors(mat: &[Vec<C>]) -> C {
        let n = mat.len();
        if n == 1 {
            return mat[0][0];
        }
        let mut acc = C::new(0.0, 0.0);
        let mut sign = 1.0;
        for j in 0..n {
            if mat[0][j].norm() != 0.0 {
                let minor: Vec<Vec<C>> = mat[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                acc += C::new(sign, 0.0) * mat[0][j] * det_by_cofactors(&minor);
            }
            sign = -sign;
        }
        acc
    }

    #[test]
    fn base_cases() {
        let empty = DeterminantSpec::<C> {
            x: vec![],
            z: C::new(0.7, -0.3),
        };
        assert_eq!(delta_direct(&empty), C::new(1.0, 0.0));
        assert_eq!(delta_recursive(&empty), C::new(1.0, 0.0));
        assert_eq!(delta_expanded(&empty), C::new(1.0, 0.0));

        let one = DeterminantSpec {
            x: vec![C::new(2.0, 1.0)],
            z: C::new(0.5, 0.0),
        };
        let want = C::new(2.5, 1.0);
        assert_eq!(delta_direct(&one), want);
        assert_eq!(delta_recursive(&one), want);
        assert_eq!(delta_expanded(&one), want);
    }

    #[test]
    fn hand_checked_two_by_two() {
        // x = (1,2), z = 1: (z+x1)(z+x2) - z x2 = 2*3 - 2 = 4
        let spec = DeterminantSpec {
            x: vec![C::new(1.0, 0.0), C::new(2.0, 0.0)],
            z: C::new(1.0, 0.0),
        };
        assert_eq!(delta_recursive(&spec), C::new(4.0, 0.0));
        assert_eq!(delta_direct(&spec), C::new(4.0, 0.0));
    }

    #[test]
    fn all_zero_x_gives_power() {
        let spec = DeterminantSpec {
            x: vec![C::new(0.0, 0.0); 5],
            z: C::new(0.3, 0.4),
        };
        let wantz = C::new(0.3, 0.4).powu(5);
        for v in [
            delta_direct(&spec),
            delta_recursive(&spec),
            delta_expanded(&spec),
        ] {
            assert!((v - wantz).norm() < 1e-15);
        }
    }

    #[test]
    fn routes_agree_with_oracle_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for trial in 0..100 {
            let m = rng.gen_range(0..=8);
            let x: Vec<C> = (0..m)
                .map(|_| C::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0))
                .collect();
            let z = C::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
            let spec = DeterminantSpec { x: x.clone(), z };
            let reference = laplace_oracle(&x, z);
            let scale = reference.norm().max(1.0);
            for (route, v) in [
                ("direct", delta_direct(&spec)),
                ("recursive", delta_recursive(&spec)),
                ("expanded", delta_expanded(&spec)),
            ] {
                assert!(
                    (v - reference).norm() <= 1e-10 * scale,
                    "trial {trial} route {route}: {v} vs {reference}"
                );
            }
        }
    }

    #[test]
    fn exact_rational_routes_agree() {
        let spec = DeterminantSpec {
            x: vec![Q::new(1, 2), Q::new(-2, 3), Q::new(5, 1), Q::new(-1, 7)],
            z: Q::new(3, 4),
        };
        let a = delta_direct(&spec);
        let b = delta_recursive(&spec);
        let c = delta_expanded(&spec);
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn bls_polynomial_small_cases() {
        let p = bls_polynomial(&[C::new(2.0, 0.0)]).unwrap();
        assert_eq!(p.coeffs(), &[C::new(1.0, 0.0), C::new(0.5, 0.0)]);
        assert!(matches!(
            bls_polynomial(&[C::new(0.0, 0.0)]),
            Err(Error::ZeroFactor { index: 1 })
        ));
    }

    #[test]
    fn bls_value_matches_scaled_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<C> = (0..5)
            .map(|_| C::new(rng.gen::<f64>() + 0.2, rng.gen::<f64>() - 0.5))
            .collect();
        let p = bls_polynomial(&x).unwrap();
        let prod: C = x.iter().product();
        for _ in 0..20 {
            let z = C::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            let spec = DeterminantSpec { x: x.clone(), z };
            let lhs = p.eval(z) * prod;
            let rhs = delta_expanded(&spec);
            assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn bls_roots_coincide_with_determinant_roots() {
        let x = vec![C::new(1.5, 0.0), C::new(1.0 / 6.0, 0.0), C::new(-0.5, 0.0)];
        let p = bls_polynomial(&x).unwrap();
        let det_poly = {
            // expanded coefficients of D_m as a polynomial in z
            let mut acc = C::new(1.0, 0.0);
            let mut prods = vec![C::new(1.0, 0.0)];
            for xj in &x {
                acc *= xj;
                prods.push(acc);
            }
            prods.reverse();
            Poly::new(prods)
        };
        let rp = crate::roots::roots(&p, &Default::default()).unwrap();
        for z in &rp.roots {
            assert!(det_poly.eval(*z).norm() < 1e-10);
        }
    }
}
