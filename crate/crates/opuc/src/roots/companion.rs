//! Companion-matrix eigenvalues via explicitly shifted QR on the balanced
//! upper-Hessenberg form. Fallback path only; the dense matrix is built from
//! the monic normalization of the input.

// index loops mirror the usual matrix notation here
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Real;
use num_complex::Complex;

pub fn companion_roots<R: Real>(p: &Poly<Complex<R>>) -> Result<Vec<Complex<R>>> {
    let n = p.degree().ok_or(Error::DegreeTooSmall(0))?;
    if n == 0 {
        return Err(Error::DegreeTooSmall(0));
    }
    let lead = *p.leading().unwrap();

    // H[i][i-1] = 1 subdiagonal, last column carries -c_i / c_n.
    let mut h = vec![vec![Complex::new(R::zero(), R::zero()); n]; n];
    for i in 1..n {
        h[i][i - 1] = Complex::new(R::one(), R::zero());
    }
    for i in 0..n {
        h[i][n - 1] = -p.coeff(i) / lead;
    }
    balance(&mut h);
    hessenberg_qr_eigenvalues(h)
}

/// Parlett-Reinsch style balancing with powers of two, a few passes.
fn balance<R: Real>(h: &mut [Vec<Complex<R>>]) {
    let n = h.len();
    let two = R::of(2.0);
    for _ in 0..5 {
        let mut converged = true;
        for i in 0..n {
            let mut row = R::zero();
            let mut col = R::zero();
            for j in 0..n {
                if j != i {
                    row = row + h[i][j].norm();
                    col = col + h[j][i].norm();
                }
            }
            if row == R::zero() || col == R::zero() {
                continue;
            }
            let mut factor = R::one();
            let mut c = col;
            let mut r = row;
            while c < r / two {
                c = c * two;
                r = r / two;
                factor = factor * two;
            }
            while c > r * two {
                c = c / two;
                r = r * two;
                factor = factor / two;
            }
            if factor != R::one() {
                converged = false;
                let inv = R::one() / factor;
                for j in 0..n {
                    h[i][j] = h[i][j] * Complex::new(inv, R::zero());
                    h[j][i] = h[j][i] * Complex::new(factor, R::zero());
                }
            }
        }
        if converged {
            break;
        }
    }
}

struct Givens<R> {
    c: R,
    s: Complex<R>,
}

/// Rotation with G [a; b] = [r; 0].
fn givens<R: Real>(a: Complex<R>, b: Complex<R>) -> Givens<R> {
    let an = a.norm();
    let bn = b.norm();
    if bn == R::zero() {
        return Givens {
            c: R::one(),
            s: Complex::new(R::zero(), R::zero()),
        };
    }
    if an == R::zero() {
        return Givens {
            c: R::zero(),
            s: Complex::new(R::one(), R::zero()),
        };
    }
    let r = (an * an + bn * bn).sqrt();
    Givens {
        c: an / r,
        s: (a / Complex::new(an, R::zero())) * b.conj() / Complex::new(r, R::zero()),
    }
}

fn hessenberg_qr_eigenvalues<R: Real>(mut h: Vec<Vec<Complex<R>>>) -> Result<Vec<Complex<R>>> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let eps = R::of(1e-15);
    let mut stagnation = 0usize;
    let max_total = 60 * n + 200;
    let mut total = 0usize;

    while hi > 0 {
        if hi == 1 {
            eigs.push(h[0][0]);
            hi = 0;
            continue;
        }
        // deflate any negligible subdiagonal from the bottom of the block
        let mut deflated = false;
        for m in (1..hi).rev() {
            let scale = h[m - 1][m - 1].norm() + h[m][m].norm();
            if h[m][m - 1].norm() <= eps * scale.max(R::of(1e-300)) {
                if m == hi - 1 {
                    eigs.push(h[hi - 1][hi - 1]);
                    hi -= 1;
                    deflated = true;
                    stagnation = 0;
                }
                break;
            }
        }
        if deflated {
            continue;
        }
        total += 1;
        stagnation += 1;
        if total > max_total {
            return Err(Error::NoConvergence {
                iterations: total,
                context: "companion QR failed to deflate".into(),
            });
        }

        // Wilkinson shift from the trailing 2x2 of the active block
        let a = h[hi - 2][hi - 2];
        let b = h[hi - 2][hi - 1];
        let c = h[hi - 1][hi - 2];
        let d = h[hi - 1][hi - 1];
        let tr = a + d;
        let half = Complex::new(R::of(0.5), R::zero());
        let disc = ((a - d) * (a - d) + b * c * Complex::new(R::of(4.0), R::zero())).sqrt();
        let l1 = (tr + disc) * half;
        let l2 = (tr - disc) * half;
        let mut shift = if (l1 - d).norm() < (l2 - d).norm() {
            l1
        } else {
            l2
        };
        if stagnation.is_multiple_of(12) {
            // exceptional shift to break symmetry-induced cycles
            shift = shift
                + Complex::new(
                    h[hi - 1][hi - 2].norm(),
                    R::of(0.5) * h[hi - 1][hi - 2].norm(),
                );
        }

        // explicit shifted QR step on the active block
        for i in 0..hi {
            h[i][i] = h[i][i] - shift;
        }
        let mut rotations = Vec::with_capacity(hi - 1);
        for k in 0..hi - 1 {
            let g = givens(h[k][k], h[k + 1][k]);
            apply_left(&mut h, &g, k, hi);
            rotations.push(g);
        }
        for (k, g) in rotations.iter().enumerate() {
            apply_right(&mut h, g, k, hi);
        }
        for i in 0..hi {
            h[i][i] = h[i][i] + shift;
        }
    }
    Ok(eigs)
}

/// Rows k, k+1 of columns k..hi: G * H.
fn apply_left<R: Real>(h: &mut [Vec<Complex<R>>], g: &Givens<R>, k: usize, hi: usize) {
    let c = Complex::new(g.c, R::zero());
    for j in k..hi {
        let x = h[k][j];
        let y = h[k + 1][j];
        h[k][j] = c * x + g.s * y;
        h[k + 1][j] = -g.s.conj() * x + c * y;
    }
}

/// Columns k, k+1 of rows 0..min(k+2, hi): H * G^H.
fn apply_right<R: Real>(h: &mut [Vec<Complex<R>>], g: &Givens<R>, k: usize, hi: usize) {
    let c = Complex::new(g.c, R::zero());
    let rows = (k + 2).min(hi);
    for row in h.iter_mut().take(rows) {
        let x = row[k];
        let y = row[k + 1];
        row[k] = c * x + g.s.conj() * y;
        row[k + 1] = -g.s * x + c * y;
    }
}
