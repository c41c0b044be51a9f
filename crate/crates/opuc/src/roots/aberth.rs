//! Ehrlich-Aberth simultaneous iteration.
//!
//! All approximations are updated together from the previous sweep
//! (Jacobi style), which keeps the solve deterministic regardless of any
//! parallel evaluation order.

use super::RootOptions;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Real;
use num_complex::Complex;

/// Fractional part of the golden ratio; consecutive multiples fill the circle
/// without near-coincidences.
const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_9;

/// Run the iteration on a prepared (rescaled, max-norm-one) polynomial.
/// Returns the roots in the prepared variable plus the sweep count.
pub fn aberth_sweeps<R: Real>(
    p: &Poly<Complex<R>>,
    opts: &RootOptions<R>,
) -> Result<(Vec<Complex<R>>, usize)> {
    let n = p.degree().ok_or(Error::DegreeTooSmall(0))?;
    if n == 0 {
        return Err(Error::DegreeTooSmall(0));
    }
    let dp = p.derivative();

    let mut w = initial_guesses(p, opts.seed);
    let mut steps = vec![Complex::new(R::zero(), R::zero()); n];

    let eval_scale = |z: Complex<R>| {
        let zn = z.norm();
        p.coeffs()
            .iter()
            .scan(R::one(), |pow, c| {
                let term = c.norm() * *pow;
                *pow = *pow * zn;
                Some(term)
            })
            .fold(R::zero(), |a, b| a + b)
    };

    for sweep in 0..opts.max_iterations {
        let mut all_converged = true;
        let mut max_step = R::zero();

        for i in 0..n {
            let zi = w[i];
            let pv = p.eval(zi);
            if pv.norm() <= opts.residual_tol * eval_scale(zi) * R::of(1e-3) {
                steps[i] = Complex::new(R::zero(), R::zero());
                continue;
            }
            all_converged = false;
            let dv = dp.eval(zi);
            let newton = if dv.norm() > R::zero() {
                pv / dv
            } else {
                // nudge off the critical point
                Complex::new(R::of(1e-8), R::of(1e-8))
            };
            let mut repulsion = Complex::new(R::zero(), R::zero());
            for (j, zj) in w.iter().enumerate() {
                if j != i {
                    let d = zi - zj;
                    if d.norm() > R::zero() {
                        repulsion = repulsion + d.inv();
                    }
                }
            }
            let denom = Complex::new(R::one(), R::zero()) - newton * repulsion;
            let step = if denom.norm() > R::of(1e-290) {
                newton / denom
            } else {
                newton
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: sweep,
                    context: "non-finite Aberth correction".into(),
                });
            }
            steps[i] = step;
            max_step = max_step.max(step.norm());
        }

        for i in 0..n {
            w[i] = w[i] - steps[i];
        }

        if all_converged {
            return Ok((w, sweep));
        }
        if max_step < R::of(1e-15) {
            break;
        }
    }

    // accept whatever satisfies the backward-error criterion; otherwise fail
    let ok = w.iter().all(|&z| {
        let pv = p.eval(z).norm();
        pv <= opts.residual_tol * eval_scale(z)
    });
    if ok {
        Ok((w, opts.max_iterations))
    } else {
        Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            context: "Aberth residuals above tolerance".into(),
        })
    }
}

/// Initial guesses on a circle of the implied root radius, spread by the
/// golden angle with a seed-derived phase.
fn initial_guesses<R: Real>(p: &Poly<Complex<R>>, seed: u64) -> Vec<Complex<R>> {
    let n = p.degree().unwrap_or(1);
    let c0 = p.coeff(0).norm();
    let cn = p.leading().map(|c| c.norm()).unwrap_or(R::one());
    let mut radius = if c0 > R::zero() {
        (c0 / cn).powf(R::one() / R::of(n as f64))
    } else {
        R::of(0.5)
    };
    if !radius.is_finite() || radius == R::zero() {
        radius = R::one();
    }
    // small offset so guesses never start exactly on a symmetric root set
    let phase0 = (seed as f64).mul_add(GOLDEN_FRACTION, 0.35).fract();
    (0..n)
        .map(|i| {
            let frac = (phase0 + i as f64 * GOLDEN_FRACTION).fract();
            let theta = R::of(frac * std::f64::consts::TAU);
            let stagger = R::one() + R::of(0.05) * R::of(((i % 7) as f64 - 3.0) / 3.0);
            Complex::new(
                radius * stagger * theta.cos(),
                radius * stagger * theta.sin(),
            )
        })
        .collect()
}
