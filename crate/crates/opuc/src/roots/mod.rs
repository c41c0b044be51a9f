//! Root finding for complex polynomials.
//!
//! The primary method is simultaneous Ehrlich-Aberth iteration on a
//! radius-rescaled copy of the polynomial; the rescaling keeps clustered
//! zeros near a circle well conditioned. A companion-matrix QR solver acts
//! as fallback. Every solve is checked against the coefficient sum/product
//! identities before being returned.

mod aberth;
mod companion;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Real;
use num_complex::Complex;

pub use aberth::aberth_sweeps;
pub use companion::companion_roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Simultaneous,
    CompanionFallback,
}

#[derive(Debug, Clone)]
pub struct RootSet<R> {
    pub roots: Vec<Complex<R>>,
    /// |p(root)| in the original variable.
    pub residuals: Vec<R>,
    pub iterations: usize,
    pub method: SolveMethod,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions<R> {
    pub max_iterations: usize,
    pub residual_tol: R,
    /// Deterministic offset for the initial placement.
    pub seed: u64,
    /// Radius used both for variable rescaling and initial guesses; when a
    /// decay model is known this should be its modulus b.
    pub radius_hint: Option<R>,
}

impl<R: Real> Default for RootOptions<R> {
    fn default() -> Self {
        RootOptions {
            max_iterations: 200,
            residual_tol: R::of(1e-10),
            seed: 0,
            radius_hint: None,
        }
    }
}

const SUM_PRODUCT_TOL: f64 = 1e-8;

/// All roots of `p`, with multiplicity, deterministic for fixed options.
pub fn roots<R: Real>(p: &Poly<Complex<R>>, opts: &RootOptions<R>) -> Result<RootSet<R>> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        Some(d) => return Err(Error::DegreeTooSmall(d)),
        None => return Err(Error::DegreeTooSmall(0)),
    };

    // peel off roots at the origin so the rescale radius is well defined
    let mut origin_roots = 0;
    while p.coeff(origin_roots).norm() == R::zero() {
        origin_roots += 1;
    }
    let reduced = Poly::new(p.coeffs()[origin_roots..].to_vec());

    let mut all = vec![Complex::new(R::zero(), R::zero()); origin_roots];
    let mut iterations = 0;
    let mut method = SolveMethod::Simultaneous;

    if reduced.degree() == Some(0) {
        // nothing further to solve
    } else {
        let radius = opts.radius_hint.unwrap_or_else(|| implied_radius(&reduced));
        let scaled = normalize_max(&reduced.rescaled(radius));

        let solved = match aberth::aberth_sweeps(&scaled, opts) {
            Ok((ws, iters)) => {
                iterations = iters;
                ws
            }
            Err(_) => {
                method = SolveMethod::CompanionFallback;
                companion::companion_roots(&scaled)?
            }
        };
        let mut back: Vec<Complex<R>> = solved
            .iter()
            .map(|w| w * Complex::new(radius, R::zero()))
            .collect();

        if !sum_product_ok(&reduced, &back) {
            // one retry through the fallback before giving up
            if method == SolveMethod::Simultaneous {
                method = SolveMethod::CompanionFallback;
                let ws = companion::companion_roots(&scaled)?;
                back = ws
                    .iter()
                    .map(|w| w * Complex::new(radius, R::zero()))
                    .collect();
            }
            if !sum_product_ok(&reduced, &back) {
                return Err(Error::NoConvergence {
                    iterations,
                    context: format!(
                        "sum/product identities violated for degree {} solve",
                        degree
                    ),
                });
            }
        }
        all.extend(back);
    }

    let residuals = all.iter().map(|z| p.eval(*z).norm()).collect();
    Ok(RootSet {
        roots: all,
        residuals,
        iterations,
        method,
    })
}

/// Geometric-mean radius |c_0 / c_n|^{1/n} of the nonzero-constant part.
fn implied_radius<R: Real>(p: &Poly<Complex<R>>) -> R {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return R::one();
    }
    let c0 = p.coeff(0).norm();
    let cn = p.leading().map(|c| c.norm()).unwrap_or(R::one());
    let r = (c0 / cn).powf(R::one() / R::of(n as f64));
    if r.is_finite() && r > R::zero() {
        r
    } else {
        R::one()
    }
}

fn normalize_max<R: Real>(p: &Poly<Complex<R>>) -> Poly<Complex<R>> {
    let m = p.max_coeff_norm();
    if m > R::zero() {
        p.scale(Complex::new(R::one() / m, R::zero()))
    } else {
        p.clone()
    }
}

fn sum_product_ok<R: Real>(p: &Poly<Complex<R>>, roots: &[Complex<R>]) -> bool {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return true,
    };
    let lead = *p.leading().unwrap();
    let tol = R::of(SUM_PRODUCT_TOL);

    let sum: Complex<R> = roots
        .iter()
        .fold(Complex::new(R::zero(), R::zero()), |a, b| a + b);
    let sum_target = -p.coeff(n - 1) / lead;
    let sum_scale = R::one() + roots.iter().map(|r| r.norm()).fold(R::zero(), |a, b| a + b);
    if (sum - sum_target).norm() > tol * sum_scale {
        return false;
    }

    let prod: Complex<R> = roots
        .iter()
        .fold(Complex::new(R::one(), R::zero()), |a, b| a * b);
    let sign = if n % 2 == 0 { R::one() } else { -R::one() };
    let prod_target = p.coeff(0) / lead * Complex::new(sign, R::zero());
    let prod_scale = prod_target.norm().max(prod.norm()) + R::of(1e-300);
    (prod - prod_target).norm() <= tol * prod_scale.max(R::of(1e-30))
}

#[derive(Debug, Clone, Copy)]
pub struct Polished<R> {
    pub root: Complex<R>,
    pub residual: R,
    pub iterations: usize,
    /// Set when the derivative nearly vanishes at the result, signalling a
    /// multiple root reached at linear rate.
    pub multiple: bool,
}

/// Newton refinement of a nearby simple root.
pub fn polish<R: Real>(p: &Poly<Complex<R>>, z0: Complex<R>) -> Result<Polished<R>> {
    let dp = p.derivative();
    let ddp = dp.derivative();
    let scale_at = |z: Complex<R>| {
        p.coeffs()
            .iter()
            .scan(R::one(), |pow, c| {
                let term = c.norm() * *pow;
                *pow = *pow * z.norm();
                Some(term)
            })
            .fold(R::zero(), |a, b| a + b)
    };
    let mut z = z0;
    for it in 0..50 {
        let pv = p.eval(z);
        let scale = scale_at(z).max(R::of(1e-300));
        if pv.norm() <= R::of(1e-13) * scale {
            // near a double root |p'|^2 ~ 2 |p p''|, near a simple one
            // |p'|^2 dwarfs it
            let dv = dp.eval(z).norm();
            let curv = pv.norm() * ddp.eval(z).norm();
            return Ok(Polished {
                root: z,
                residual: pv.norm(),
                iterations: it,
                multiple: dv * dv <= R::of(8.0) * curv,
            });
        }
        let dv = dp.eval(z);
        if dv.norm() == R::zero() {
            return Err(Error::NoConvergence {
                iterations: it,
                context: "Newton hit a critical point".into(),
            });
        }
        z = z - pv / dv;
    }
    Err(Error::NoConvergence {
        iterations: 50,
        context: format!("Newton polish from {}", z0),
    })
}

/// Greedy clustering of a root list at the given distance; returns centroids
/// with multiplicities.
pub fn cluster_roots<R: Real>(roots: &[Complex<R>], tol: R) -> Vec<(Complex<R>, usize)> {
    let mut clusters: Vec<(Complex<R>, usize)> = Vec::new();
    for &r in roots {
        if let Some((c, m)) = clusters.iter_mut().find(|(c, _)| (*c - r).norm() <= tol) {
            // running centroid
            let k = R::of(*m as f64);
            *c = (*c * Complex::new(k, R::zero()) + r) / Complex::new(k + R::one(), R::zero());
            *m += 1;
        } else {
            clusters.push((r, 1));
        }
    }
    clusters
}

/// Root CSV with columns `n,index,re,im,modulus,arg,residual`.
pub fn write_roots_csv<R: Real, W: std::io::Write>(
    n: usize,
    set: &RootSet<R>,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "n,index,re,im,modulus,arg,residual")?;
    for (i, (z, res)) in set.roots.iter().zip(&set.residuals).enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            n,
            i,
            z.re,
            z.im,
            z.norm(),
            z.arg(),
            res
        )?;
    }
    Ok(())
}
