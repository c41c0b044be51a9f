//! Pointwise Szego-function limits.
//!
//! Everything here is driven by the recursion on values at a fixed point:
//! the reversed polynomials converge to D(0) D(z)^{-1} inside |z| < 1/q, and
//! the normalized monic values z^{-n} Phi_n(z) converge outside |z| > q to
//! the outer value D(0) conj(D(1/conj z))^{-1}. The two are linked by the
//! exact reflection z^{-n} Phi_n(z) = conj(Phi_n^*(1/conj z)), so a single
//! stabilized iteration serves both limits. No measure integrals appear.

use crate::coeffs::{CoefficientFamily, DecayModel};
use crate::error::{Error, Result};
use crate::fit::geometric_rate;
use crate::scalar::Real;
use num_complex::Complex;
use rayon::prelude::*;
use std::sync::Arc;

/// Relative margin kept away from domain boundaries by series evaluations.
pub const DOMAIN_MARGIN: f64 = 0.02;

/// Hard guard for the stabilized limits; points this close to the boundary
/// fail fast instead of looping essentially forever. Probes at relative
/// distance 1e-4 from the critical circle stay admissible.
pub const BOUNDARY_GUARD: f64 = 5e-5;

/// Critical annulus b*delta1 < |z| < min(1, b/delta1).
#[derive(Debug, Clone, Copy)]
pub struct AnnulusSpec<R> {
    pub b: R,
    pub delta1: R,
    pub inner: R,
    pub outer: R,
}

impl<R: Real> AnnulusSpec<R> {
    pub fn new(b: R, delta1: R) -> Self {
        AnnulusSpec {
            b,
            delta1,
            inner: b * delta1,
            outer: (b / delta1).min(R::one()),
        }
    }

    pub fn contains(&self, z: Complex<R>) -> bool {
        let m = z.norm();
        self.inner < m && m < self.outer
    }
}

/// Stabilized evaluator for the Szego limits of one family.
///
/// `q` is a geometric envelope for the coefficients (|alpha_n| <= C q^n) and
/// `qprime` in (q, 1) tunes the stopping rule; `tol` is the target accuracy
/// of returned limits.
#[derive(Debug, Clone)]
pub struct SzegoApprox<R: Real> {
    family: Arc<CoefficientFamily<R>>,
    pub q: R,
    pub qprime: R,
    pub tol: R,
    pub max_steps: usize,
}

impl<R: Real> SzegoApprox<R> {
    pub fn new(family: Arc<CoefficientFamily<R>>, q: R, qprime: R, tol: R) -> Self {
        assert!(q > R::zero() && q < qprime && qprime < R::one());
        SzegoApprox {
            family,
            q,
            qprime,
            tol,
            max_steps: 5_000_000,
        }
    }

    /// Envelope q = b, stopping radius q' = (1+b)/2, tolerance 1e-12.
    pub fn from_model(family: Arc<CoefficientFamily<R>>, model: &DecayModel<R>) -> Self {
        let q = model.b;
        let qprime = (R::one() + model.b) / R::of(2.0);
        Self::new(family, q, qprime, R::of(1e-12))
    }

    pub fn family(&self) -> &Arc<CoefficientFamily<R>> {
        &self.family
    }

    /// lim Phi_n^*(z), the D(0) D(z)^{-1} approximant, for |z| < 1/q.
    /// A thin guard keeps the iteration off the boundary itself, where the
    /// geometric rate degenerates; approaching it just costs steps.
    pub fn szego_inverse(&self, z: Complex<R>) -> Result<Complex<R>> {
        let limit = (R::one() - R::of(BOUNDARY_GUARD)) / self.q;
        if z.norm() >= limit {
            return Err(Error::OutsideDomain {
                z: format!("{}", z),
                domain: format!("|z| < {:.6}", limit.to_f64().unwrap_or(f64::NAN)),
            });
        }
        Ok(self.star_limit(z)?.0)
    }

    /// lim z^{-n} Phi_n(z) = D(0) conj(D(1/conj z))^{-1}, for |z| > q.
    pub fn outer_limit(&self, z: Complex<R>) -> Result<Complex<R>> {
        let limit = self.q * (R::one() + R::of(BOUNDARY_GUARD));
        if z.norm() <= limit {
            return Err(Error::OutsideDomain {
                z: format!("{}", z),
                domain: format!("|z| > {:.6}", limit.to_f64().unwrap_or(f64::NAN)),
            });
        }
        let w = z.conj().inv();
        Ok(self.star_limit(w)?.0.conj())
    }

    /// D(0) as the convergent product prod (1 - |alpha_j|^2)^{1/2}.
    pub fn d_zero(&self) -> Result<R> {
        let mut log_sum = R::zero();
        for j in 0..200_000 {
            let a = self.family.alpha(j)?;
            let factor = R::one() - a.norm_sqr();
            if factor == R::one() {
                break;
            }
            log_sum = log_sum + factor.ln();
        }
        Ok((log_sum / R::of(2.0)).exp())
    }

    /// Stabilized value of lim Phi_n^*(w) together with the step count.
    /// Converges for |w| < 1/q; the caller enforces the margin.
    pub fn star_limit(&self, w: Complex<R>) -> Result<(Complex<R>, usize)> {
        let wn = w.norm();
        let rate = (self.q * wn.max(self.qprime)).min(R::one() - R::of(1e-6));
        let n_min = {
            let t = R::of(2.0) * self.tol.ln() / rate.ln();
            (t.to_f64().unwrap_or(64.0).ceil().max(8.0)) as usize
        };
        let threshold = self.tol * (R::one() - rate);

        if wn <= R::one() {
            self.star_limit_plain(w, n_min, threshold)
        } else {
            self.star_limit_scaled(w, n_min, threshold)
        }
    }

    fn star_limit_plain(
        &self,
        w: Complex<R>,
        n_min: usize,
        threshold: R,
    ) -> Result<(Complex<R>, usize)> {
        let mut phi = Complex::new(R::one(), R::zero());
        let mut star = phi;
        let mut consecutive = 0;
        for n in 0..self.max_steps {
            let a = self.family.alpha(n)?;
            let (phi_next, star_next) = crate::recursion::szego_step_values(phi, star, a, w);
            let diff = (star_next - star).norm();
            phi = phi_next;
            star = star_next;
            consecutive = if diff < threshold * star.norm().max(R::one()) {
                consecutive + 1
            } else {
                0
            };
            if consecutive >= 3 && n + 1 >= n_min {
                return Ok((star, n + 1));
            }
        }
        Err(Error::NoConvergence {
            iterations: self.max_steps,
            context: format!("star limit at w = {}", w),
        })
    }

    /// For |w| > 1 the monic values grow like w^n, so the pair
    /// (A_n, P_n) = (w^{-n} Phi_n(w), Phi_n^*(w)) is iterated instead:
    ///   A_{n+1} = A_n - conj(alpha_n) w^{-(n+1)} P_n
    ///   P_{n+1} = P_n - alpha_n w^{n+1} A_n
    /// The drive alpha_n w^{n+1} is formed with the power folded into the
    /// family's exponential terms where possible; alpha_n on its own
    /// underflows long before the product stops mattering when |w| is close
    /// to the 1/q boundary.
    fn star_limit_scaled(
        &self,
        w: Complex<R>,
        n_min: usize,
        threshold: R,
    ) -> Result<(Complex<R>, usize)> {
        let mut a_val = Complex::new(R::one(), R::zero());
        let mut p_val = a_val;
        let mut wpow = ScaledPow::one();
        let mut drive = DriveTerms::for_family(&self.family, w);
        let mut consecutive = 0;
        for n in 0..self.max_steps {
            wpow.mul_by(w);
            let alpha = self.family.alpha(n)?;
            let grow = match &mut drive {
                Some(d) => d.next(&wpow) * a_val,
                None => wpow.apply(alpha * a_val),
            };
            // alpha underflowing to zero is harmless here: the true factor
            // alpha_n w^{-n-1} decays at least as fast as alpha_n itself
            let shrink = wpow.apply_inv(alpha.conj() * p_val);
            let p_next = p_val - grow;
            let a_next = a_val - shrink;
            let diff = (p_next - p_val).norm();
            p_val = p_next;
            a_val = a_next;
            consecutive = if diff < threshold * p_val.norm().max(R::one()) {
                consecutive + 1
            } else {
                0
            };
            if consecutive >= 3 && n + 1 >= n_min {
                return Ok((p_val, n + 1));
            }
        }
        Err(Error::NoConvergence {
            iterations: self.max_steps,
            context: format!("scaled star limit at w = {}", w),
        })
    }

    /// Zeros of the outer limit inside a closed sub-annulus of q < |z| < 1;
    /// these are the limits of the Nevai-Totik zeros. Grid scan on
    /// modulus x angle followed by Newton on central differences; candidates
    /// that fail to converge are dropped.
    pub fn nt_zero_candidates(&self, inner: R, outer: R) -> Result<Vec<Complex<R>>> {
        let lo = self.q * (R::one() + R::of(DOMAIN_MARGIN));
        if !(inner > lo && outer < R::one() && inner < outer) {
            return Err(Error::OutsideDomain {
                z: format!("[{}, {}]", inner, outer),
                domain: format!(
                    "search annulus must lie in ({:.4}, 1)",
                    lo.to_f64().unwrap_or(f64::NAN)
                ),
            });
        }
        let step = R::of(NT_GRID_MODULUS_STEP);
        let n_radii = ((outer - inner) / step)
            .to_f64()
            .unwrap_or(1.0)
            .ceil()
            .max(1.0) as usize
            + 1;
        let radii: Vec<R> = (0..n_radii)
            .map(|i| (inner + step * R::of(i as f64)).min(outer))
            .collect();

        let grid: Vec<Vec<R>> = radii
            .par_iter()
            .map(|&r| {
                (0..NT_GRID_ANGLES)
                    .map(|k| {
                        let t =
                            R::of(k as f64) * R::of(2.0) * R::PI() / R::of(NT_GRID_ANGLES as f64);
                        let z = Complex::new(r * t.cos(), r * t.sin());
                        self.outer_limit(z)
                            .map(|v| v.norm())
                            .unwrap_or(R::infinity())
                    })
                    .collect()
            })
            .collect();

        let mut seeds = Vec::new();
        for i in 0..radii.len() {
            for k in 0..NT_GRID_ANGLES {
                let v = grid[i][k];
                if v >= R::of(NT_SEED_THRESHOLD) {
                    continue;
                }
                let mut is_min = true;
                for di in -1i64..=1 {
                    for dk in -1i64..=1 {
                        if di == 0 && dk == 0 {
                            continue;
                        }
                        let ii = i as i64 + di;
                        if ii < 0 || ii >= radii.len() as i64 {
                            continue;
                        }
                        let kk = (k as i64 + dk).rem_euclid(NT_GRID_ANGLES as i64) as usize;
                        if grid[ii as usize][kk] < v {
                            is_min = false;
                        }
                    }
                }
                if is_min {
                    let t = R::of(k as f64) * R::of(2.0) * R::PI() / R::of(NT_GRID_ANGLES as f64);
                    seeds.push(Complex::new(radii[i] * t.cos(), radii[i] * t.sin()));
                }
            }
        }

        let mut candidates: Vec<Complex<R>> = Vec::new();
        for seed in seeds {
            if let Some(z) = self.newton_on_outer(seed) {
                let m = z.norm();
                if m <= lo || m >= R::one() {
                    continue;
                }
                if candidates.iter().all(|c| (*c - z).norm() > R::of(1e-6)) {
                    candidates.push(z);
                }
            }
        }
        candidates.sort_by(|a, b| {
            let (aa, ab) = (a.arg(), b.arg());
            aa.partial_cmp(&ab)
                .unwrap()
                .then(a.norm().partial_cmp(&b.norm()).unwrap())
        });
        Ok(candidates)
    }

    fn newton_on_outer(&self, start: Complex<R>) -> Option<Complex<R>> {
        let h = Complex::new(R::of(1e-6), R::zero());
        let mut z = start;
        for _ in 0..50 {
            let f0 = self.outer_limit(z).ok()?;
            if f0.norm() < R::of(1e-13) {
                return Some(z);
            }
            let fp = self.outer_limit(z + h).ok()?;
            let fm = self.outer_limit(z - h).ok()?;
            let d = (fp - fm) / (h * Complex::new(R::of(2.0), R::zero()));
            if d.norm() == R::zero() {
                return None;
            }
            let step = f0 / d;
            z = z - step;
            if step.norm() < R::of(1e-12) * (R::one() + z.norm()) {
                let fv = self.outer_limit(z).ok()?;
                return if fv.norm() < R::of(1e-8) {
                    Some(z)
                } else {
                    None
                };
            }
        }
        None
    }

    /// Fit sup_{|z|=1} |R_n| to C (b delta1)^n over a pre-saturation window
    /// and return delta1 with a small safety margin. A remainder-free signal
    /// below the absolute floor returns the configured default 0.5.
    pub fn estimate_delta1(&self, model: &DecayModel<R>) -> Result<R> {
        let n_lo = 8usize;
        let n_hi = 40usize;
        let angles = 64usize;
        let zs: Vec<Complex<R>> = (0..angles)
            .map(|k| {
                let t = R::of(k as f64) * R::of(2.0) * R::PI() / R::of(angles as f64);
                Complex::new(t.cos(), t.sin())
            })
            .collect();
        let sups: Vec<R> = {
            let per_z: Vec<Vec<R>> = zs
                .par_iter()
                .map(|&z| {
                    crate::asymptotics::r_n_sweep(self, model, n_hi, z)
                        .map(|vals| vals.iter().map(|v| v.norm()).collect())
                })
                .collect::<Result<_>>()?;
            (0..=n_hi)
                .map(|n| per_z.iter().map(|v| v[n]).fold(R::zero(), |a, b| a.max(b)))
                .collect()
        };
        let ns: Vec<usize> = (n_lo..=n_hi).collect();
        let window: Vec<R> = sups[n_lo..=n_hi].to_vec();
        let peak = window.iter().fold(R::zero(), |a, &b| a.max(b));
        if peak < R::of(1e-13) {
            return Ok(R::of(0.5));
        }
        let floor = (peak * R::of(1e-10)).max(R::of(1e-14));
        let (rate, fit) = geometric_rate(&ns, &window, floor)?;
        if fit.r_squared < R::of(0.5) {
            return Err(Error::FitFailed(format!(
                "remainder decay is not geometric (r^2 = {})",
                fit.r_squared
            )));
        }
        let delta1 = rate / model.b * R::of(1.1);
        if delta1 <= R::zero() || delta1 >= R::one() || delta1.is_nan() {
            return Err(Error::FitFailed(format!(
                "fitted delta1 = {} outside (0,1)",
                delta1
            )));
        }
        Ok(delta1.max(R::of(1e-3)))
    }

    /// CSV dump of the outer limit sampled on a polar grid:
    /// columns `re_z,im_z,re_f,im_f`.
    pub fn write_outer_grid_csv<W: std::io::Write>(
        &self,
        radii: &[R],
        angles: usize,
        out: &mut W,
    ) -> Result<()> {
        let io_err = |e: std::io::Error| Error::InvalidFamily(e.to_string());
        writeln!(out, "re_z,im_z,re_f,im_f").map_err(io_err)?;
        for &r in radii {
            for k in 0..angles {
                let t = R::of(k as f64) * R::of(2.0) * R::PI() / R::of(angles as f64);
                let z = Complex::new(r * t.cos(), r * t.sin());
                let f = self.outer_limit(z)?;
                writeln!(out, "{},{},{},{}", z.re, z.im, f.re, f.im).map_err(io_err)?;
            }
        }
        Ok(())
    }
}

const NT_GRID_MODULUS_STEP: f64 = 0.005;
const NT_GRID_ANGLES: usize = 1024;
const NT_SEED_THRESHOLD: f64 = 0.25;

/// Produces alpha_n w^{n+1} with the power folded into the exponential terms
/// of the family: each term keeps a running (b_l w)^n with |b_l w| < 1, so
/// the product only underflows when its true value does. Table families
/// have finite support and keep the direct route.
struct DriveTerms<R: Real> {
    amps: Vec<Complex<R>>,
    ratios: Vec<Complex<R>>,
    pows: Vec<Complex<R>>,
    periodic: Option<Vec<Complex<R>>>,
    remainder: Option<(crate::coeffs::RemainderRule<R>, R, R)>,
    step: usize,
}

impl<R: Real> DriveTerms<R> {
    fn for_family(family: &CoefficientFamily<R>, w: Complex<R>) -> Option<Self> {
        use crate::coeffs::{FamilyKind, RemainderRule};
        let one = Complex::new(R::one(), R::zero());
        match family.kind() {
            FamilyKind::Pure { b, amplitude } => Some(DriveTerms {
                amps: vec![*amplitude * w],
                ratios: vec![Complex::new(*b, R::zero()) * w],
                pows: vec![one],
                periodic: None,
                remainder: None,
                step: 0,
            }),
            FamilyKind::ExpSum { model, remainder } => Some(DriveTerms {
                amps: model.amplitudes.iter().map(|c| c * w).collect(),
                ratios: model.bases.iter().map(|b| b * w).collect(),
                pows: vec![one; model.len()],
                periodic: None,
                remainder: match remainder {
                    RemainderRule::None => None,
                    other => Some((other.clone(), model.b, model.delta)),
                },
                step: 0,
            }),
            FamilyKind::PeriodicRatio { b, ratios, alpha0 } => {
                let mut prefix = Vec::with_capacity(ratios.len());
                let mut acc = one;
                prefix.push(acc);
                for c in &ratios[..ratios.len() - 1] {
                    acc = acc * c;
                    prefix.push(acc);
                }
                Some(DriveTerms {
                    amps: vec![*alpha0 * w],
                    ratios: vec![Complex::new(*b, R::zero()) * w],
                    pows: vec![one],
                    periodic: Some(prefix),
                    remainder: None,
                    step: 0,
                })
            }
            FamilyKind::Table(_) => None,
        }
    }

    /// alpha_n w^{n+1} for the current step; `wpow` must already hold w^{n+1}.
    fn next(&mut self, wpow: &ScaledPow<R>) -> Complex<R> {
        let n = self.step;
        let mut acc = Complex::new(R::zero(), R::zero());
        match &self.periodic {
            Some(prefix) => {
                acc = self.amps[0] * prefix[n % prefix.len()] * self.pows[0];
            }
            None => {
                for (amp, pow) in self.amps.iter().zip(&self.pows) {
                    acc = acc + *amp * *pow;
                }
            }
        }
        if let Some((rule, b, delta)) = &self.remainder {
            acc = acc + wpow.apply(rule.eval(n, *b, *delta));
        }
        for (pow, ratio) in self.pows.iter_mut().zip(&self.ratios) {
            *pow = *pow * ratio;
        }
        self.step += 1;
        acc
    }
}

/// Power w^k held as mantissa * 2^exponent so that products with decaying
/// factors stay representable for arbitrarily many steps.
pub(crate) struct ScaledPow<R: Real> {
    m: Complex<R>,
    e2: i64,
}

impl<R: Real> ScaledPow<R> {
    pub(crate) fn one() -> Self {
        ScaledPow {
            m: Complex::new(R::one(), R::zero()),
            e2: 0,
        }
    }

    pub(crate) fn mul_by(&mut self, w: Complex<R>) {
        self.m = self.m * w;
        let n2 = self.m.norm_sqr();
        let hi = R::of(2.0).powi(80);
        let lo = R::of(2.0).powi(-80);
        if n2 > hi {
            let down = R::of(2.0).powi(-40);
            self.m = self.m * Complex::new(down, R::zero());
            self.e2 += 40;
        } else if n2 < lo && n2 > R::zero() {
            let up = R::of(2.0).powi(40);
            self.m = self.m * Complex::new(up, R::zero());
            self.e2 -= 40;
        }
    }

    /// x * m * 2^e2
    pub(crate) fn apply(&self, x: Complex<R>) -> Complex<R> {
        ldexp_complex(x * self.m, self.e2)
    }

    /// x / (m * 2^e2)
    pub(crate) fn apply_inv(&self, x: Complex<R>) -> Complex<R> {
        ldexp_complex(x / self.m, -self.e2)
    }
}

fn ldexp_complex<R: Real>(mut x: Complex<R>, mut e: i64) -> Complex<R> {
    // component checks, not norm_sqr: the squared norm underflows long
    // before the value itself does
    if (x.re == R::zero() && x.im == R::zero()) || e == 0 {
        return x;
    }
    // chunked scaling keeps each factor representable in f32 as well
    while e != 0 {
        let chunk = e.clamp(-60, 60);
        x = x * Complex::new(R::of(2.0).powi(chunk as i32), R::zero());
        e -= chunk;
        if (x.re == R::zero() && x.im == R::zero()) || !x.re.is_finite() || !x.im.is_finite() {
            break;
        }
    }
    if !x.re.is_finite() || !x.im.is_finite() {
        // only reachable when the true product overflows; callers treat a
        // non-finite value as a failed stabilization
        return Complex::new(R::zero(), R::zero());
    }
    x
}
