//! The Szego recursion for monic orthogonal polynomials on the unit circle.
//!
//! One step maps (Phi_n, Phi_n^*) to
//!
//! ```text
//! Phi_{n+1}(z)   = z Phi_n(z) - conj(alpha_n) Phi_n^*(z)
//! Phi_{n+1}^*(z) = Phi_n^*(z) - alpha_n z Phi_n(z)
//! ```
//!
//! starting from Phi_0 = Phi_0^* = 1. The reversed polynomial is maintained
//! explicitly; the coefficient-reversal identity is asserted in debug builds
//! to catch index errors.

use crate::coeffs::CoefficientFamily;
use crate::error::{Error, Result};
use crate::fit::{geometric_rate, LineFit};
use crate::poly::Poly;
use crate::scalar::{Real, Scalar};
use num_complex::Complex;

/// A monic polynomial of degree n together with its reversed polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SzegoPair<T> {
    pub n: usize,
    pub phi: Poly<T>,
    pub phistar: Poly<T>,
}

impl<T: Scalar> SzegoPair<T> {
    pub fn initial() -> Self {
        SzegoPair {
            n: 0,
            phi: Poly::one(),
            phistar: Poly::one(),
        }
    }
}

/// One recursion step. Requires |alpha_n| < 1, which the coefficient
/// families enforce at evaluation time.
pub fn szego_step<T: Scalar>(pair: &SzegoPair<T>, alpha_n: T) -> SzegoPair<T> {
    let phi_next = pair
        .phi
        .shift_up(1)
        .sub(&pair.phistar.scale(alpha_n.conjugate()));
    let phistar_next = pair.phistar.sub(&pair.phi.shift_up(1).scale(alpha_n));
    let next = SzegoPair {
        n: pair.n + 1,
        phi: phi_next,
        phistar: phistar_next,
    };
    debug_assert!(
        next.phistar == next.phi.reversed_conj(next.n),
        "coefficient reversal violated at n = {}",
        next.n
    );
    next
}

/// The recursion on values at a fixed point z; used by the pointwise limits.
pub fn szego_step_values<T: Scalar>(phi: T, phistar: T, alpha_n: T, z: T) -> (T, T) {
    (
        z.clone() * phi.clone() - alpha_n.conjugate() * phistar.clone(),
        phistar - alpha_n * z * phi,
    )
}

/// Pairs (Phi_n, Phi_n^*) for n = 0..=N.
pub fn monic_sequence<R: Real>(
    family: &CoefficientFamily<R>,
    n_max: usize,
) -> Result<Vec<SzegoPair<Complex<R>>>> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(SzegoPair::initial());
    for n in 0..n_max {
        let alpha = family.alpha(n)?;
        let next = szego_step(&out[n], alpha);
        debug_assert_eq!(next.phi.degree(), Some(n + 1));
        out.push(next);
    }
    Ok(out)
}

/// Values (Phi_n(z), Phi_n^*(z)) for n = 0..=n_max at a fixed point,
/// computed by the recursion on values in O(n_max) arithmetic.
pub fn phi_values<R: Real>(
    family: &CoefficientFamily<R>,
    z: Complex<R>,
    n_max: usize,
) -> Result<Vec<(Complex<R>, Complex<R>)>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let one = Complex::new(R::one(), R::zero());
    out.push((one, one));
    for n in 0..n_max {
        let a = family.alpha(n)?;
        let (phi, star) = out[n];
        out.push(szego_step_values(phi, star, a, z));
    }
    Ok(out)
}

/// Normalizing constant kappa_n = prod_{j<n} (1 - |alpha_j|^2)^{-1/2},
/// accumulated in log space.
pub fn kappa<R: Real>(family: &CoefficientFamily<R>, n: usize) -> Result<R> {
    let mut log_sum = R::zero();
    for j in 0..n {
        let a = family.alpha(j)?;
        log_sum = log_sum + (R::one() - a.norm_sqr()).ln();
    }
    Ok((-log_sum / R::of(2.0)).exp())
}

/// Orthonormal polynomial kappa_n * Phi_n.
pub fn orthonormal<R: Real>(family: &CoefficientFamily<R>, n: usize) -> Result<Poly<Complex<R>>> {
    let seq = monic_sequence(family, n)?;
    let k = kappa(family, n)?;
    Ok(seq[n].phi.scale(Complex::new(k, R::zero())))
}

/// Direct summation form of the iterated recursion:
/// Phi_n(z) = z^n - sum_{j=1..n} conj(alpha_{n-j}) z^{j-1} Phi_{n-j}^*(z).
/// Redundant with `monic_sequence`; kept as an independent route for tests.
pub fn phi_direct_sum<R: Real>(
    seq: &[SzegoPair<Complex<R>>],
    family: &CoefficientFamily<R>,
    n: usize,
    z: Complex<R>,
) -> Result<Complex<R>> {
    let mut acc = z.powu(n as u32);
    let mut zpow = Complex::new(R::one(), R::zero());
    for j in 1..=n {
        let alpha = family.alpha(n - j)?;
        acc = acc - alpha.conj() * zpow * seq[n - j].phistar.eval(z);
        zpow = zpow * z;
    }
    Ok(acc)
}

/// Measured suprema and rates for the a-priori bounds under
/// |alpha_n| <= C q^n.
#[derive(Debug, Clone)]
pub struct BoundReport<R> {
    pub q: R,
    pub qprime: R,
    /// Empirical C with |alpha_n| <= C q^n over the checked range.
    pub coeff_scale: R,
    /// C1 = prod_j (1 + C q^j).
    pub c1: R,
    /// sup over n <= N and the unit-circle grid of |Phi_n^*|.
    pub max_star_unit: R,
    /// sup of |Phi_n^*| / (1 + C1 C |z| / (1 - q |z|)) on the outer radius.
    pub max_star_outer_ratio: R,
    /// sup of |Phi_n| / |z|^n on the outer radius, relative to C1.
    pub max_phi_growth_ratio: R,
    /// sup of |Phi_n| / max(|z|, q')^n on |z| <= q'.
    pub max_phi_inner: R,
    /// Fitted geometric rate of sup_{|z|<=q'} |Phi_{n+1}^* - Phi_n^*|,
    /// expected near q*q'.
    pub star_rate: R,
    pub star_rate_fit: LineFit<R>,
    /// Per-degree bound ratios (measured / allowed), one row per n:
    /// (n, star on unit circle, star on the outer radius, growth outside).
    pub rows: Vec<(usize, R, R, R)>,
}

pub const BOUND_SLACK: f64 = 1e-9;
const BOUND_ANGLES: usize = 256;

/// Check the standard bounds for a family with |alpha_n| <= C q^n, sampling
/// angular grids on the radii {q', 1, min(1/q', (1-margin)/q)}. A measured
/// violation beyond slack is reported as an error since it signals a coding
/// mistake rather than a tight bound.
pub fn check_bounds<R: Real>(
    family: &CoefficientFamily<R>,
    q: R,
    qprime: R,
    n_max: usize,
) -> Result<BoundReport<R>> {
    assert!(q < qprime && qprime < R::one(), "need q < q' < 1");
    let seq = monic_sequence(family, n_max)?;

    // empirical C on the coefficient envelope
    let mut coeff_scale = R::zero();
    for n in 0..n_max {
        let a = family.alpha(n)?.norm() / q.powi(n as i32);
        coeff_scale = coeff_scale.max(a);
    }
    // C1 = prod (1 + C q^j), converged once factors hit 1.0 exactly
    let mut c1 = R::one();
    let mut j = 0;
    loop {
        let factor = R::one() + coeff_scale * q.powi(j);
        if factor == R::one() || j > 20_000 {
            break;
        }
        c1 = c1 * factor;
        j += 1;
    }

    let angle = |k: usize| {
        let t = R::of(k as f64) * R::of(2.0) * R::PI() / R::of(BOUND_ANGLES as f64);
        Complex::new(t.cos(), t.sin())
    };
    let outer_radius = (R::one() / qprime).min((R::one() - R::of(0.02)) / q);

    let mut max_star_unit = R::zero();
    let mut max_star_outer = R::zero();
    let mut max_phi_growth = R::zero();
    let mut max_phi_inner = R::zero();
    let outer_cap = R::one() + c1 * coeff_scale * outer_radius / (R::one() - q * outer_radius);
    let mut rows = Vec::with_capacity(seq.len());

    for pair in &seq {
        let n = pair.n;
        let mut row_star = R::zero();
        let mut row_outer = R::zero();
        let mut row_growth = R::zero();
        for k in 0..BOUND_ANGLES {
            let w = angle(k);
            let on_unit = pair.phistar.eval(w).norm();
            row_star = row_star.max(on_unit / c1);

            let z_out = w * Complex::new(outer_radius, R::zero());
            let star_out = pair.phistar.eval(z_out).norm();
            row_outer = row_outer.max(star_out / outer_cap);
            let phi_out = pair.phi.eval(z_out).norm();
            row_growth = row_growth.max(phi_out / (c1 * outer_radius.powi(n as i32)));

            let z_in = w * Complex::new(qprime, R::zero());
            let phi_in = pair.phi.eval(z_in).norm();
            max_phi_inner = max_phi_inner.max(phi_in / qprime.powi(n as i32));
        }
        max_star_unit = max_star_unit.max(row_star * c1);
        max_star_outer = max_star_outer.max(row_outer);
        max_phi_growth = max_phi_growth.max(row_growth);
        rows.push((n, row_star, row_outer, row_growth));
    }

    let slack = R::of(BOUND_SLACK);
    if max_star_unit > c1 + slack {
        return Err(Error::BoundViolation {
            what: "sup |Phi_n^*| on the unit circle".into(),
            measured: max_star_unit.to_f64().unwrap_or(f64::NAN),
            bound: c1.to_f64().unwrap_or(f64::NAN),
        });
    }
    if max_star_outer > R::one() + slack {
        return Err(Error::BoundViolation {
            what: "sup |Phi_n^*| outside the unit circle".into(),
            measured: max_star_outer.to_f64().unwrap_or(f64::NAN),
            bound: 1.0,
        });
    }
    if max_phi_growth > R::one() + slack {
        return Err(Error::BoundViolation {
            what: "sup |Phi_n| / (C1 |z|^n)".into(),
            measured: max_phi_growth.to_f64().unwrap_or(f64::NAN),
            bound: 1.0,
        });
    }

    // geometric rate of the star differences at radius q'
    let mut ns = Vec::new();
    let mut sups = Vec::new();
    for n in 0..n_max {
        let mut sup = R::zero();
        for k in 0..BOUND_ANGLES {
            let z = angle(k) * Complex::new(qprime, R::zero());
            let d = (seq[n + 1].phistar.eval(z) - seq[n].phistar.eval(z)).norm();
            sup = sup.max(d);
        }
        ns.push(n);
        sups.push(sup);
    }
    let (star_rate, star_rate_fit) = geometric_rate(&ns, &sups, R::of(1e-14))?;

    Ok(BoundReport {
        q,
        qprime,
        coeff_scale,
        c1,
        max_star_unit,
        max_star_outer_ratio: max_star_outer,
        max_phi_growth_ratio: max_phi_growth,
        max_phi_inner,
        star_rate,
        star_rate_fit,
        rows,
    })
}

/// CSV of per-degree bound ratios: `n,star_unit_ratio,star_outer_ratio,growth_ratio`.
pub fn write_bound_csv<R: Real, W: std::io::Write>(
    report: &BoundReport<R>,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "n,star_unit_ratio,star_outer_ratio,growth_ratio")?;
    for (n, a, b, c) in &report.rows {
        writeln!(out, "{},{},{},{}", n, a, b, c)?;
    }
    Ok(())
}

/// Verblunsky coefficients recovered from a pair: alpha_n = -conj(Phi_{n+1}(0)).
pub fn alpha_from_pair<R: Real>(pair_next: &SzegoPair<Complex<R>>) -> Complex<R> {
    -pair_next.phi.coeff(0).conj()
}

impl<R: Real> SzegoPair<Complex<R>> {
    /// |Phi_n(z)| = |Phi_n^*(z)| on the unit circle, up to rounding.
    pub fn check_unit_modulus_identity(&self, angles: usize, tol: R) -> bool {
        for k in 0..angles {
            let t = R::of(k as f64) * R::of(2.0) * R::PI() / R::of(angles as f64);
            let z = Complex::new(t.cos(), t.sin());
            let a = self.phi.eval(z).norm();
            let b = self.phistar.eval(z).norm();
            if (a - b).abs() > tol * (R::one() + a.max(b)) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{CoefficientFamily, DecayModel, RemainderRule};
    use num_complex::Complex64;
    use num_rational::Ratio;

    type C = Complex64;

    fn geometric_half() -> CoefficientFamily<f64> {
        CoefficientFamily::pure(0.5, C::new(0.5, 0.0), "geometric").unwrap()
    }

    fn cosine_modulated() -> CoefficientFamily<f64> {
        let model = DecayModel::new(
            0.5,
            vec![C::new(0.5, 0.0), C::new(0.0, 0.5), C::new(0.0, -0.5)],
            vec![C::new(0.5, 0.0), C::new(0.0, 0.5), C::new(0.0, -0.5)],
            0.5,
        )
        .unwrap();
        CoefficientFamily::expsum(model, RemainderRule::None, "cosine-modulated").unwrap()
    }

    #[test]
    fn single_step_by_hand() {
        let pair = SzegoPair::<C>::initial();
        let next = szego_step(&pair, C::new(0.5, 0.0));
        assert_eq!(next.phi.coeffs(), &[C::new(-0.5, 0.0), C::new(1.0, 0.0)]);
        assert_eq!(
            next.phistar.coeffs(),
            &[C::new(1.0, 0.0), C::new(-0.5, 0.0)]
        );
    }

    #[test]
    fn two_steps_exact_rational() {
        // alpha_0 = 1/2, alpha_1 = 1/4 gives z^2 - (3/8) z - 1/4 exactly.
        type Q = Ratio<i64>;
        let pair = SzegoPair::<Q>::initial();
        let pair = szego_step(&pair, Q::new(1, 2));
        let pair = szego_step(&pair, Q::new(1, 4));
        assert_eq!(
            pair.phi.coeffs(),
            &[Q::new(-1, 4), Q::new(-3, 8), Q::new(1, 1)]
        );
    }

    #[test]
    fn free_case_is_monomial() {
        let fam = CoefficientFamily::table(vec![], "free").unwrap();
        let seq = monic_sequence(&fam, 5).unwrap();
        assert_eq!(seq[5].phi.coeffs(), Poly::<C>::monomial(5).coeffs());
        assert_eq!(seq[5].phistar.coeffs(), &[C::new(1.0, 0.0)]);
    }

    #[test]
    fn monic_and_constant_term_invariants() {
        let fam = cosine_modulated();
        let seq = monic_sequence(&fam, 40).unwrap();
        for pair in &seq {
            assert_eq!(pair.phi.degree(), Some(pair.n));
            assert_eq!(pair.phi.leading().unwrap(), &C::new(1.0, 0.0));
            assert_eq!(pair.phistar.coeff(0), C::new(1.0, 0.0));
        }
    }

    #[test]
    fn unit_circle_modulus_identity() {
        for fam in [geometric_half(), cosine_modulated()] {
            let seq = monic_sequence(&fam, 60).unwrap();
            for pair in seq.iter().step_by(7) {
                assert!(pair.check_unit_modulus_identity(64, 1e-12));
            }
        }
    }

    #[test]
    fn direct_sum_matches_recursion() {
        let fam = cosine_modulated();
        let seq = monic_sequence(&fam, 32).unwrap();
        for &z in &[C::new(0.3, 0.1), C::new(-0.4, 0.45), C::new(0.9, -0.2)] {
            for n in [5usize, 17, 32] {
                let direct = phi_direct_sum(&seq, &fam, n, z).unwrap();
                let rec = seq[n].phi.eval(z);
                assert!(
                    (direct - rec).norm() <= 1e-10 * (1.0 + rec.norm()),
                    "n={} z={}",
                    n,
                    z
                );
            }
        }
    }

    #[test]
    fn kappa_values() {
        let fam = geometric_half();
        assert!((kappa(&fam, 0).unwrap() - 1.0).abs() < 1e-15);
        let k1 = kappa(&fam, 1).unwrap();
        assert!((k1 - 0.75f64.powf(-0.5)).abs() < 1e-12);
        assert!((k1 - 1.1547005).abs() < 1e-6);
        // nondecreasing and convergent
        let mut prev = 1.0;
        for n in 1..120 {
            let k = kappa(&fam, n).unwrap();
            assert!(k >= prev);
            prev = k;
        }
        // limit: kappa_n -> 1/D(0) with D(0) the infinite product
        let d0: f64 = (0..400)
            .map(|j| (1.0 - fam.alpha(j).unwrap().norm_sqr()).sqrt())
            .product();
        assert!((prev - 1.0 / d0).abs() < 1e-10);
    }

    #[test]
    fn orthonormal_scales_monic() {
        let fam = geometric_half();
        let phi1 = orthonormal(&fam, 1).unwrap();
        let scale = 2.0 / 3.0f64.sqrt();
        assert!((phi1.coeff(1).re - scale).abs() < 1e-12);
        assert!((phi1.coeff(0).re + 0.5 * scale).abs() < 1e-12);
    }

    #[test]
    fn bounds_hold_for_free_case() {
        let fam = CoefficientFamily::table(vec![], "free").unwrap();
        // q is arbitrary for the zero sequence; rate fit has no signal
        let err = check_bounds(&fam, 0.5, 0.7, 12);
        match err {
            Ok(report) => assert!(report.max_star_unit <= 1.0 + 1e-12),
            Err(Error::FitFailed(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn bounds_and_rate_for_geometric_family() {
        let report = check_bounds(&geometric_half(), 0.5, 0.7, 48).unwrap();
        assert!(report.max_star_unit <= report.c1);
        // contraction rate of the star differences approaches q q' = 0.35
        assert!(
            (report.star_rate - 0.35).abs() < 0.05,
            "rate {}",
            report.star_rate
        );
    }

    #[test]
    fn bounds_for_cosine_modulated_family() {
        // |1 + 2cos| <= 3 so C = 3/2 at q = 1/2
        let report = check_bounds(&cosine_modulated(), 0.5, 0.7, 48).unwrap();
        assert!(report.coeff_scale <= 1.5 + 1e-12);
        assert!(report.max_star_unit <= report.c1);
    }

    #[test]
    fn f32_instantiation_smoke() {
        let fam =
            CoefficientFamily::<f32>::pure(0.5, Complex::new(0.5, 0.0), "geometric f32").unwrap();
        let seq = monic_sequence(&fam, 10).unwrap();
        assert_eq!(seq[10].phi.degree(), Some(10));
        assert!(seq[10].check_unit_modulus_identity(16, 1e-5));
    }
}
