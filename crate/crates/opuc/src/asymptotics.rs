//! Closed-form asymptotic objects for exponential-sum coefficient families:
//! the geometric solutions u_n, the normalized interior profile Qtilde_n, the
//! limit polynomials P_n / P_infinity, the ratio polynomials W_l of the
//! Barrios-Lopez-Saff regime, and the critical-annulus decomposition of
//! Phi_n into remainder, interior and outer parts.

use crate::coeffs::DecayModel;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{roots, RootOptions};
use crate::scalar::{Real, Scalar};
use crate::szego::{AnnulusSpec, ScaledPow, SzegoApprox, DOMAIN_MARGIN};
use num_complex::Complex;
use std::sync::Arc;

/// Distance below which a point counts as sitting on a pole conj(b_l).
const POLE_EPS: f64 = 1e-9;

fn pole_check<R: Real>(model: &DecayModel<R>, z: Complex<R>) -> Result<()> {
    for (ell, base) in model.bases.iter().enumerate() {
        if (z - base.conj()).norm() < R::of(POLE_EPS) {
            return Err(Error::PoleHit { ell });
        }
    }
    Ok(())
}

/// u_n = conj(b_l)^n / (z - conj(b_l)); solves u_{n+1} = z u_n - conj(b_l)^n.
pub fn u_n<R: Real>(
    model: &DecayModel<R>,
    ell: usize,
    n: usize,
    z: Complex<R>,
) -> Result<Complex<R>> {
    let bl = model.bases[ell].conj();
    if (z - bl).norm() < R::of(POLE_EPS) {
        return Err(Error::PoleHit { ell });
    }
    Ok(bl.powu(n as u32) / (z - bl))
}

/// Normalized interior profile
/// Qtilde_n(z) = [ sum_l conj(C_l) omega_l^n (z - conj(b_l))^{-1} ] D(z)^{-1},
/// the locally uniform limit of b^{-n} phi_n on compact subsets of |z| < b.
pub fn tilde_q<R: Real>(
    approx: &SzegoApprox<R>,
    model: &DecayModel<R>,
    n: usize,
    z: Complex<R>,
) -> Result<Complex<R>> {
    pole_check(model, z)?;
    let d_inv = approx.szego_inverse(z)? / Complex::new(approx.d_zero()?, R::zero());
    let mut sum = Complex::new(R::zero(), R::zero());
    for (ell, base) in model.bases.iter().enumerate() {
        let omega = model.omega(ell);
        sum = sum + model.amplitudes[ell].conj() * omega.powu(n as u32) / (z - base.conj());
    }
    Ok(sum * d_inv)
}

/// P_n(z) = sum_l conj(C_l) omega_l^n prod_{k != l} (z - conj(b_k)),
/// a nonzero polynomial of degree at most L-1.
pub fn p_n<R: Real>(model: &DecayModel<R>, n: usize) -> Poly<Complex<R>> {
    let omegas: Vec<Complex<R>> = (0..model.len())
        .map(|ell| model.omega(ell).powu(n as u32))
        .collect();
    p_infinity(model, &omegas)
}

/// The limit polynomial along a subsequence with omega_l^{n_j} -> omega_inf_l.
pub fn p_infinity<R: Real>(model: &DecayModel<R>, omega_inf: &[Complex<R>]) -> Poly<Complex<R>> {
    assert_eq!(omega_inf.len(), model.len());
    let mut acc = Poly::zero();
    for (ell, omega) in omega_inf.iter().enumerate() {
        let mut prod = Poly::constant(model.amplitudes[ell].conj() * omega);
        for (k, base) in model.bases.iter().enumerate() {
            if k != ell {
                prod = prod.mul(&Poly::new(vec![
                    -base.conj(),
                    Complex::new(R::one(), R::zero()),
                ]));
            }
        }
        acc = acc.add(&prod);
    }
    acc
}

/// Smallest p <= cap with omega_l^p = 1 for every l, when the rotations are
/// roots of unity; `None` for irrational rotations.
pub fn rotation_period<R: Real>(model: &DecayModel<R>, cap: usize) -> Option<usize> {
    let one = Complex::new(R::one(), R::zero());
    (1..=cap).find(|&p| {
        (0..model.len()).all(|ell| (model.omega(ell).powu(p as u32) - one).norm() < R::of(1e-10))
    })
}

/// Limit polynomials for each residue class r = n mod p.
pub fn residue_class_limits<R: Real>(model: &DecayModel<R>, p: usize) -> Vec<Poly<Complex<R>>> {
    (0..p).map(|r| p_n(model, r)).collect()
}

/// Zeros of a limit polynomial strictly inside |z| < b; these are the
/// predicted interior-zero limits. Zeros on the critical circle itself
/// (the pole-cancelling ones) are excluded by a relative margin.
pub fn interior_zero_predictions<R: Real>(poly: &Poly<Complex<R>>, b: R) -> Vec<Complex<R>> {
    match poly.degree() {
        None | Some(0) => Vec::new(),
        Some(_) => {
            let set = roots(poly, &RootOptions::default()).expect("limit polynomial solve");
            set.roots
                .into_iter()
                .filter(|z| z.norm() < b * (R::one() - R::of(1e-6)))
                .collect()
        }
    }
}

/// Ratio polynomial of the periodic-ratio regime, 1-indexed in `ell`:
/// W_l(z) = 1 + (b c_{l-1})^{-1} z + (b c_{l-1} b c_{l-2})^{-1} z^2 + ...
/// with c-subscripts taken mod p. Exact over rationals when instantiated so.
pub fn w_ell<T: Scalar>(b: T, c: &[T], ell: usize) -> Result<Poly<T>> {
    let p = c.len();
    assert!(p >= 1 && ell >= 1 && ell <= p, "need 1 <= ell <= p");
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            return Err(Error::ZeroRatio { index: j + 1 });
        }
    }
    let mut coeffs = Vec::with_capacity(p);
    coeffs.push(T::one());
    let mut acc = T::one();
    for j in 1..p {
        // c_{ell-j}, 1-indexed, wrapped mod p
        let idx = (ell as i64 - j as i64 - 1).rem_euclid(p as i64) as usize;
        acc = acc / (b.clone() * c[idx].clone());
        coeffs.push(acc.clone());
    }
    Ok(Poly::new(coeffs))
}

/// G_l(z) = W_l(z) / (1 - (z/b)^p), the ratio limit of the periodic regime.
/// The zeros of W_l on the critical circle cancel the poles of the
/// denominator, so the value extends to |z| < b away from the circle.
pub fn g_ell_value<R: Real>(
    b: R,
    c: &[Complex<R>],
    ell: usize,
    z: Complex<R>,
) -> Result<Complex<R>> {
    let p = c.len();
    let w = w_ell(Complex::new(b, R::zero()), c, ell)?;
    let ratio = z / Complex::new(b, R::zero());
    let denom = Complex::new(R::one(), R::zero()) - ratio.powu(p as u32);
    if denom.norm() < R::of(1e-12) {
        return Err(Error::PoleHit { ell: 0 });
    }
    Ok(w.eval(z) / denom)
}

/// Coefficient rule k -> beta_k with a guaranteed radius of convergence for
/// sum beta_k z^k; the ratio-asymptotics limits are formed from this series.
#[derive(Clone)]
pub struct RatioLimitData<R: Real> {
    beta: Arc<dyn Fn(usize) -> Complex<R> + Send + Sync>,
    pub radius: R,
}

impl<R: Real> std::fmt::Debug for RatioLimitData<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RatioLimitData {{ radius: {:?} }}", self.radius)
    }
}

impl<R: Real> RatioLimitData<R> {
    pub fn new(beta: Arc<dyn Fn(usize) -> Complex<R> + Send + Sync>, radius: R) -> Self {
        RatioLimitData { beta, radius }
    }

    /// beta_k = b^{-k}, the single-ratio case; sums to (1 - z/b)^{-1}.
    pub fn geometric(b: R) -> Self {
        RatioLimitData {
            beta: Arc::new(move |k| Complex::new(b.powi(-(k as i32)), R::zero())),
            radius: b,
        }
    }

    pub fn beta(&self, k: usize) -> Complex<R> {
        (self.beta)(k)
    }
}

/// -d_inv * sum_k beta_k z^k, truncated once the geometric tail estimate
/// drops below 1e-14 relative.
pub fn ratio_limit_series<R: Real>(
    data: &RatioLimitData<R>,
    z: Complex<R>,
    d_inv: Complex<R>,
) -> Result<Complex<R>> {
    let margin = R::of(DOMAIN_MARGIN);
    if z.norm() >= data.radius * (R::one() - margin) {
        return Err(Error::OutsideDomain {
            z: format!("{}", z),
            domain: format!(
                "|z| < {:.6}",
                (data.radius * (R::one() - margin))
                    .to_f64()
                    .unwrap_or(f64::NAN)
            ),
        });
    }
    let ratio = z.norm() / data.radius;
    let mut sum = Complex::new(R::zero(), R::zero());
    let mut zpow = Complex::new(R::one(), R::zero());
    let mut k = 0usize;
    loop {
        let term = data.beta(k) * zpow;
        sum = sum + term;
        // |beta_j z^j| <= |beta_k z^k| ratio^{j-k} for the admissible rules
        let tail = term.norm() * ratio / (R::one() - ratio);
        if k > 4 && tail < R::of(1e-14) * sum.norm().max(R::one()) {
            break;
        }
        if k > 2_000_000 {
            return Err(Error::NoConvergence {
                iterations: k,
                context: "ratio-limit series".into(),
            });
        }
        zpow = zpow * z;
        k += 1;
    }
    Ok(-d_inv * sum)
}

/// R_n(z) = conj(alpha_n) Phi_n^*(z) - [sum_l conj(C_l) conj(b_l)^n] D(z)^{-1} D(0)
/// for n = 0..=n_max, sharing one stabilized D(z)^{-1} D(0) value.
pub fn r_n_sweep<R: Real>(
    approx: &SzegoApprox<R>,
    model: &DecayModel<R>,
    n_max: usize,
    z: Complex<R>,
) -> Result<Vec<Complex<R>>> {
    let family = approx.family();
    let szinv = approx.szego_inverse(z)?;
    let values = crate::recursion::phi_values(family, z, n_max)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, (_, star)) in values.iter().enumerate() {
        let alpha = family.alpha(n)?;
        let mut drive = Complex::new(R::zero(), R::zero());
        for ell in 0..model.len() {
            drive = drive + model.amplitudes[ell].conj() * model.bases[ell].conj().powu(n as u32);
        }
        out.push(alpha.conj() * *star - drive * szinv);
    }
    Ok(out)
}

/// Single remainder value; see `r_n_sweep` for sweeps.
pub fn r_n<R: Real>(
    approx: &SzegoApprox<R>,
    model: &DecayModel<R>,
    n: usize,
    z: Complex<R>,
) -> Result<Complex<R>> {
    Ok(r_n_sweep(approx, model, n, z)?[n])
}

#[derive(Debug, Clone, Copy)]
pub struct TailBound<R> {
    /// Truncation length of the remainder series.
    pub j: usize,
    /// Majorant C_hat (b delta1)^n (|z| - b delta1)^{-1} for |s_n|.
    pub bound: R,
}

/// Truncation length so the relative geometric tail drops below 1e-12.
fn series_truncation<R: Real>(rho: R) -> Result<usize> {
    let mut tail = rho / (R::one() - rho);
    let mut j = 0usize;
    while tail >= R::of(1e-12) {
        tail = tail * rho;
        j += 1;
        if j > 20_000 {
            return Err(Error::TailTooLarge {
                bound: tail.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(j)
}

/// s_n(z) = sum_{j>=0} z^{-j-1} R_{n+j}(z), truncated at `j_cap` terms
/// (or the automatic length when `None`).
pub fn s_n<R: Real>(
    approx: &SzegoApprox<R>,
    model: &DecayModel<R>,
    annulus: &AnnulusSpec<R>,
    n: usize,
    z: Complex<R>,
    j_cap: Option<usize>,
) -> Result<(Complex<R>, TailBound<R>)> {
    let margin = R::of(DOMAIN_MARGIN);
    if z.norm() <= annulus.inner * (R::one() + margin) {
        return Err(Error::OutsideDomain {
            z: format!("{}", z),
            domain: format!(
                "|z| > {:.6}",
                (annulus.inner * (R::one() + margin))
                    .to_f64()
                    .unwrap_or(f64::NAN)
            ),
        });
    }
    let rho = annulus.inner / z.norm();
    let j_len = match j_cap {
        Some(j) => j,
        None => series_truncation(rho)?,
    };
    let rs = r_n_sweep(approx, model, n + j_len, z)?;
    let winv = z.inv();
    let mut zpow = ScaledPow::one();
    let mut sum = Complex::new(R::zero(), R::zero());
    let mut c_hat = R::zero();
    for (j, rv) in rs[n..=n + j_len].iter().enumerate() {
        zpow.mul_by(winv); // z^{-(j+1)}
        sum = sum + zpow.apply(*rv);
        let m = n + j;
        let envelope = annulus.inner.powi(m as i32);
        if envelope > R::zero() {
            c_hat = c_hat.max(rv.norm() / envelope);
        }
    }
    let bound = c_hat * annulus.inner.powi(n as i32) / (z.norm() - annulus.inner);
    Ok((sum, TailBound { j: j_len, bound }))
}

/// How the outer term of a decomposition was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterRoute {
    /// Direct stabilized limit of z^{-n} Phi_n(z); available for |z| > q.
    DirectLimit,
    /// Transported from a reference index via the one-step recurrence of the
    /// outer part; used where the direct limit does not converge (|z| <= q).
    Transport { reference: usize },
}

/// One evaluation of the critical-annulus decomposition
/// Phi_n = s_n + [sum_l conj(C_l) conj(b_l)^n (z - conj(b_l))^{-1}] D(0) D(z)^{-1}
///         + z^n f(z).
#[derive(Debug, Clone)]
pub struct CriticalDecomposition<R: Real> {
    pub n: usize,
    pub z: Complex<R>,
    pub s_term: Complex<R>,
    pub interior_term: Complex<R>,
    pub outer_term: Complex<R>,
    pub phi_value: Complex<R>,
    pub residual: R,
    pub outer_route: OuterRoute,
    pub tail: TailBound<R>,
}

/// The interior term of the decomposition.
pub fn interior_term<R: Real>(
    approx: &SzegoApprox<R>,
    model: &DecayModel<R>,
    n: usize,
    z: Complex<R>,
) -> Result<Complex<R>> {
    let szinv = approx.szego_inverse(z)?;
    let mut sum = Complex::new(R::zero(), R::zero());
    for ell in 0..model.len() {
        let bl = model.bases[ell].conj();
        sum = sum + model.amplitudes[ell].conj() * bl.powu(n as u32) / (z - bl);
    }
    Ok(sum * szinv)
}

pub fn critical_decomposition<R: Real>(
    approx: &SzegoApprox<R>,
    model: &DecayModel<R>,
    annulus: &AnnulusSpec<R>,
    n: usize,
    z: Complex<R>,
) -> Result<CriticalDecomposition<R>> {
    if !annulus.contains(z) {
        return Err(Error::OutsideDomain {
            z: format!("{}", z),
            domain: format!(
                "annulus {:.4} < |z| < {:.4}",
                annulus.inner.to_f64().unwrap_or(f64::NAN),
                annulus.outer.to_f64().unwrap_or(f64::NAN)
            ),
        });
    }
    pole_check(model, z)?;

    let (s_term, tail) = s_n(approx, model, annulus, n, z, None)?;
    let interior = interior_term(approx, model, n, z)?;
    let values = crate::recursion::phi_values(approx.family(), z, n)?;
    let phi_value = values[n].0;

    let direct_ok = z.norm() > approx.q * (R::one() + R::of(DOMAIN_MARGIN));
    let (outer_term, outer_route) = if direct_ok {
        let f = approx.outer_limit(z)?;
        (z.powu(n as u32) * f, OuterRoute::DirectLimit)
    } else {
        // f(z) = z^{-m} (Phi_m - s_m - T_m) is independent of m; evaluate at a
        // reference index above n and transport down
        let reference = n + 24;
        let (s_ref, _) = s_n(approx, model, annulus, reference, z, None)?;
        let t_ref = interior_term(approx, model, reference, z)?;
        let phi_ref = crate::recursion::phi_values(approx.family(), z, reference)?[reference].0;
        let q_ref = phi_ref - s_ref - t_ref;
        // z^{n - m} q_ref without forming large powers
        let steps = reference - n;
        let mut pw = ScaledPow::one();
        let winv = z.inv();
        for _ in 0..steps {
            pw.mul_by(winv);
        }
        (pw.apply(q_ref), OuterRoute::Transport { reference })
    };

    let residual = (phi_value - (s_term + interior + outer_term)).norm();
    Ok(CriticalDecomposition {
        n,
        z,
        s_term,
        interior_term: interior,
        outer_term,
        phi_value,
        residual,
        outer_route,
        tail,
    })
}

/// CSV rows `n,re_z,im_z,abs_s,abs_interior,abs_outer,residual`.
pub fn write_decomposition_csv<R: Real, W: std::io::Write>(
    rows: &[CriticalDecomposition<R>],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "n,re_z,im_z,abs_s,abs_interior,abs_outer,residual")?;
    for d in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            d.n,
            d.z.re,
            d.z.im,
            d.s_term.norm(),
            d.interior_term.norm(),
            d.outer_term.norm(),
            d.residual
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{CoefficientFamily, DecayModel, RemainderRule};
    use num_complex::Complex64;
    use num_rational::Ratio;

    type C = Complex64;

    fn geometric_family() -> Arc<CoefficientFamily<f64>> {
        Arc::new(CoefficientFamily::pure(0.5, C::new(0.5, 0.0), "geometric").unwrap())
    }

    fn cosine_family() -> Arc<CoefficientFamily<f64>> {
        let model = cosine_model();
        Arc::new(CoefficientFamily::expsum(model, RemainderRule::None, "cosine").unwrap())
    }

    fn cosine_model() -> DecayModel<f64> {
        DecayModel::new(
            0.5,
            vec![C::new(0.5, 0.0), C::new(0.0, 0.5), C::new(0.0, -0.5)],
            vec![C::new(0.5, 0.0), C::new(0.0, 0.5), C::new(0.0, -0.5)],
            0.5,
        )
        .unwrap()
    }

    fn approx_for(fam: &Arc<CoefficientFamily<f64>>) -> SzegoApprox<f64> {
        let model = fam.infer_model().unwrap();
        SzegoApprox::from_model(Arc::clone(fam), &model)
    }

    #[test]
    fn u_n_values_and_recurrence() {
        let model = geometric_family().infer_model().unwrap();
        let v = u_n(&model, 0, 0, C::new(1.0, 0.0)).unwrap();
        assert!((v - C::new(2.0, 0.0)).norm() < 1e-15);

        let z = C::new(0.37, -0.81);
        for n in [0usize, 3, 11] {
            let lhs = u_n(&model, 0, n + 1, z).unwrap();
            let rhs = z * u_n(&model, 0, n, z).unwrap() - C::new(0.5, 0.0).powu(n as u32);
            assert!((lhs - rhs).norm() < 1e-14);
        }

        let m2 = cosine_model();
        // conj(i/2) = -i/2, fourth power is 1/16
        let v = u_n(&m2, 1, 4, C::new(0.8, 0.0)).unwrap();
        let expect = C::new(1.0 / 16.0, 0.0) / (C::new(0.8, 0.0) + C::new(0.0, 0.5));
        assert!((v - expect).norm() < 1e-15);

        assert!(matches!(
            u_n(&m2, 0, 1, C::new(0.5, 0.0)),
            Err(Error::PoleHit { ell: 0 })
        ));
    }

    #[test]
    fn tilde_q_tracks_normalized_orthonormal_values() {
        // max |b^{-n} phi_n - Qtilde_n| over interior points must decay in n
        let fam = cosine_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        let zs = [C::new(0.2, 0.0), C::new(-0.1, 0.22), C::new(0.0, -0.29)];
        let mut prev = f64::INFINITY;
        for n in [20usize, 35, 50] {
            let k = crate::recursion::kappa(&fam, n).unwrap();
            let mut worst: f64 = 0.0;
            for &z in &zs {
                let phi = crate::recursion::phi_values(&fam, z, n).unwrap()[n].0;
                let lhs = phi * C::new(k * 0.5f64.powi(-(n as i32)), 0.0);
                let qt = tilde_q(&approx, &model, n, z).unwrap();
                worst = worst.max((lhs - qt).norm());
            }
            assert!(worst < prev, "n={n}: {worst} !< {prev}");
            prev = worst;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn tilde_q_conjugation_symmetry() {
        let fam = cosine_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        // conjugating the model and the point conjugates the value
        let conj_model = DecayModel::new(
            model.b,
            model.amplitudes.iter().map(|c| c.conj()).collect(),
            model.bases.iter().map(|c| c.conj()).collect(),
            model.delta,
        )
        .unwrap();
        // the conjugated cosine model is the same set reordered, so Qtilde is
        // conjugation-covariant at conjugated points
        let z = C::new(0.17, 0.09);
        for n in [8usize, 13] {
            let a = tilde_q(&approx, &model, n, z).unwrap();
            let b = tilde_q(&approx, &conj_model, n, z.conj()).unwrap();
            assert!((a.conj() - b).norm() < 1e-12);
        }
    }

    #[test]
    fn p_n_structure() {
        let model = geometric_family().infer_model().unwrap();
        let p = p_n(&model, 7);
        assert_eq!(p.degree(), Some(0));
        assert!((p.coeff(0) - C::new(0.5, 0.0)).norm() < 1e-15);

        let m2 = cosine_model();
        for n in 0..12 {
            let p = p_n(&m2, n);
            assert!(p.degree().unwrap_or(0) <= 2);
            assert!(!p.is_zero());
        }
        // period-4 rotation: P_{n+4} = P_n
        for n in 0..4 {
            let a = p_n(&m2, n);
            let b = p_n(&m2, n + 4);
            assert!(a
                .coeffs()
                .iter()
                .zip(b.coeffs())
                .all(|(x, y)| (x - y).norm() < 1e-14));
        }
    }

    #[test]
    fn residue_class_interior_zeros() {
        let m = cosine_model();
        assert_eq!(rotation_period(&m, 16), Some(4));
        let limits = residue_class_limits(&m, 4);
        let golden = (2.0f64.sqrt() - 1.0) / 2.0;
        let counts: Vec<usize> = limits
            .iter()
            .map(|p| interior_zero_predictions(p, 0.5).len())
            .collect();
        assert_eq!(counts, vec![0, 1, 1, 2]);
        let class2 = interior_zero_predictions(&limits[2], 0.5);
        assert!(
            (class2[0] - C::new(golden, 0.0)).norm() < 1e-9,
            "class-2 interior prediction {:?}",
            class2
        );
    }

    #[test]
    fn w_ell_reference_values_exact() {
        type Q = Ratio<i64>;
        let c = [Q::new(-1, 1), Q::new(-1, 1), Q::new(3, 1), Q::new(1, 3)];
        let w2 = w_ell(Q::new(1, 2), &c, 2).unwrap();
        assert_eq!(
            w2.coeffs(),
            &[Q::new(1, 1), Q::new(-2, 1), Q::new(-12, 1), Q::new(-8, 1)]
        );
        let w1 = w_ell(Q::new(1, 2), &c, 1).unwrap();
        assert_eq!(
            w1.coeffs(),
            &[Q::new(1, 1), Q::new(6, 1), Q::new(4, 1), Q::new(-8, 1)]
        );
    }

    #[test]
    fn w_ell_trivial_and_error_cases() {
        let w = w_ell(C::new(0.5, 0.0), &[C::new(1.0, 0.0)], 1).unwrap();
        assert_eq!(w.coeffs(), &[C::new(1.0, 0.0)]);
        let err = w_ell(C::new(0.5, 0.0), &[C::new(0.0, 0.0), C::new(1.0, 0.0)], 1);
        assert!(matches!(err, Err(Error::ZeroRatio { index: 1 })));
    }

    #[test]
    fn w_ell_interior_zero_filter() {
        let c = [
            C::new(-1.0, 0.0),
            C::new(-1.0, 0.0),
            C::new(3.0, 0.0),
            C::new(1.0 / 3.0, 0.0),
        ];
        let w2 = w_ell(C::new(0.5, 0.0), &c, 2).unwrap();
        let interior = interior_zero_predictions(&w2, 0.5);
        assert_eq!(interior.len(), 1);
        let golden = (2.0f64.sqrt() - 1.0) / 2.0;
        assert!((interior[0] - C::new(golden, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn w_ell_matches_residue_class_limits_inside() {
        // dual route: the periodic-ratio polynomials and the limit
        // polynomials predict the same interior zeros per class
        let m = cosine_model();
        let limits = residue_class_limits(&m, 4);
        let c = [
            C::new(-1.0, 0.0),
            C::new(-1.0, 0.0),
            C::new(3.0, 0.0),
            C::new(1.0 / 3.0, 0.0),
        ];
        for ell in 1..=4usize {
            let r = ell % 4;
            let from_limit = interior_zero_predictions(&limits[r], 0.5);
            let w = w_ell(C::new(0.5, 0.0), &c, ell).unwrap();
            let from_ratio = interior_zero_predictions(&w, 0.5);
            assert_eq!(from_limit.len(), from_ratio.len(), "class {ell}");
            for z in &from_limit {
                let d = from_ratio
                    .iter()
                    .map(|w| (w - z).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(d < 1e-9, "class {ell}: prediction {z} unmatched ({d:e})");
            }
        }
    }

    #[test]
    fn geometric_series_closed_form() {
        let data = RatioLimitData::geometric(0.5);
        let v = ratio_limit_series(&data, C::new(0.2, 0.0), C::new(1.0, 0.0)).unwrap();
        assert!((v - C::new(-5.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!(matches!(
            ratio_limit_series(&data, C::new(0.51, 0.0), C::new(1.0, 0.0)),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn ratio_limit_matches_finite_n() {
        // Phi_n(z)/conj(alpha_{n-1}) approaches -[D(0) D(z)^{-1}] (1 - z/b)^{-1}
        let fam = geometric_family();
        let approx = approx_for(&fam);
        let z = C::new(0.2, 0.0);
        let d_inv = approx.szego_inverse(z).unwrap();
        let data = RatioLimitData::geometric(0.5);
        let target = ratio_limit_series(&data, z, d_inv).unwrap();
        let values = crate::recursion::phi_values(&fam, z, 201).unwrap();
        let mut errs = Vec::new();
        for n in [12usize, 20, 200] {
            let lhs = values[n].0 / fam.alpha(n - 1).unwrap().conj();
            errs.push((lhs - target).norm() / target.norm());
        }
        // geometric approach at small n, machine floor long before n = 200
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 1e-6, "relative error {}", errs[2]);
    }

    #[test]
    fn remainder_sweep_decays() {
        let fam = cosine_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        let z = C::new(1.0, 0.0);
        let rs = r_n_sweep(&approx, &model, 40, z).unwrap();
        assert!(rs[30].norm() < rs[10].norm() * 1e-3);
        // free family with empty drive: R identically zero
        let free = Arc::new(CoefficientFamily::table(vec![], "free").unwrap());
        let fap = SzegoApprox::new(free, 0.5, 0.7, 1e-12);
        let tiny_model = DecayModel {
            amplitudes: vec![C::new(1e-300, 0.0)],
            bases: vec![C::new(0.5, 0.0)],
            b: 0.5,
            delta: 0.5,
            delta1: None,
        };
        let rs = r_n_sweep(&fap, &tiny_model, 10, z).unwrap();
        assert!(rs.iter().all(|v| v.norm() < 1e-290));
    }

    #[test]
    fn s_n_recurrence_and_bound() {
        let fam = geometric_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        let annulus = AnnulusSpec::new(0.5, 0.55);
        let z = C::new(0.55, 0.0);
        // consistent horizons: s_{n+1} = z s_n - R_n up to the shared tail
        let n = 18usize;
        let (s0, t0) = s_n(&approx, &model, &annulus, n, z, Some(80)).unwrap();
        let (s1, _) = s_n(&approx, &model, &annulus, n + 1, z, Some(79)).unwrap();
        let r = r_n(&approx, &model, n, z).unwrap();
        let lhs = s1 - (z * s0 - r);
        assert!(lhs.norm() < 1e-13, "recurrence residual {:e}", lhs.norm());
        assert!(s0.norm() <= t0.bound * (1.0 + 1e-9));
        assert!(matches!(
            s_n(&approx, &model, &annulus, 3, C::new(0.2, 0.0), None),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn decomposition_residual_decays() {
        for fam in [geometric_family(), cosine_family()] {
            let model = fam.infer_model().unwrap();
            let approx = approx_for(&fam);
            let annulus = AnnulusSpec::new(0.5, 0.55);
            let z = C::new(0.39, 0.39); // |z| ~ 0.55, direct outer route
            let mut prev = f64::INFINITY;
            for n in [20usize, 40, 60] {
                let d = critical_decomposition(&approx, &model, &annulus, n, z).unwrap();
                assert_eq!(d.outer_route, OuterRoute::DirectLimit);
                assert!(d.residual < prev, "n={n} residual {:e}", d.residual);
                prev = d.residual;
            }
            assert!(prev < 1e-12);
        }
    }

    #[test]
    fn decomposition_transport_route_below_critical_circle() {
        let fam = cosine_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        let annulus = AnnulusSpec::new(0.5, 0.58);
        let z = C::new(0.30, 0.25); // |z| ~ 0.39 < b
        let mut prev = f64::INFINITY;
        for n in [16usize, 30, 44] {
            let d = critical_decomposition(&approx, &model, &annulus, n, z).unwrap();
            assert!(matches!(d.outer_route, OuterRoute::Transport { .. }));
            assert!(
                d.residual < prev.max(1e-15),
                "n={n} residual {:e}",
                d.residual
            );
            prev = d.residual;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn remainder_term_is_dominated_on_both_sides() {
        // just above the critical circle the outer part dominates s_n; just
        // below, the interior part does
        let fam = cosine_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        let annulus = AnnulusSpec::new(0.5, 0.58);
        let n = 40usize;
        let above =
            critical_decomposition(&approx, &model, &annulus, n, C::new(0.55, 0.0)).unwrap();
        assert!(above.s_term.norm() < 1e-6 * above.outer_term.norm());
        let below =
            critical_decomposition(&approx, &model, &annulus, n, C::new(0.45, 0.0)).unwrap();
        assert!(below.s_term.norm() < 1e-6 * below.interior_term.norm());
    }

    #[test]
    fn pole_cancellation_between_interior_and_outer() {
        let fam = cosine_family();
        let model = fam.infer_model().unwrap();
        let approx = approx_for(&fam);
        let n = 24usize;
        // approach conj(b_2) = -i/2 radially from outside
        let dir = C::new(0.0, -0.5);
        let mut prev_sum = f64::NAN;
        let mut growth = Vec::new();
        for t in [1e-2, 1e-3, 1e-4] {
            let z = dir * C::new(1.0 + t, 0.0);
            let interior = interior_term(&approx, &model, n, z).unwrap();
            let f = approx.outer_limit(z).unwrap();
            let outer = z.powu(n as u32) * f;
            let total = (interior + outer).norm();
            growth.push(interior.norm());
            if !prev_sum.is_nan() {
                // the sum stays of one order while the parts blow up
                assert!(total < prev_sum * 5.0 + 1e-12);
            }
            prev_sum = total;
        }
        assert!(
            growth[2] > growth[0] * 50.0,
            "interior part did not blow up: {growth:?}"
        );
    }
}
