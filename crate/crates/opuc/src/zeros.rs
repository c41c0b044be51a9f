//! Classification of the zeros of Phi_n into interior, critical-band and
//! Nevai-Totik populations, and the clock-spacing / gap statistics of the
//! critical band.

use crate::coeffs::{CoefficientFamily, DecayModel};
use crate::error::{Error, Result};
use crate::fit::power_law_exponent;
use crate::roots::{roots, RootOptions, RootSet};
use crate::scalar::Real;
use crate::szego::SzegoApprox;
use num_complex::Complex;
use std::sync::Arc;

/// Classification thresholds; `None` fields take the documented defaults
/// delta = 0.2 b and delta_band = max(4 b log n / n, 0.05 b).
#[derive(Debug, Clone, Default)]
pub struct ClassifyOptions<R: Real> {
    pub delta: Option<R>,
    pub delta_band: Option<R>,
    /// Precomputed Nevai-Totik candidates; when absent, a fresh scan of the
    /// annulus (b + delta, 0.99) is performed.
    pub nt_candidates: Option<Vec<Complex<R>>>,
    pub root_options: Option<RootOptions<R>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroClass {
    Interior,
    Band,
    NevaiTotik,
}

/// A Nevai-Totik-classified zero together with its nearest candidate, when
/// one lies within the matching distance.
#[derive(Debug, Clone)]
pub struct NtMatch<R: Real> {
    pub zero: Complex<R>,
    pub candidate: Option<Complex<R>>,
    pub distance: R,
}

#[derive(Debug, Clone)]
pub struct GapRecord<R: Real> {
    /// Index of the base whose conjugate sits in this gap.
    pub ell: usize,
    /// Argument of conj(b_ell).
    pub center_arg: R,
    /// Band zeros flanking the gap (below, above) in argument.
    pub flanking: (Complex<R>, Complex<R>),
    /// Arg offsets of the flanking zeros from the center, in units of 2 pi / n.
    pub offsets_scaled: (R, R),
    /// Flanking spacing divided by 4 pi / n; 1 for a clean doubled gap.
    pub doubled_ratio: R,
    /// Whether the spacing at the gap exceeded the detection threshold.
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct ZeroReport<R: Real> {
    pub n: usize,
    pub b: R,
    pub delta: R,
    pub delta_band: R,
    pub zeros: RootSet<R>,
    pub interior: Vec<Complex<R>>,
    pub band: Vec<Complex<R>>,
    pub nt: Vec<NtMatch<R>>,
    /// Consecutive argument spacings of the augmented band list (band zeros
    /// plus one synthetic point at each conj(b_ell)), sorted by argument.
    pub spacing: Vec<R>,
    pub gaps: Vec<GapRecord<R>>,
}

/// Gap detection threshold relative to the median band spacing.
const GAP_FACTOR: f64 = 1.5;

fn arg_in_two_pi<R: Real>(z: Complex<R>) -> R {
    let a = z.arg();
    if a < R::zero() {
        a + R::of(2.0) * R::PI()
    } else {
        a
    }
}

/// Classify the zeros of Phi_n for an exponential-sum family.
///
/// Precedence: zeros beyond b + delta are Nevai-Totik, zeros below b - delta
/// are interior, and everything else is band; the three classes always
/// partition the zero set, with the band absorbing any stragglers between
/// the fixed thresholds and the shrinking log-width window.
pub fn classify<R: Real>(
    family: &Arc<CoefficientFamily<R>>,
    model: &DecayModel<R>,
    n: usize,
    opts: &ClassifyOptions<R>,
) -> Result<ZeroReport<R>> {
    let b = model.b;
    let delta = opts.delta.unwrap_or(R::of(0.2) * b);
    let delta_band = opts.delta_band.unwrap_or_else(|| {
        let by_n = R::of(4.0) * R::of((n.max(2) as f64).ln() / n.max(2) as f64) * b;
        by_n.max(R::of(0.05) * b)
    });

    let seq = crate::recursion::monic_sequence(family, n)?;
    let mut ropts = opts.root_options.unwrap_or_default();
    if ropts.radius_hint.is_none() {
        ropts.radius_hint = Some(b);
    }
    let set = roots(&seq[n].phi, &ropts)?;
    // zeros of a monic polynomial from a valid coefficient family lie
    // strictly inside the unit disk; anything else is a solver failure
    if let Some(stray) = set.roots.iter().find(|z| z.norm() >= R::one()) {
        return Err(Error::BoundViolation {
            what: format!("zero {} outside the open unit disk", stray),
            measured: stray.norm().to_f64().unwrap_or(f64::NAN),
            bound: 1.0,
        });
    }

    let candidates = match &opts.nt_candidates {
        Some(c) => c.clone(),
        None => {
            let approx = SzegoApprox::from_model(Arc::clone(family), model);
            let inner = (b + delta).min(R::of(0.95));
            approx.nt_zero_candidates(inner, R::of(0.99))?
        }
    };

    let mut interior = Vec::new();
    let mut band = Vec::new();
    let mut nt = Vec::new();
    for &z in &set.roots {
        let m = z.norm();
        if m > b + delta {
            let (candidate, distance) = candidates
                .iter()
                .map(|c| (*c, (*c - z).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .map(|(c, d)| (Some(c), d))
                .unwrap_or((None, R::infinity()));
            nt.push(NtMatch {
                zero: z,
                candidate,
                distance,
            });
        } else if m < b - delta {
            interior.push(z);
        } else {
            band.push(z);
        }
    }

    let (spacing, gaps) = band_statistics(model, n, &band, delta_band);

    Ok(ZeroReport {
        n,
        b,
        delta,
        delta_band,
        zeros: set,
        interior,
        band,
        nt,
        spacing,
        gaps,
    })
}

fn band_statistics<R: Real>(
    model: &DecayModel<R>,
    n: usize,
    band: &[Complex<R>],
    _delta_band: R,
) -> (Vec<R>, Vec<GapRecord<R>>) {
    if band.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let two_pi = R::of(2.0) * R::PI();

    // raw band spacings for gap detection
    let mut args: Vec<R> = band.iter().map(|&z| arg_in_two_pi(z)).collect();
    args.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let raw_spacing: Vec<R> = (0..args.len())
        .map(|i| {
            if i + 1 < args.len() {
                args[i + 1] - args[i]
            } else {
                args[0] + two_pi - args[i]
            }
        })
        .collect();
    let mut sorted = raw_spacing.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];

    // augmented list with synthetic points at each conj(b_ell)
    let mut augmented: Vec<R> = args.clone();
    for ell in 0..model.len() {
        augmented.push(arg_in_two_pi(model.bases[ell].conj()));
    }
    augmented.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let spacing: Vec<R> = (0..augmented.len())
        .map(|i| {
            if i + 1 < augmented.len() {
                augmented[i + 1] - augmented[i]
            } else {
                augmented[0] + two_pi - augmented[i]
            }
        })
        .collect();

    // per-base gap records from the zeros flanking arg(conj(b_ell))
    let mut gaps = Vec::new();
    let mut sorted_band: Vec<Complex<R>> = band.to_vec();
    sorted_band.sort_by(|a, b| {
        arg_in_two_pi(*a)
            .partial_cmp(&arg_in_two_pi(*b))
            .unwrap()
            .then(a.norm().partial_cmp(&b.norm()).unwrap())
    });
    for ell in 0..model.len() {
        let center = arg_in_two_pi(model.bases[ell].conj());
        // nearest band zero below and above the center argument (cyclically)
        let above_idx = sorted_band
            .iter()
            .position(|z| arg_in_two_pi(*z) > center)
            .unwrap_or(0);
        let below_idx = if above_idx == 0 {
            sorted_band.len() - 1
        } else {
            above_idx - 1
        };
        let below = sorted_band[below_idx];
        let above = sorted_band[above_idx];
        let mut lo = arg_in_two_pi(below) - center;
        if lo > R::zero() {
            lo = lo - two_pi;
        }
        let mut hi = arg_in_two_pi(above) - center;
        if hi < R::zero() {
            hi = hi + two_pi;
        }
        let unit = two_pi / R::of(n as f64);
        let gap_width = hi - lo;
        gaps.push(GapRecord {
            ell,
            center_arg: center,
            flanking: (below, above),
            offsets_scaled: (lo / unit, hi / unit),
            doubled_ratio: gap_width / (R::of(2.0) * unit),
            flagged: gap_width > R::of(GAP_FACTOR) * median,
        });
    }
    (spacing, gaps)
}

/// Spacing statistics of one report's augmented band.
#[derive(Debug, Clone, Copy)]
pub struct ClockStats<R> {
    pub n: usize,
    pub band_count: usize,
    /// mean |spacing * n / 2pi - 1|
    pub mean_rel_dev: R,
    /// max |spacing * n / 2pi - 1|
    pub max_rel_dev: R,
    /// max |spacing - 2pi/n|, the quantity whose n-scaling is fitted
    pub max_abs_dev: R,
    /// max | |z| - b | over the band
    pub max_modulus_dev: R,
}

pub fn clock_report<R: Real>(report: &ZeroReport<R>) -> Result<ClockStats<R>> {
    if report.band.is_empty() {
        return Err(Error::BandEmpty);
    }
    let two_pi = R::of(2.0) * R::PI();
    let unit = two_pi / R::of(report.n as f64);
    let mut mean = R::zero();
    let mut max_rel = R::zero();
    let mut max_abs = R::zero();
    for &s in &report.spacing {
        let rel = (s / unit - R::one()).abs();
        mean = mean + rel;
        max_rel = max_rel.max(rel);
        max_abs = max_abs.max((s - unit).abs());
    }
    mean = mean / R::of(report.spacing.len() as f64);
    let max_modulus_dev = report
        .band
        .iter()
        .map(|z| (z.norm() - report.b).abs())
        .fold(R::zero(), |a, c| a.max(c));
    Ok(ClockStats {
        n: report.n,
        band_count: report.band.len(),
        mean_rel_dev: mean,
        max_rel_dev: max_rel,
        max_abs_dev: max_abs,
        max_modulus_dev,
    })
}

/// Fitted exponent p with max-abs spacing deviation ~ n^{-p} across a sweep.
pub fn spacing_exponent<R: Real>(stats: &[ClockStats<R>]) -> Result<R> {
    let ns: Vec<usize> = stats.iter().map(|s| s.n).collect();
    let vals: Vec<R> = stats.iter().map(|s| s.max_abs_dev).collect();
    let fit = power_law_exponent(&ns, &vals)?;
    Ok(-fit.slope)
}

/// Per-base gap verdicts: the flanking zeros must sit near
/// center +- 2pi/n, i.e. scaled offsets within `tol` of +-1.
pub fn gap_check<R: Real>(report: &ZeroReport<R>, tol: R) -> Result<Vec<(usize, bool)>> {
    if report.band.is_empty() {
        return Err(Error::BandEmpty);
    }
    Ok(report
        .gaps
        .iter()
        .map(|g| {
            let (lo, hi) = g.offsets_scaled;
            let ok = ((-lo) - R::one()).abs() <= tol && (hi - R::one()).abs() <= tol;
            (g.ell, ok && g.flagged)
        })
        .collect())
}

/// Greedy minimal-distance pairing of predicted interior limits against the
/// interior zeros of one report.
#[derive(Debug, Clone)]
pub struct InteriorPairing<R: Real> {
    pub pairs: Vec<(Complex<R>, Complex<R>, R)>,
    pub unmatched_predicted: Vec<Complex<R>>,
    pub unmatched_zeros: Vec<Complex<R>>,
}

pub fn match_interior<R: Real>(
    report: &ZeroReport<R>,
    predicted: &[Complex<R>],
    radius: R,
) -> Result<InteriorPairing<R>> {
    let mut remaining: Vec<Complex<R>> = report.interior.clone();
    let mut pairs = Vec::new();
    let mut unmatched_predicted = Vec::new();
    for &p in predicted {
        let best = remaining
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (*z - p).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match best {
            Some((i, d)) if d <= radius => {
                pairs.push((p, remaining.remove(i), d));
            }
            _ => unmatched_predicted.push(p),
        }
    }
    if !unmatched_predicted.is_empty() || !remaining.is_empty() {
        return Err(Error::UnmatchedZero(format!(
            "{} predictions unmatched, {} interior zeros left (radius {:e})",
            unmatched_predicted.len(),
            remaining.len(),
            radius.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(InteriorPairing {
        pairs,
        unmatched_predicted,
        unmatched_zeros: remaining,
    })
}

/// Zeros CSV in the root-set format plus a class column.
pub fn write_classified_csv<R: Real, W: std::io::Write>(
    report: &ZeroReport<R>,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "n,index,re,im,modulus,arg,residual,class")?;
    let class_of = |z: &Complex<R>| -> &'static str {
        if report.interior.iter().any(|w| w == z) {
            "interior"
        } else if report.nt.iter().any(|m| m.zero == *z) {
            "nt"
        } else {
            "band"
        }
    };
    for (i, (z, res)) in report
        .zeros
        .roots
        .iter()
        .zip(&report.zeros.residuals)
        .enumerate()
    {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            report.n,
            i,
            z.re,
            z.im,
            z.norm(),
            z.arg(),
            res,
            class_of(z)
        )?;
    }
    Ok(())
}

/// Report JSON mirroring the public structure.
#[derive(serde::Serialize)]
pub struct ZeroReportJson {
    pub n: usize,
    pub b: f64,
    pub delta: f64,
    pub delta_band: f64,
    pub interior: Vec<[f64; 2]>,
    pub band: Vec<[f64; 2]>,
    pub nt: Vec<NtMatchJson>,
    pub spacing: Vec<f64>,
    pub gaps: Vec<GapJson>,
}

#[derive(serde::Serialize)]
pub struct NtMatchJson {
    pub zero: [f64; 2],
    pub candidate: Option<[f64; 2]>,
    pub distance: f64,
}

#[derive(serde::Serialize)]
pub struct GapJson {
    pub ell: usize,
    pub center_arg: f64,
    pub offsets_scaled: [f64; 2],
    pub doubled_ratio: f64,
    pub flagged: bool,
}

impl ZeroReport<f64> {
    pub fn to_json(&self) -> ZeroReportJson {
        ZeroReportJson {
            n: self.n,
            b: self.b,
            delta: self.delta,
            delta_band: self.delta_band,
            interior: self.interior.iter().map(|z| [z.re, z.im]).collect(),
            band: self.band.iter().map(|z| [z.re, z.im]).collect(),
            nt: self
                .nt
                .iter()
                .map(|m| NtMatchJson {
                    zero: [m.zero.re, m.zero.im],
                    candidate: m.candidate.map(|c| [c.re, c.im]),
                    distance: m.distance,
                })
                .collect(),
            spacing: self.spacing.clone(),
            gaps: self
                .gaps
                .iter()
                .map(|g| GapJson {
                    ell: g.ell,
                    center_arg: g.center_arg,
                    offsets_scaled: [g.offsets_scaled.0, g.offsets_scaled.1],
                    doubled_ratio: g.doubled_ratio,
                    flagged: g.flagged,
                })
                .collect(),
        }
    }
}
