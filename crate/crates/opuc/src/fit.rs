//! Least-squares line fits on log-transformed data, used to measure geometric
//! decay rates and power-law exponents from finite sweeps.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct LineFit<R> {
    pub slope: R,
    pub intercept: R,
    pub r_squared: R,
}

/// Ordinary least squares y = slope * x + intercept.
pub fn fit_line<R: Real>(xs: &[R], ys: &[R]) -> Result<LineFit<R>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::FitFailed(format!(
            "need at least 2 paired points, got {}/{}",
            xs.len(),
            ys.len()
        )));
    }
    let n = R::of(xs.len() as f64);
    let mean = |v: &[R]| v.iter().fold(R::zero(), |a, &b| a + b) / n;
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    let mut syy = R::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
        syy = syy + (y - my) * (y - my);
    }
    if sxx == R::zero() {
        return Err(Error::FitFailed("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == R::zero() {
        R::one()
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// Fit |v_n| ~ C * rate^n on the points with v above `floor`; returns the
/// rate (e^slope) and the fit itself.
pub fn geometric_rate<R: Real>(ns: &[usize], values: &[R], floor: R) -> Result<(R, LineFit<R>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &v) in ns.iter().zip(values) {
        if v > floor {
            xs.push(R::of(n as f64));
            ys.push(v.ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::FitFailed(format!(
            "only {} points above the floor {:e}",
            xs.len(),
            floor.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let fit = fit_line(&xs, &ys)?;
    Ok((fit.slope.exp(), fit))
}

/// Fit v ~ C * n^p and return the exponent p.
pub fn power_law_exponent<R: Real>(ns: &[usize], values: &[R]) -> Result<LineFit<R>> {
    let xs: Vec<R> = ns.iter().map(|&n| R::of(n as f64).ln()).collect();
    let ys: Vec<R> = values
        .iter()
        .map(|v| {
            if *v > R::zero() {
                Ok(v.ln())
            } else {
                Err(Error::FitFailed(
                    "nonpositive value in power-law fit".into(),
                ))
            }
        })
        .collect::<Result<_>>()?;
    fit_line(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_geometric_rate() {
        let ns: Vec<usize> = (5..40).collect();
        let vals: Vec<f64> = ns.iter().map(|&n| 3.0 * 0.35f64.powi(n as i32)).collect();
        let (rate, fit) = geometric_rate(&ns, &vals, 1e-300).unwrap();
        assert!((rate - 0.35).abs() < 1e-12);
        assert!(fit.r_squared > 0.999999);
    }

    #[test]
    fn floor_excludes_saturated_tail() {
        let ns: Vec<usize> = (0..60).collect();
        let vals: Vec<f64> = ns
            .iter()
            .map(|&n| (2.0 * 0.5f64.powi(n as i32)).max(1e-13))
            .collect();
        let (rate, _) = geometric_rate(&ns, &vals, 1e-12).unwrap();
        assert!((rate - 0.5).abs() < 0.01);
    }

    #[test]
    fn power_law_fit() {
        let ns = [50usize, 100, 200];
        let vals: Vec<f64> = ns.iter().map(|&n| 7.0 / (n as f64).powi(2)).collect();
        let fit = power_law_exponent(&ns, &vals).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-10);
    }

    #[test]
    fn too_few_points_is_an_error() {
        assert!(fit_line::<f64>(&[1.0], &[2.0]).is_err());
        assert!(geometric_rate::<f64>(&[1, 2, 3], &[0.0, 0.0, 0.0], 1e-12).is_err());
    }
}
