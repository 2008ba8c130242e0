//! Quadrature and root-finding fallbacks behind the [`Density`] defaults.

use super::{Density, Support};
use crate::error::{domain, Error, Result};
use crate::quadrature::{
    integrate, integrate_from, integrate_real_line, integrate_to, QuadOptions, TailShape,
};

pub(crate) const CDF_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-6;

fn opts() -> QuadOptions {
    QuadOptions::with_abs_tol(CDF_TOL)
}

/// `∫ pdf` over the support.
pub fn total_mass<D: Density + ?Sized>(d: &D) -> Result<f64> {
    match d.support() {
        Support::RealLine => Ok(integrate_real_line(|x| d.pdf(x), d.shape(), opts())?.value),
        Support::Positive => {
            let shape = d.shape();
            let log_shape = TailShape { center: shape.center.ln(), scale: 1.0, tail_index: f64::INFINITY };
            Ok(integrate_real_line(|t| d.pdf(t.exp()) * t.exp(), log_shape, opts())?.value)
        }
    }
}

/// Fails with a numeric-integrity error unless `|∫ pdf - 1| ≤ 1e-6`.
pub fn check_normalization<D: Density + ?Sized>(d: &D) -> Result<f64> {
    let total = total_mass(d)?;
    if (total - 1.0).abs() > NORMALIZATION_TOL || !total.is_finite() {
        return Err(Error::NumericIntegrity(format!("density integrates to {total}, not 1")));
    }
    Ok(total)
}

pub(crate) fn cdf<D: Density + ?Sized>(d: &D, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("cdf at NaN"));
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let shape = d.shape();
    let f = |t: f64| d.pdf(t);
    let value = if x <= shape.center {
        integrate_to(f, x, shape, opts())?.value
    } else {
        1.0 - integrate_from(f, x, shape, opts())?.value
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Quantile by safeguarded Newton on the cdf. The cdf is advanced by
/// integrating the pdf between successive iterates instead of being
/// recomputed from scratch.
pub(crate) fn quantile<D: Density + ?Sized>(d: &D, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("quantile requires p in (0, 1), got {p}")));
    }
    check_normalization(d)?;
    let shape = d.shape();
    let mut x = shape.center;
    let mut gap = d.cdf(x)? - p;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut step = 2.0 * shape.scale;
    for _ in 0..500 {
        if gap == 0.0 || gap.abs() <= 1e-14 {
            return Ok(x);
        }
        if gap < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = d.pdf(x);
        let newton = x - gap / density;
        let bracketed = lo.is_finite() && hi.is_finite();
        let next = if density > 0.0 && newton > lo && newton < hi && (bracketed || (newton - x).abs() <= step) {
            newton
        } else if bracketed {
            0.5 * (lo + hi)
        } else {
            step *= 2.0;
            if gap < 0.0 {
                x + step
            } else {
                x - step
            }
        };
        let increment = integrate(|t| d.pdf(t), x, next, opts())?.value;
        gap += increment;
        if (next - x).abs() <= 2.0 * f64::EPSILON * (x.abs() + shape.scale) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NumericIntegrity(format!("quantile search for p = {p} did not converge")))
}

pub(crate) fn mean<D: Density + ?Sized>(d: &D) -> Result<f64> {
    let shape = d.shape();
    if shape.tail_index <= 1.0 {
        return Err(domain(format!("mean does not exist for tail index {}", shape.tail_index)));
    }
    let total = check_normalization(d)?;
    // x f(x) has tails one power heavier than f.
    let moment_shape = TailShape { tail_index: shape.tail_index - 1.0, ..shape };
    let centered = integrate_real_line(|t| (t - shape.center) * d.pdf(t), moment_shape, opts())?.value;
    Ok(shape.center + centered / total)
}
