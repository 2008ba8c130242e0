//! Bayes predictive densities for a future `Y₁ ~ N(θ₁, σ²)` under KL loss.
//!
//! With `τ = √(2s²/k)` and `d = x₁ - x₂`:
//!
//! | prior on `θ₁ - θ₂` | predictive                                                  |
//! |--------------------|-------------------------------------------------------------|
//! | flat               | `T(k, x₁, τ)`                                               |
//! | `[0, ∞)`           | `ST(k, α₀ = (2/√3) d/τ, α₁ = 1/√3, x₁, τ)`                  |
//! | `[-m, m]`          | two-sided `ST` with `α₀, α₂ = (2/√3)(d ± m)/τ`, `α₁ = 1/√3` |

use serde::{Deserialize, Serialize};

use crate::distributions::{density_summary, ParamSet, SkewTOneSidedParams, SkewTTwoSidedParams, StudentTParams};
use crate::error::{Error, Result};
use crate::model::{RestrictionSet, TwoSampleSummary};
use crate::special::{t_cdf, t_cdf_diff, t_ln_pdf};

/// `1/√3`, the skewness slope shared by both restricted estimators.
pub const ALPHA1: f64 = 0.577_350_269_189_625_8;
const TWO_OVER_SQRT3: f64 = 2.0 * ALPHA1;

/// Flat-prior predictive `T(k, x₁, √(2s²/k))`.
pub fn baseline_predictive(summary: &TwoSampleSummary) -> Result<StudentTParams> {
    summary.validate()?;
    StudentTParams::new(summary.k, summary.x1.clone(), summary.predictive_scale())
}

/// Predictive under `θ₁ ≥ θ₂`.
pub fn positive_restricted_predictive(summary: &TwoSampleSummary) -> Result<SkewTOneSidedParams> {
    summary.validate()?;
    let (x1, x2) = summary.require_univariate()?;
    let tau = summary.predictive_scale();
    SkewTOneSidedParams::univariate(summary.k, TWO_OVER_SQRT3 * (x1 - x2) / tau, ALPHA1, x1, tau)
}

/// Predictive under `|θ₁ - θ₂| ≤ m`.
pub fn interval_restricted_predictive(summary: &TwoSampleSummary, m: f64) -> Result<SkewTTwoSidedParams> {
    summary.validate()?;
    RestrictionSet::interval(m)?;
    let (x1, x2) = summary.require_univariate()?;
    let tau = summary.predictive_scale();
    let d = x1 - x2;
    SkewTTwoSidedParams::univariate(summary.k, TWO_OVER_SQRT3 * (d + m) / tau, ALPHA1, TWO_OVER_SQRT3 * (d - m) / tau, x1, tau)
}

/// The Bayes predictive for the given restriction.
pub fn predictive_for(summary: &TwoSampleSummary, restriction: &RestrictionSet) -> Result<ParamSet> {
    Ok(match *restriction {
        RestrictionSet::Unrestricted => baseline_predictive(summary)?.into(),
        RestrictionSet::PositiveOrthant => positive_restricted_predictive(summary)?.into(),
        RestrictionSet::SymmetricInterval { m } => interval_restricted_predictive(summary, m)?.into(),
    })
}

/// `T(k, x₁, τ)` density and `√((k+1)/(2s² + (y-x₁)²))` at `y`.
fn explicit_parts(y1: f64, summary: &TwoSampleSummary) -> Result<(f64, f64, f64, f64)> {
    summary.validate()?;
    let (x1, x2) = summary.require_univariate()?;
    let k = summary.k;
    let tau = summary.predictive_scale();
    let base = t_ln_pdf(k, (y1 - x1) / tau).exp() / tau;
    let g = ((k + 1.0) / (2.0 * summary.s2 + (y1 - x1).powi(2))).sqrt();
    Ok((base, g, x1 - x2, tau))
}

/// Positive-restriction predictive written directly in the data: the
/// Student t factor times
/// `F(k+1, ((2/√3)d + (y-x₁)/√3) g) / F(k, d/τ)`.
pub fn positive_restricted_pdf_explicit(y1: f64, summary: &TwoSampleSummary) -> Result<f64> {
    let (base, g, d, tau) = explicit_parts(y1, summary)?;
    let x1 = summary.x1[0];
    let num = t_cdf(summary.k + 1.0, (TWO_OVER_SQRT3 * d + ALPHA1 * (y1 - x1)) * g);
    let den = t_cdf(summary.k, d / tau);
    if !(den > 0.0) {
        return Err(Error::NumericIntegrity("restriction mass underflows to zero".into()));
    }
    Ok(base * num / den)
}

/// Interval-restriction predictive written directly in the data, with
/// `L₁,₂ = ((2/√3)(d ± m) + (y-x₁)/√3) g` and denominator
/// `F(k, (d+m)/τ) - F(k, (d-m)/τ)`.
pub fn interval_restricted_pdf_explicit(y1: f64, summary: &TwoSampleSummary, m: f64) -> Result<f64> {
    RestrictionSet::interval(m)?;
    let (base, g, d, tau) = explicit_parts(y1, summary)?;
    let x1 = summary.x1[0];
    let shift = ALPHA1 * (y1 - x1);
    let l1 = (TWO_OVER_SQRT3 * (d + m) + shift) * g;
    let l2 = (TWO_OVER_SQRT3 * (d - m) + shift) * g;
    let num = t_cdf_diff(summary.k + 1.0, l1, l2);
    let den = t_cdf_diff(summary.k, (d + m) / tau, (d - m) / tau);
    if !(den > 0.0) {
        return Err(Error::NumericIntegrity("restriction mass underflows to zero".into()));
    }
    Ok(base * num / den)
}

/// Mean and 10/50/90 percentiles of a predictive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictiveReport {
    pub family: String,
    pub params: ParamSet,
    pub mean: f64,
    pub p10: f64,
    pub p50: f64,
    pub p90: f64,
}

impl PredictiveReport {
    pub fn percentiles(&self) -> [f64; 3] {
        [self.p10, self.p50, self.p90]
    }
}

pub fn summarize(params: &ParamSet) -> Result<PredictiveReport> {
    let density = params.density()?;
    let (mean, [p10, p50, p90]) = density_summary(density.as_ref())?;
    if !(p10 < p50 && p50 < p90) {
        return Err(Error::NumericIntegrity(format!("percentiles not increasing: {p10}, {p50}, {p90}")));
    }
    Ok(PredictiveReport { family: params.family().name().to_string(), params: params.clone(), mean, p10, p50, p90 })
}
