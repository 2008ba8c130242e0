//! Kullback–Leibler loss and its frequentist risk under the two-group model.
//!
//! For `Y₁ ~ N(θ₁, σ²)` the loss of an estimate `q̂` is
//! `∫ φ_σ(y - θ₁) ln(φ_σ(y - θ₁) / q̂(y)) dy`. Risk averages it over data
//! `X₁ ~ N(θ₁, σ²)`, `X₂ ~ N(θ₂, σ²)`, `S² ~ σ² χ²_k` drawn by Monte Carlo.
//! Curves index `θ₂ = θ₁ - Δσ` and use common random numbers: replicate `i`
//! draws `(z₁, z₂, χ²)` once from its own substream and every estimator and
//! every `Δ` reuse them.

use std::io::Write;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::Density;
use crate::error::{invalid, Error, Result};
use crate::io::Precision;
use crate::model::{RestrictionSet, TwoSampleSummary};
use crate::predictive::predictive_for;
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::rng::{streams, substream};
use crate::special::normal_ln_pdf;

const KL_HALF_WIDTH: f64 = 10.0;
const KL_TOL: f64 = 1e-9;
/// Panel edges in standardized units; the truth's mass sits inside ±4.
const KL_BREAKS: [f64; 3] = [-4.0, 0.0, 4.0];

/// `KL(N(true_mean, true_var) ‖ estimate)` by adaptive quadrature over
/// `true_mean ± 10σ`. Returns `+∞` when the estimate vanishes where the
/// truth has mass.
pub fn kl_divergence(true_mean: f64, true_var: f64, estimate: &dyn Density) -> Result<f64> {
    if !(true_var > 0.0 && true_var.is_finite()) || !true_mean.is_finite() {
        return Err(invalid(format!("truth N({true_mean}, {true_var}) is not a valid normal")));
    }
    let sigma = true_var.sqrt();
    let ln_sigma = sigma.ln();
    let mut unbounded = false;
    let f = |u: f64| {
        let y = true_mean + sigma * u;
        let ln_truth = normal_ln_pdf(u) - ln_sigma;
        let ln_q = estimate.ln_pdf(y);
        if ln_q == f64::NEG_INFINITY || ln_q.is_nan() {
            unbounded = true;
            return 0.0;
        }
        ln_truth.exp() * (ln_truth - ln_q) * sigma
    };
    let r = integrate_with_breaks(f, -KL_HALF_WIDTH, KL_HALF_WIDTH, &KL_BREAKS, QuadOptions::with_abs_tol(KL_TOL))?;
    if unbounded {
        return Ok(f64::INFINITY);
    }
    Ok(r.value.max(0.0))
}

/// Which predictive a risk is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Flat-prior Student t.
    Baseline,
    /// Bayes predictive under the scenario's restriction.
    Restricted,
}

/// One parameter point of the risk study: `θ₂ = θ₁ - Δσ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskScenario {
    pub p: usize,
    pub k: f64,
    pub delta: f64,
    pub sigma: f64,
    pub theta1: f64,
    pub restriction: RestrictionSet,
    pub n_mc: usize,
    pub seed: u64,
}

impl RiskScenario {
    pub fn validate(&self) -> Result<()> {
        if self.p != 1 {
            return Err(Error::UnsupportedDimension(self.p));
        }
        if !(self.k >= 2.0 && self.k.is_finite()) {
            return Err(Error::InvalidScenario(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidScenario(format!("σ must be positive, got {}", self.sigma)));
        }
        if !self.theta1.is_finite() || !self.delta.is_finite() {
            return Err(Error::InvalidScenario("θ₁ and Δ must be finite".into()));
        }
        if self.n_mc == 0 {
            return Err(Error::InvalidScenario("n_mc must be at least 1".into()));
        }
        self.restriction.validate()?;
        if !self.restriction.contains_scalar(self.delta * self.sigma) {
            return Err(Error::InvalidScenario(format!(
                "θ₁ - θ₂ = {} violates the restriction {:?}",
                self.delta * self.sigma,
                self.restriction
            )));
        }
        Ok(())
    }

    fn theta2(&self) -> f64 {
        self.theta1 - self.delta * self.sigma
    }
}

/// Monte Carlo risk with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub risk: f64,
    pub se: f64,
}

/// Standardized data of one replicate.
#[derive(Debug, Clone, Copy)]
struct Draw {
    z1: f64,
    z2: f64,
    chi2: f64,
}

fn draws(n: usize, k: f64, seed: u64) -> Result<Vec<Draw>> {
    let chi = ChiSquared::new(k).map_err(|e| invalid(e.to_string()))?;
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, streams::RISK_BASE + i as u64);
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            Draw { z1, z2, chi2: chi.sample(&mut rng) }
        })
        .collect())
}

fn loss(draw: &Draw, k: f64, sigma: f64, theta1: f64, theta2: f64, restriction: &RestrictionSet) -> Result<f64> {
    let summary = TwoSampleSummary::scalar(theta1 + sigma * draw.z1, theta2 + sigma * draw.z2, sigma * sigma * draw.chi2, k)?;
    let density = predictive_for(&summary, restriction)?.density()?;
    kl_divergence(theta1, sigma * sigma, density.as_ref())
}

fn restriction_of(estimator: Estimator, scenario: &RiskScenario) -> RestrictionSet {
    match estimator {
        Estimator::Baseline => RestrictionSet::Unrestricted,
        Estimator::Restricted => scenario.restriction,
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo KL risk of one estimator at one scenario.
pub fn kl_risk(scenario: &RiskScenario, estimator: Estimator) -> Result<RiskEstimate> {
    scenario.validate()?;
    let restriction = restriction_of(estimator, scenario);
    let losses: Vec<f64> = draws(scenario.n_mc, scenario.k, scenario.seed)?
        .par_iter()
        .map(|d| loss(d, scenario.k, scenario.sigma, scenario.theta1, scenario.theta2(), &restriction))
        .collect::<Result<_>>()?;
    let (risk, se) = mean_and_se(&losses);
    Ok(RiskEstimate { risk, se })
}

/// Ratio of the risks of two estimators at one scenario, from the same draws.
pub fn kl_risk_ratio(scenario: &RiskScenario, numerator: Estimator, denominator: Estimator) -> Result<RiskEstimate> {
    scenario.validate()?;
    let (rn, rd) = (restriction_of(numerator, scenario), restriction_of(denominator, scenario));
    let pairs: Vec<(f64, f64)> = draws(scenario.n_mc, scenario.k, scenario.seed)?
        .par_iter()
        .map(|d| {
            let a = loss(d, scenario.k, scenario.sigma, scenario.theta1, scenario.theta2(), &rn)?;
            let b = if rn == rd { a } else { loss(d, scenario.k, scenario.sigma, scenario.theta1, scenario.theta2(), &rd)? };
            Ok((a, b))
        })
        .collect::<Result<_>>()?;
    let (num, den): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let (ratio, se) = ratio_with_se(&num, &den);
    Ok(RiskEstimate { risk: ratio, se })
}

/// `mean(num)/mean(den)` with its delta-method standard error, accounting
/// for the correlation the shared draws induce.
fn ratio_with_se(num: &[f64], den: &[f64]) -> (f64, f64) {
    let n = num.len() as f64;
    let (mn, md) = (num.iter().sum::<f64>() / n, den.iter().sum::<f64>() / n);
    let ratio = mn / md;
    if num.len() < 2 {
        return (ratio, f64::INFINITY);
    }
    let resid = num.iter().zip(den).map(|(a, b)| (a - ratio * b).powi(2)).sum::<f64>() / (n - 1.0);
    (ratio, (resid / n).sqrt() / md)
}

/// One `Δ` of a risk-ratio curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub delta: f64,
    pub risk_baseline: f64,
    pub risk_restricted: f64,
    /// `risk_restricted / risk_baseline`.
    pub ratio: f64,
    /// Standard error of `ratio`.
    pub mc_standard_error: f64,
    pub se_baseline: f64,
    pub se_restricted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskCurve {
    pub rows: Vec<RiskRow>,
}

impl RiskCurve {
    pub const CSV_HEADER: [&'static str; 5] = ["delta", "risk_baseline", "risk_restricted", "ratio", "se"];

    pub fn min_ratio(&self) -> Option<&RiskRow> {
        self.rows.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio))
    }

    pub fn write_csv<W: Write>(&self, writer: W, precision: Precision) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([r.delta, r.risk_baseline, r.risk_restricted, r.ratio, r.mc_standard_error].map(|v| precision.format(v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Risk ratio of the restricted over the baseline predictive along a `Δ`
/// grid, at `σ = 1`, `θ₁ = 0`.
///
/// The baseline predictive depends on `(x₁, s²)` only, whose law is free of
/// `Δ`, so its loss is computed once per replicate and shared by every row.
pub fn risk_ratio_curve(deltas: &[f64], k: f64, p: usize, restriction: &RestrictionSet, n_mc: usize, seed: u64) -> Result<RiskCurve> {
    if deltas.is_empty() {
        return Err(Error::InvalidScenario("empty Δ grid".into()));
    }
    for &delta in deltas {
        RiskScenario { p, k, delta, sigma: 1.0, theta1: 0.0, restriction: *restriction, n_mc, seed }.validate()?;
    }
    let per_replicate: Vec<Vec<f64>> = draws(n_mc, k, seed)?
        .par_iter()
        .map(|d| {
            let mut out = Vec::with_capacity(deltas.len() + 1);
            out.push(loss(d, k, 1.0, 0.0, 0.0, &RestrictionSet::Unrestricted)?);
            for &delta in deltas {
                out.push(loss(d, k, 1.0, 0.0, -delta, restriction)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let baseline: Vec<f64> = per_replicate.iter().map(|r| r[0]).collect();
    let (risk_baseline, se_baseline) = mean_and_se(&baseline);
    let rows = deltas
        .iter()
        .enumerate()
        .map(|(j, &delta)| {
            let restricted: Vec<f64> = per_replicate.iter().map(|r| r[j + 1]).collect();
            let (risk_restricted, se_restricted) = mean_and_se(&restricted);
            let (ratio, se) = ratio_with_se(&restricted, &baseline);
            RiskRow { delta, risk_baseline, risk_restricted, ratio, mc_standard_error: se, se_baseline, se_restricted }
        })
        .collect();
    Ok(RiskCurve { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Normal, StudentT};

    #[test]
    fn kl_closed_forms() {
        let truth = Normal::new(0.0, 1.0).unwrap();
        assert!(kl_divergence(0.0, 1.0, &truth).unwrap() < 1e-12);
        let shifted = Normal::new(1.0, 1.0).unwrap();
        assert!((kl_divergence(0.0, 1.0, &shifted).unwrap() - 0.5).abs() < 1e-9);
        let wide = Normal::new(0.0, 2.0).unwrap();
        let expected = 2.0_f64.ln() + 1.0 / 8.0 - 0.5;
        assert!((kl_divergence(0.0, 1.0, &wide).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn kl_against_student_t_by_monte_carlo() {
        use crate::rng::substream;
        let t = StudentT::new(3.0, 0.0, 1.0).unwrap();
        let exact = kl_divergence(0.0, 1.0, &t).unwrap();
        let mut rng = substream(5, 0);
        let n = 1_000_000;
        let v: Vec<f64> = (0..n)
            .map(|_| {
                let y: f64 = rng.sample(StandardNormal);
                normal_ln_pdf(y) - t.ln_pdf(y)
            })
            .collect();
        let (mean, se) = mean_and_se(&v);
        assert!((exact - mean).abs() < 3.0 * se, "{exact} vs {mean} ± {se}");
    }

    #[test]
    fn kl_is_infinite_off_support() {
        let d = crate::distributions::ScaleInvChiSq::new(3.0, 1.0).unwrap();
        assert_eq!(kl_divergence(0.0, 1.0, &d).unwrap(), f64::INFINITY);
    }

    fn scenario(delta: f64) -> RiskScenario {
        RiskScenario { p: 1, k: 3.0, delta, sigma: 1.0, theta1: 0.0, restriction: RestrictionSet::PositiveOrthant, n_mc: 2000, seed: 17 }
    }

    #[test]
    fn same_estimator_ratio_is_one() {
        let r = kl_risk_ratio(&scenario(1.0), Estimator::Restricted, Estimator::Restricted).unwrap();
        assert_eq!(r.risk, 1.0);
    }

    #[test]
    fn baseline_risk_is_free_of_delta() {
        let a = kl_risk(&scenario(0.0), Estimator::Baseline).unwrap();
        let b = kl_risk(&scenario(3.0), Estimator::Baseline).unwrap();
        // Same draws, and the baseline never sees x₂.
        assert_eq!(a, b);
    }

    #[test]
    fn location_and_scale_invariance() {
        let base = scenario(1.0);
        let moved = RiskScenario { theta1: 7.0, sigma: 3.0, ..base };
        let a = kl_risk(&base, Estimator::Restricted).unwrap();
        let b = kl_risk(&moved, Estimator::Restricted).unwrap();
        // Shared draws make the two estimates equal up to rounding, well inside 3 SE.
        assert!((a.risk - b.risk).abs() < 1e-9, "{a:?} vs {b:?}");
    }

    #[test]
    fn rejects_infeasible_scenarios() {
        assert!(matches!(kl_risk(&scenario(-0.5), Estimator::Restricted), Err(Error::InvalidScenario(_))));
        let interval = RiskScenario { restriction: RestrictionSet::SymmetricInterval { m: 2.0 }, delta: 2.5, ..scenario(0.0) };
        assert!(kl_risk(&interval, Estimator::Baseline).is_err());
        assert!(risk_ratio_curve(&[], 3.0, 1, &RestrictionSet::PositiveOrthant, 10, 1).is_err());
    }

    #[test]
    fn single_replicate_curve_runs() {
        let c = risk_ratio_curve(&[0.0, 1.0], 3.0, 1, &RestrictionSet::PositiveOrthant, 1, 1).unwrap();
        assert_eq!(c.rows.len(), 2);
        assert!(c.rows[0].mc_standard_error.is_infinite());
    }

    #[test]
    fn csv_header() {
        let c = risk_ratio_curve(&[0.0], 3.0, 1, &RestrictionSet::PositiveOrthant, 20, 1).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf, Precision::REPORT).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("delta,risk_baseline,risk_restricted,ratio,se\n"));
    }
}
