//! Brute-force checks of the closed forms.
//!
//! [`rejection_sample_predictive`] draws exactly from the restricted
//! posterior predictive by sampling the flat-prior posterior and discarding
//! draws outside `A`. [`eta_mixture_pdf`] evaluates the same predictive by
//! quadrature over the posterior of `η`, sharing no code with the closed forms.

use std::io::Write;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::Density;
use crate::error::{invalid, Error, Result};
use crate::model::{RestrictionSet, TwoSampleSummary};
use crate::posterior::{eta_posterior_pdf, ln_eta_shape};
use crate::quadrature::{integrate_real_line, QuadOptions};
use crate::rng::{streams, substream, StreamRng};
use crate::special::{normal_cdf_diff, normal_cdf_unchecked, normal_pdf};

/// Accepted draws produced per substream.
const CHUNK: usize = 1 << 14;
const PROBE_PROPOSALS: usize = 1 << 21;
const MIN_ACCEPTANCE: f64 = 1e-6;
/// Stream for the feasibility probe; chunk streams start at `ORACLE_BASE`.
const PROBE_STREAM: u64 = streams::ORACLE_BASE - 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub n_samples: usize,
    pub acceptance_rate: f64,
    pub ks_statistic: f64,
    /// `ks_statistic` within the 99% DKW band for `n_samples`.
    pub passed: bool,
}

/// Exact draws from the restricted posterior predictive.
#[derive(Debug, Clone)]
pub struct OracleSamples {
    p: usize,
    /// Row-major `n × p`.
    values: Vec<f64>,
    proposals: u64,
}

impl OracleSamples {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.p
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.p)
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.len() as f64 / self.proposals as f64
    }

    /// Kolmogorov–Smirnov comparison against a univariate closed form.
    pub fn compare(&self, density: &dyn Density) -> Result<OracleReport> {
        if self.p != 1 {
            return Err(Error::UnsupportedDimension(self.p));
        }
        let table = crate::distributions::TabulatedCdf::build(density)?;
        let ks = table.ks_distance(&self.values)?;
        let n = self.len();
        Ok(OracleReport { n_samples: n, acceptance_rate: self.acceptance_rate(), ks_statistic: ks, passed: ks < dkw_bound(n, 0.01) })
    }

    /// One value per line under the header `y`; `p > 1` writes one column per coordinate.
    pub fn write_csv<W: Write>(&self, writer: W, format: impl Fn(f64) -> String) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        if self.p == 1 {
            w.write_record(["y"])?;
        } else {
            w.write_record((1..=self.p).map(|i| format!("y{i}")))?;
        }
        for row in self.rows() {
            w.write_record(row.iter().map(|&v| format(v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Proposal<'a> {
    summary: &'a TwoSampleSummary,
    restriction: &'a RestrictionSet,
    chi2: ChiSquared<f64>,
}

impl Proposal<'_> {
    /// One proposal; on acceptance writes `y` into `out`.
    fn draw(&self, rng: &mut StreamRng, diff: &mut [f64], out: &mut [f64]) -> bool {
        let sigma = (self.summary.s2 / self.chi2.sample(rng)).sqrt();
        for (i, d) in diff.iter_mut().enumerate() {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let theta1 = self.summary.x1[i] + sigma * z1;
            out[i] = theta1;
            *d = theta1 - (self.summary.x2[i] + sigma * z2);
        }
        if !self.restriction.contains(diff) {
            return false;
        }
        for v in out.iter_mut() {
            let e: f64 = rng.sample(StandardNormal);
            *v += sigma * e;
        }
        true
    }
}

/// `n` exact posterior-predictive draws of `Y₁` under the restriction.
///
/// Each proposal draws `σ² = s²/χ²_k`, `θᵢ ~ N(xᵢ, σ²I)`, keeps it iff
/// `θ₁ - θ₂ ∈ A`, then emits `y ~ N(θ₁, σ²I)`. Work is split into chunks of
/// accepted draws, each on its own substream, concatenated in chunk order.
pub fn rejection_sample_predictive(
    summary: &TwoSampleSummary,
    restriction: &RestrictionSet,
    n: usize,
    seed: u64,
) -> Result<OracleSamples> {
    summary.validate()?;
    restriction.validate()?;
    if n == 0 {
        return Err(invalid("oracle needs n ≥ 1"));
    }
    let p = summary.p();
    let proposal = Proposal {
        summary,
        restriction,
        chi2: ChiSquared::new(summary.k).map_err(|e| invalid(e.to_string()))?,
    };
    let mut diff = vec![0.0; p];
    let mut y = vec![0.0; p];
    // The probe stops as soon as the batch can no longer fall below the rate.
    let needed = (MIN_ACCEPTANCE * PROBE_PROPOSALS as f64).ceil() as usize;
    let mut rng = substream(seed, PROBE_STREAM);
    let mut accepted = 0;
    for _ in 0..PROBE_PROPOSALS {
        if accepted >= needed {
            break;
        }
        accepted += usize::from(proposal.draw(&mut rng, &mut diff, &mut y));
    }
    if accepted < needed {
        let rate = accepted as f64 / PROBE_PROPOSALS as f64;
        return Err(Error::Infeasible(format!("acceptance rate {rate:e} over {PROBE_PROPOSALS} probe proposals")));
    }
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(Vec<f64>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let want = CHUNK.min(n - c * CHUNK);
            let mut rng = substream(seed, streams::ORACLE_BASE + c as u64);
            let mut diff = vec![0.0; p];
            let mut y = vec![0.0; p];
            let mut out = Vec::with_capacity(want * p);
            let mut proposals = 0u64;
            while out.len() < want * p {
                proposals += 1;
                if proposal.draw(&mut rng, &mut diff, &mut y) {
                    out.extend_from_slice(&y);
                }
            }
            (out, proposals)
        })
        .collect();
    let proposals = parts.iter().map(|(_, c)| c).sum();
    let values = parts.into_iter().flat_map(|(v, _)| v).collect();
    Ok(OracleSamples { p, values, proposals })
}

/// Predictive density at `y₁` as `∫ q(y₁ | η) π(η | data) dη`.
///
/// Given `η`, `θ₁` is skew-normal (location `x₁`, scale `1/√η`, slope 1)
/// and `Y₁ | θ₁ ~ N(θ₁, 1/η)`, so with `w = √η (y₁ - x₁)` the inner density
/// is `√η φ(w/√2)/√2 · Φ((α₀ + w/2)/√(3/2)) / Φ(α₀/√2)` (differences of `Φ`
/// for the interval). The outer integral runs over `ln η`.
pub fn eta_mixture_pdf(y1: f64, summary: &TwoSampleSummary, restriction: &RestrictionSet) -> Result<f64> {
    summary.validate()?;
    restriction.validate()?;
    let (x1, x2) = summary.require_univariate()?;
    let d = x1 - x2;
    let inner = |eta: f64| -> f64 {
        let r = eta.sqrt();
        let w = r * (y1 - x1);
        let conv = r * normal_pdf(w / std::f64::consts::SQRT_2) / std::f64::consts::SQRT_2;
        let c = (1.5_f64).sqrt();
        let weight = match *restriction {
            RestrictionSet::Unrestricted => 1.0,
            RestrictionSet::PositiveOrthant => {
                normal_cdf_unchecked((d * r + 0.5 * w) / c) / normal_cdf_unchecked(d * r / std::f64::consts::SQRT_2)
            }
            RestrictionSet::SymmetricInterval { m } => {
                let (a0, a2) = ((d + m) * r, (d - m) * r);
                normal_cdf_diff((a0 + 0.5 * w) / c, (a2 + 0.5 * w) / c)
                    / normal_cdf_diff(a0 / std::f64::consts::SQRT_2, a2 / std::f64::consts::SQRT_2)
            }
        };
        let v = conv * weight;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let f = |t: f64| {
        let eta = t.exp();
        match eta_posterior_pdf(eta, summary, restriction) {
            Ok(post) if post > 0.0 => inner(eta) * post * eta,
            _ => 0.0,
        }
    };
    let r = integrate_real_line(f, ln_eta_shape(summary), QuadOptions::with_abs_tol(1e-12))?;
    Ok(r.value)
}

/// `sup |F_n - F|` over the sample points, checking both one-sided gaps.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
    ks_distance_with(samples, |x| Ok(cdf(x)))
}

/// [`ks_distance`] for a fallible cdf.
pub fn ks_distance_with(samples: &[f64], cdf: impl Fn(f64) -> Result<f64> + Sync) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("KS distance needs at least one sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(invalid("KS distance over NaN samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.par_sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let gaps: Vec<f64> = sorted
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x)?;
            Ok((f - i as f64 / n).max((i + 1) as f64 / n - f))
        })
        .collect::<Result<_>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// Dvoretzky–Kiefer–Wolfowitz band: `P(KS > ε) ≤ alpha` for `ε = √(ln(2/alpha)/(2n))`.
pub fn dkw_bound(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}
