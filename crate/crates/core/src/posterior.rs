//! Posterior of `(θ₁, θ₂, σ²)` under `π(θ, σ²) ∝ σ^{-2} 1{θ₁ - θ₂ ∈ A}`.
//!
//! Univariate throughout except [`log_joint_density`]. With `d = x₁ - x₂`
//! and precision `η = 1/σ²`:
//!
//! * `η | data` is `Gamma(k/2, rate s²/2)` tilted by `P(θ₁ - θ₂ ∈ A | η)`,
//!   e.g. `Φ(d√(η/2))` for the positive half-line;
//! * `θ₁ | η, data` is skew-normal with location `x₁`, scale `1/√η`,
//!   `α₁ = 1` and `α₀ = d√η` (interval: `α₀, α₂ = (d ± m)√η`).

use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::distributions::SkewNormalParams;
use crate::error::{domain, invalid, Result};
use crate::model::{ModelPoint, RestrictionSet, TwoSampleSummary};
use crate::quadrature::TailShape;
use crate::rng::{streams, substream};
use crate::special::{ln_gamma_unchecked, normal_cdf_diff, normal_cdf_unchecked, t_cdf, t_cdf_diff, t_ln_pdf};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Log density of the data `(x₁, x₂, s²)` at the parameter point.
pub fn log_joint_density(point: &ModelPoint, summary: &TwoSampleSummary) -> Result<f64> {
    summary.validate()?;
    let p = summary.p();
    if point.theta1.len() != p || point.theta2.len() != p {
        return Err(crate::error::Error::DimensionMismatch { expected: p, got: point.theta1.len() });
    }
    let sq = |x: &[f64], t: &[f64]| x.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    let quad = sq(&summary.x1, &point.theta1) + sq(&summary.x2, &point.theta2);
    let (s2, k, v) = (summary.s2, summary.k, point.sigma2);
    let half_k = 0.5 * k;
    let normals = -(p as f64) * (LN_2PI + v.ln()) - quad / (2.0 * v);
    let chi2 = (half_k - 1.0) * s2.ln() - s2 / (2.0 * v) - half_k * (2.0 * v).ln() - ln_gamma_unchecked(half_k);
    Ok(normals + chi2)
}

/// Joint posterior of `(θ₁, θ₂)` up to a constant:
/// `1_A · (1 + b/(s² + a))^{-(1+k/2)} (1 + a/s²)^{-(1+k/2)}` with
/// `a = (x₁ - θ₁)²`, `b = (x₂ - θ₂)²`.
pub fn joint_posterior_theta_unnorm(theta1: f64, theta2: f64, summary: &TwoSampleSummary, a: &RestrictionSet) -> Result<f64> {
    let (x1, x2) = summary.require_univariate()?;
    if !a.contains_scalar(theta1 - theta2) {
        return Ok(0.0);
    }
    let s2 = summary.s2;
    let e = -(1.0 + 0.5 * summary.k);
    let a1 = (x1 - theta1).powi(2);
    let b = (x2 - theta2).powi(2);
    Ok(((b / (s2 + a1)).ln_1p() * e + (a1 / s2).ln_1p() * e).exp())
}

/// Marginal posterior of `θ₁` up to a constant: the `T(k, x₁, s/√k)` density
/// times `P(V ∈ A)`, `V ~ T(k+1, θ₁ - x₂, √((s² + (x₁-θ₁)²)/(k+1)))`.
pub fn marginal_posterior_theta1_unnorm(theta1: f64, summary: &TwoSampleSummary, a: &RestrictionSet) -> Result<f64> {
    summary.validate()?;
    a.validate()?;
    let (x1, x2) = summary.require_univariate()?;
    let k = summary.k;
    let s = summary.s2.sqrt();
    let base_scale = s / k.sqrt();
    let base = t_ln_pdf(k, (theta1 - x1) / base_scale).exp() / base_scale;
    let center = theta1 - x2;
    let v_scale = ((summary.s2 + (x1 - theta1).powi(2)) / (k + 1.0)).sqrt();
    let weight = match *a {
        RestrictionSet::Unrestricted => 1.0,
        RestrictionSet::PositiveOrthant => t_cdf(k + 1.0, center / v_scale),
        RestrictionSet::SymmetricInterval { m } => t_cdf_diff(k + 1.0, (m - center) / v_scale, (-m - center) / v_scale),
    };
    Ok(base * weight)
}

/// `P(θ₁ - θ₂ ∈ A | η, data)`, where `θ₁ - θ₂ | η ~ N(d, 2/η)`.
fn restriction_weight(eta: f64, d: f64, a: &RestrictionSet) -> f64 {
    let r = (0.5 * eta).sqrt();
    match *a {
        RestrictionSet::Unrestricted => 1.0,
        RestrictionSet::PositiveOrthant => normal_cdf_unchecked(d * r),
        RestrictionSet::SymmetricInterval { m } => normal_cdf_diff((d + m) * r, (d - m) * r),
    }
}

/// `E[P(θ₁ - θ₂ ∈ A | η)]` under the untilted gamma, in closed form.
fn restriction_mass(summary: &TwoSampleSummary, d: f64, a: &RestrictionSet) -> f64 {
    let tau = summary.predictive_scale();
    match *a {
        RestrictionSet::Unrestricted => 1.0,
        RestrictionSet::PositiveOrthant => t_cdf(summary.k, d / tau),
        RestrictionSet::SymmetricInterval { m } => t_cdf_diff(summary.k, (d + m) / tau, (d - m) / tau),
    }
}

/// Log of [`eta_posterior_pdf`].
pub fn eta_posterior_ln_pdf(eta: f64, summary: &TwoSampleSummary, a: &RestrictionSet) -> Result<f64> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(domain(format!("η must be positive and finite, got {eta}")));
    }
    summary.validate()?;
    a.validate()?;
    let (x1, x2) = summary.require_univariate()?;
    let d = x1 - x2;
    let shape = 0.5 * summary.k;
    let rate = 0.5 * summary.s2;
    let ln_gamma_pdf = shape * rate.ln() - ln_gamma_unchecked(shape) + (shape - 1.0) * eta.ln() - rate * eta;
    Ok(ln_gamma_pdf + restriction_weight(eta, d, a).ln() - restriction_mass(summary, d, a).ln())
}

/// Normalized posterior density of `η = 1/σ²`.
pub fn eta_posterior_pdf(eta: f64, summary: &TwoSampleSummary, a: &RestrictionSet) -> Result<f64> {
    Ok(eta_posterior_ln_pdf(eta, summary, a)?.exp())
}

/// Where the posterior of `ln η` sits, for quadratures over `ln η`.
pub(crate) fn ln_eta_shape(summary: &TwoSampleSummary) -> TailShape {
    TailShape { center: (summary.k / summary.s2).ln(), scale: (2.0 / summary.k).sqrt().max(0.25), tail_index: f64::INFINITY }
}

/// `θ₁ | η, data` as skew-normal parameters (location `x₁`, scale `1/√η`).
pub fn conditional_theta1_given_eta(eta: f64, summary: &TwoSampleSummary, a: &RestrictionSet) -> Result<SkewNormalParams> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(domain(format!("η must be positive and finite, got {eta}")));
    }
    summary.validate()?;
    a.validate()?;
    let (x1, x2) = summary.require_univariate()?;
    let d = x1 - x2;
    let r = eta.sqrt();
    let (alpha0, alpha1, alpha2) = match *a {
        RestrictionSet::Unrestricted => (0.0, 0.0, None),
        RestrictionSet::PositiveOrthant => (d * r, 1.0, None),
        RestrictionSet::SymmetricInterval { m } => ((d + m) * r, 1.0, Some((d - m) * r)),
    };
    let params = SkewNormalParams { p: 1, alpha0, alpha1: vec![alpha1], alpha2, xi: vec![x1], tau: 1.0 / r };
    params.validate()?;
    Ok(params)
}

/// Both sides of `E[Φ(c√η)] = F(2a, c√(a/b))` for `η ~ Gamma(a, rate b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub analytic: f64,
    pub mc_estimate: f64,
    pub mc_se: f64,
}

impl IdentityCheck {
    /// `|analytic - mc_estimate|` in standard errors.
    pub fn z_score(&self) -> f64 {
        (self.analytic - self.mc_estimate).abs() / self.mc_se
    }
}

pub fn check_azzalini_identity(a: f64, b: f64, c: f64, n_mc: usize, seed: u64) -> Result<IdentityCheck> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(invalid(format!("identity check needs a, b, c > 0, got ({a}, {b}, {c})")));
    }
    if n_mc < 2 {
        return Err(invalid("identity check needs at least two draws"));
    }
    let gamma = Gamma::new(a, 1.0 / b).map_err(|e| invalid(e.to_string()))?;
    let mut rng = substream(seed, streams::IDENTITY_CHECK);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n_mc {
        let eta: f64 = gamma.sample(&mut rng);
        let v = normal_cdf_unchecked(c * eta.sqrt());
        sum += v;
        sum_sq += v * v;
    }
    let n = n_mc as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(IdentityCheck { analytic: t_cdf(2.0 * a, c * (a / b).sqrt()), mc_estimate: mean, mc_se: (var / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Density, SkewNormal};
    use crate::quadrature::{integrate_real_line, QuadOptions};

    fn eta_mass(summary: &TwoSampleSummary, a: &RestrictionSet) -> f64 {
        let f = |t: f64| eta_posterior_pdf(t.exp(), summary, a).unwrap() * t.exp();
        integrate_real_line(f, ln_eta_shape(summary), QuadOptions::with_abs_tol(1e-12)).unwrap().value
    }

    #[test]
    fn log_joint_is_a_location_family() {
        let s = TwoSampleSummary::scalar(1.0, -0.5, 2.0, 3.0).unwrap();
        let shifted = TwoSampleSummary::scalar(4.0, -0.5, 2.0, 3.0).unwrap();
        let pt = ModelPoint::new(vec![0.2], vec![0.1], 1.5).unwrap();
        let pt_shifted = ModelPoint::new(vec![3.2], vec![0.1], 1.5).unwrap();
        let a = log_joint_density(&pt, &s).unwrap();
        let b = log_joint_density(&pt_shifted, &shifted).unwrap();
        assert!((a - b).abs() < 1e-13);
        let at_data = log_joint_density(&ModelPoint::new(vec![1.0], vec![-0.5], 1.5).unwrap(), &s).unwrap();
        assert!(at_data > a);
    }

    #[test]
    fn log_joint_matches_direct_evaluation() {
        use statrs::distribution::{ChiSquared, Continuous, Normal};
        let s = TwoSampleSummary::scalar(0.3, -1.1, 2.5, 5.0).unwrap();
        let eval = |t1: f64, t2: f64, v: f64| {
            let sd = v.sqrt();
            Normal::new(t1, sd).unwrap().pdf(0.3) * Normal::new(t2, sd).unwrap().pdf(-1.1) * ChiSquared::new(5.0).unwrap().pdf(2.5 / v) / v
        };
        let (p1, p2) = ((0.0, 0.5, 0.7), (1.2, -2.0, 3.1));
        let lhs = log_joint_density(&ModelPoint::new(vec![p1.0], vec![p1.1], p1.2).unwrap(), &s).unwrap()
            - log_joint_density(&ModelPoint::new(vec![p2.0], vec![p2.1], p2.2).unwrap(), &s).unwrap();
        let rhs = (eval(p1.0, p1.1, p1.2) / eval(p2.0, p2.1, p2.2)).ln();
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn joint_posterior_is_sigma_integrated_likelihood() {
        // ∫ exp(log_joint) σ^{-2} dσ² over σ², on ln σ², against the product form.
        let s = TwoSampleSummary::scalar(0.4, -0.3, 1.7, 3.0).unwrap();
        let a = RestrictionSet::Unrestricted;
        let mut ratios = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let (t1, t2) = (-1.0 + 0.5 * i as f64, -1.2 + 0.6 * j as f64);
                let f = |u: f64| {
                    let pt = ModelPoint::new(vec![t1], vec![t2], u.exp()).unwrap();
                    log_joint_density(&pt, &s).unwrap().exp()
                };
                let shape = TailShape { center: 0.0, scale: 1.0, tail_index: f64::INFINITY };
                let integrated = integrate_real_line(f, shape, QuadOptions::with_abs_tol(1e-14)).unwrap().value;
                ratios.push(integrated / joint_posterior_theta_unnorm(t1, t2, &s, &a).unwrap());
            }
        }
        let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(l, h), &r| (l.min(r), h.max(r)));
        assert!((hi - lo) / lo < 1e-6, "spread {}", (hi - lo) / lo);
    }

    #[test]
    fn marginal_weight_and_reduction() {
        let s = TwoSampleSummary::scalar(1.0, 1.0, 2.0, 4.0).unwrap();
        let pos = marginal_posterior_theta1_unnorm(1.0, &s, &RestrictionSet::PositiveOrthant).unwrap();
        let free = marginal_posterior_theta1_unnorm(1.0, &s, &RestrictionSet::Unrestricted).unwrap();
        assert!((pos / free - 0.5).abs() < 1e-15);
        let scale = (2.0_f64 / 4.0).sqrt();
        assert!((free - t_ln_pdf(4.0, 0.0).exp() / scale).abs() < 1e-15);
    }

    #[test]
    fn marginal_normalizer_matches_nested_quadrature() {
        // Normalizer of the closed form against a 2-D integral of the joint form.
        let s = TwoSampleSummary::scalar(0.0, 0.0, 1.0, 3.0).unwrap();
        let a = RestrictionSet::PositiveOrthant;
        let shape = TailShape { center: 0.0, scale: 1.0, tail_index: 3.0 };
        let opts = QuadOptions::with_abs_tol(1e-12);
        let marginal = integrate_real_line(|t| marginal_posterior_theta1_unnorm(t, &s, &a).unwrap(), shape, opts).unwrap().value;
        let nested = integrate_real_line(
            |t1| {
                // θ₂ ≤ θ₁ on the positive half-line.
                crate::quadrature::integrate_to(|t2| joint_posterior_theta_unnorm(t1, t2, &s, &a).unwrap(), t1, shape, opts)
                    .unwrap()
                    .value
            },
            shape,
            opts,
        )
        .unwrap()
        .value;
        // The closed form carries the t normalizing constants; the joint form does not.
        let free = integrate_real_line(
            |t1| integrate_real_line(|t2| joint_posterior_theta_unnorm(t1, t2, &s, &RestrictionSet::Unrestricted).unwrap(), shape, opts).unwrap().value,
            shape,
            opts,
        )
        .unwrap()
        .value;
        assert!((marginal - 0.5).abs() < 1e-9, "{marginal}");
        assert!((nested / free - marginal).abs() < 1e-8, "{} vs {marginal}", nested / free);
    }

    #[test]
    fn eta_posterior_reduces_to_gamma_when_means_agree() {
        use statrs::distribution::{Continuous, Gamma as G};
        let s = TwoSampleSummary::scalar(2.0, 2.0, 1.3, 5.0).unwrap();
        let g = G::new(2.5, 0.65).unwrap();
        for &eta in &[0.1, 0.7, 2.0, 9.0] {
            let v = eta_posterior_pdf(eta, &s, &RestrictionSet::PositiveOrthant).unwrap();
            assert!((v - g.pdf(eta)).abs() < 1e-13 * g.pdf(eta).max(1.0));
            let wide = eta_posterior_pdf(eta, &s, &RestrictionSet::interval(1e6).unwrap()).unwrap();
            assert!((wide - g.pdf(eta)).abs() < 1e-12);
        }
        assert!(eta_posterior_pdf(0.0, &s, &RestrictionSet::PositiveOrthant).is_err());
    }

    #[test]
    fn eta_posterior_normalizes() {
        let s = TwoSampleSummary::scalar(1.0, 0.0, 2.0, 3.0).unwrap();
        assert!((eta_mass(&s, &RestrictionSet::PositiveOrthant) - 1.0).abs() < 1e-8);
        let configs = [(-1.5, 0.3, 3.0, 0.5), (0.4, 3.5, 20.0, 2.0), (2.0, 1.0, 5.0, 6.0), (-0.2, 0.8, 428.0, 1.0)];
        for (d, s2, k, m) in configs {
            let s = TwoSampleSummary::scalar(d, 0.0, s2, k).unwrap();
            for a in [RestrictionSet::PositiveOrthant, RestrictionSet::interval(m).unwrap()] {
                let mass = eta_mass(&s, &a);
                assert!((mass - 1.0).abs() < 1e-6, "{d} {s2} {k} {a:?}: {mass}");
            }
        }
    }

    #[test]
    fn conditional_shapes() {
        let s = TwoSampleSummary::scalar(0.5, 0.5, 1.0, 3.0).unwrap();
        let c = conditional_theta1_given_eta(4.0, &s, &RestrictionSet::PositiveOrthant).unwrap();
        assert_eq!((c.alpha0, c.alpha1[0], c.xi[0], c.tau), (0.0, 1.0, 0.5, 0.5));
        let tight = conditional_theta1_given_eta(1e12, &s, &RestrictionSet::PositiveOrthant).unwrap();
        assert!(tight.tau < 1e-5);
    }

    /// Mixing the conditional over the η posterior reproduces the marginal.
    #[test]
    fn mixture_equals_marginal() {
        let opts = QuadOptions::with_abs_tol(1e-13);
        for (x1, x2, a) in [
            (0.8, 0.0, RestrictionSet::PositiveOrthant),
            (-0.6, 0.0, RestrictionSet::PositiveOrthant),
            (0.5, 0.0, RestrictionSet::SymmetricInterval { m: 2.0 }),
        ] {
            let s = TwoSampleSummary::scalar(x1, x2, 1.0, 3.0).unwrap();
            let shape = TailShape { center: x1, scale: 1.0, tail_index: 3.0 };
            let z = integrate_real_line(|t| marginal_posterior_theta1_unnorm(t, &s, &a).unwrap(), shape, opts).unwrap().value;
            let mut worst: f64 = 0.0;
            for i in -12..=12 {
                let theta = x1 + 0.25 * i as f64;
                let f = |t: f64| {
                    let eta = t.exp();
                    let cond = SkewNormal::from_params(&conditional_theta1_given_eta(eta, &s, &a).unwrap()).unwrap();
                    cond.pdf(theta) * eta_posterior_pdf(eta, &s, &a).unwrap() * eta
                };
                let mixed = integrate_real_line(f, ln_eta_shape(&s), opts).unwrap().value;
                let direct = marginal_posterior_theta1_unnorm(theta, &s, &a).unwrap() / z;
                worst = worst.max((mixed - direct).abs() / direct);
            }
            assert!(worst < 1e-6, "{a:?}: {worst}");
        }
    }

    #[test]
    fn identity_holds_in_monte_carlo() {
        let r = check_azzalini_identity(1.5, 1.0, 1.0, 100_000, 3).unwrap();
        assert!(r.z_score() < 3.0, "{r:?}");
        let small = check_azzalini_identity(1.5, 1.0, 1e-9, 1000, 3).unwrap();
        assert!((small.analytic - 0.5).abs() < 1e-9 && (small.mc_estimate - 0.5).abs() < 1e-9);
        let big = check_azzalini_identity(2.0, 1.0, 1e3, 1000, 3).unwrap();
        assert!(big.analytic > 1.0 - 1e-6 && big.mc_estimate > 1.0 - 1e-6);
        assert!(check_azzalini_identity(0.0, 1.0, 1.0, 10, 1).is_err());
    }
}
