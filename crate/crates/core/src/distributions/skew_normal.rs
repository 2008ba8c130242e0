use serde::{Deserialize, Serialize};

use super::Density;
use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::TailShape;
use crate::rng::{open_unit, streams, substream};
use crate::special::{normal_cdf_diff, normal_cdf_unchecked, normal_ln_pdf, normal_quantile_unchecked};

/// Extended skew-normal `SN_p(α₀, α₁, ξ, τ)`; with `alpha2` set, the
/// two-sided variant whose weight is `Φ(α₀ + α₁ᵀz) - Φ(α₂ + α₁ᵀz)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewNormalParams {
    pub p: usize,
    pub alpha0: f64,
    pub alpha1: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    pub xi: Vec<f64>,
    pub tau: f64,
}

impl SkewNormalParams {
    pub fn univariate(alpha0: f64, alpha1: f64, xi: f64, tau: f64) -> Result<Self> {
        let params = Self { p: 1, alpha0, alpha1: vec![alpha1], alpha2: None, xi: vec![xi], tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.xi.len() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, got: self.xi.len() });
        }
        if self.alpha1.len() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, got: self.alpha1.len() });
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid(format!("τ must be positive, got {}", self.tau)));
        }
        if let Some(alpha2) = self.alpha2 {
            if !(self.alpha0 > alpha2) {
                return Err(invalid(format!("two-sided weight needs α₀ > α₂, got {} ≤ {alpha2}", self.alpha0)));
            }
        }
        Ok(())
    }
}

/// Skew-normal density at `t` (univariate only).
pub fn skew_normal_pdf(params: &SkewNormalParams, t: &[f64]) -> Result<f64> {
    let d = SkewNormal::from_params(params)?;
    if t.len() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: t.len() });
    }
    Ok(d.pdf(t[0]))
}

#[derive(Debug, Clone)]
pub struct SkewNormal {
    alpha0: f64,
    alpha1: f64,
    alpha2: Option<f64>,
    xi: f64,
    tau: f64,
    ln_denominator: f64,
}

impl SkewNormal {
    pub fn from_params(params: &SkewNormalParams) -> Result<Self> {
        params.validate()?;
        if params.p != 1 {
            return Err(Error::UnsupportedDimension(params.p));
        }
        let (alpha0, alpha1) = (params.alpha0, params.alpha1[0]);
        let r = (1.0 + alpha1 * alpha1).sqrt();
        let denominator = match params.alpha2 {
            None => normal_cdf_unchecked(alpha0 / r),
            Some(alpha2) => normal_cdf_diff(alpha0 / r, alpha2 / r),
        };
        if !(denominator > 0.0) {
            return Err(Error::NumericIntegrity("skew-normal normalizer underflows to zero".into()));
        }
        Ok(Self {
            alpha0,
            alpha1,
            alpha2: params.alpha2,
            xi: params.xi[0],
            tau: params.tau,
            ln_denominator: denominator.ln(),
        })
    }

    fn weight(&self, z: f64) -> f64 {
        let hi = self.alpha0 + self.alpha1 * z;
        match self.alpha2 {
            None => normal_cdf_unchecked(hi),
            Some(alpha2) => normal_cdf_diff(hi, alpha2 + self.alpha1 * z),
        }
    }
}

impl Density for SkewNormal {
    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.xi) / self.tau;
        (normal_ln_pdf(z) - self.ln_denominator).exp() * self.weight(z) / self.tau
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.xi) / self.tau;
        normal_ln_pdf(z) - self.ln_denominator + self.weight(z).ln() - self.tau.ln()
    }

    fn shape(&self) -> TailShape {
        TailShape { center: self.xi, scale: self.tau, tail_index: f64::INFINITY }
    }
}

/// Normal `N(μ, σ²)`.
#[derive(Debug, Clone, Copy)]
pub struct Normal {
    mean: f64,
    sd: f64,
}

impl Normal {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite()) || !mean.is_finite() {
            return Err(invalid(format!("normal needs finite mean and sd > 0, got ({mean}, {sd})")));
        }
        Ok(Self { mean, sd })
    }

    pub fn standard_deviation(&self) -> f64 {
        self.sd
    }
}

impl Density for Normal {
    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        normal_ln_pdf((x - self.mean) / self.sd) - self.sd.ln()
    }

    fn shape(&self) -> TailShape {
        TailShape { center: self.mean, scale: self.sd, tail_index: f64::INFINITY }
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(domain("cdf at NaN"));
        }
        Ok(normal_cdf_unchecked((x - self.mean) / self.sd))
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("quantile requires p in (0, 1), got {p}")));
        }
        Ok(self.mean + self.sd * normal_quantile_unchecked(p))
    }

    fn mean(&self) -> Result<f64> {
        Ok(self.mean)
    }

    fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = substream(seed, streams::SAMPLE);
        Ok((0..n).map(|_| self.mean + self.sd * normal_quantile_unchecked(open_unit(&mut rng))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::check_normalization;
    use crate::special::normal_pdf;

    #[test]
    fn zero_shape_is_normal() {
        let d = SkewNormal::from_params(&SkewNormalParams::univariate(0.0, 0.0, 1.0, 2.0).unwrap()).unwrap();
        for i in -10..=10 {
            let x = 1.0 + i as f64 * 0.7;
            assert!((d.pdf(x) - normal_pdf((x - 1.0) / 2.0) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn azzalini_factor_two_form() {
        let lambda = 1.7;
        let d = SkewNormal::from_params(&SkewNormalParams::univariate(0.0, lambda, 0.0, 1.0).unwrap()).unwrap();
        for i in -10..=10 {
            let z = i as f64 * 0.4;
            let classic = 2.0 * normal_pdf(z) * normal_cdf_unchecked(lambda * z);
            assert!((d.pdf(z) - classic).abs() < 1e-15);
        }
    }

    #[test]
    fn extended_and_two_sided_normalize() {
        let d = SkewNormal::from_params(&SkewNormalParams::univariate(1.5, 2.0, 0.0, 1.0).unwrap()).unwrap();
        assert!((check_normalization(&d).unwrap() - 1.0).abs() < 1e-10);
        let mut two = SkewNormalParams::univariate(2.5, 1.0, 3.0, 0.5).unwrap();
        two.alpha2 = Some(-0.7);
        let d = SkewNormal::from_params(&two).unwrap();
        assert!((check_normalization(&d).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_multivariate_and_inverted_bounds() {
        let params = SkewNormalParams {
            p: 2,
            alpha0: 0.0,
            alpha1: vec![1.0, 1.0],
            alpha2: None,
            xi: vec![0.0, 0.0],
            tau: 1.0,
        };
        assert!(matches!(SkewNormal::from_params(&params), Err(Error::UnsupportedDimension(2))));
        let mut bad = SkewNormalParams::univariate(0.0, 1.0, 0.0, 1.0).unwrap();
        bad.alpha2 = Some(0.5);
        assert!(SkewNormal::from_params(&bad).is_err());
    }

    #[test]
    fn normal_closed_forms() {
        let n = Normal::new(2.0, 3.0).unwrap();
        assert!((n.cdf(2.0).unwrap() - 0.5).abs() < 1e-16);
        assert!((n.quantile(0.975).unwrap() - (2.0 + 3.0 * 1.959_963_984_540_054)).abs() < 1e-12);
        assert!(Normal::new(0.0, 0.0).is_err());
    }
}
