use serde::{Deserialize, Serialize};

use super::Density;
use crate::error::{invalid, Error, Result};
use crate::quadrature::TailShape;
use crate::special::{t_cdf, t_cdf_diff, t_ln_norm};

/// One-sided skew-Student t `ST_p(ν, α₀, α₁, ξ, τ)`.
///
/// With `z = (t - ξ)/τ` the density is the location-scale t density times
/// `F(ν+1, (α₀ + α₁z)√((ν+1)/(ν+z²))) / F(ν, α₀/√(1+α₁²))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewTOneSidedParams {
    pub p: usize,
    pub nu: f64,
    pub alpha0: f64,
    pub alpha1: Vec<f64>,
    pub xi: Vec<f64>,
    pub tau: f64,
}

/// Two-sided skew-Student t `ST_p(ν, α₀, α₁, α₂, ξ, τ)`: the weight is the
/// difference of the one-sided weights at `α₀` and `α₂ < α₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewTTwoSidedParams {
    pub p: usize,
    pub nu: f64,
    pub alpha0: f64,
    pub alpha1: Vec<f64>,
    pub alpha2: f64,
    pub xi: Vec<f64>,
    pub tau: f64,
}

fn validate_common(p: usize, nu: f64, alpha1: &[f64], xi: &[f64], tau: f64) -> Result<()> {
    if p == 0 || xi.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: xi.len() });
    }
    if alpha1.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: alpha1.len() });
    }
    if !(nu > 0.0) || nu.is_nan() {
        return Err(invalid(format!("ν must be positive, got {nu}")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(invalid(format!("τ must be positive, got {tau}")));
    }
    Ok(())
}

impl SkewTOneSidedParams {
    pub fn univariate(nu: f64, alpha0: f64, alpha1: f64, xi: f64, tau: f64) -> Result<Self> {
        let params = Self { p: 1, nu, alpha0, alpha1: vec![alpha1], xi: vec![xi], tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.p, self.nu, &self.alpha1, &self.xi, self.tau)?;
        if !self.alpha0.is_finite() {
            return Err(invalid("α₀ must be finite"));
        }
        Ok(())
    }
}

impl SkewTTwoSidedParams {
    pub fn univariate(nu: f64, alpha0: f64, alpha1: f64, alpha2: f64, xi: f64, tau: f64) -> Result<Self> {
        let params = Self { p: 1, nu, alpha0, alpha1: vec![alpha1], alpha2, xi: vec![xi], tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.p, self.nu, &self.alpha1, &self.xi, self.tau)?;
        if !(self.alpha0 > self.alpha2) {
            return Err(invalid(format!("two-sided skew t needs α₀ > α₂, got {} ≤ {}", self.alpha0, self.alpha2)));
        }
        Ok(())
    }
}

/// One-sided skew-t density at `t` (univariate only).
pub fn skew_t_one_sided_pdf(params: &SkewTOneSidedParams, t: &[f64]) -> Result<f64> {
    let d = SkewT::one_sided(params)?;
    scalar_point(t).map(|x| d.pdf(x))
}

/// Two-sided skew-t density at `t` (univariate only).
pub fn skew_t_two_sided_pdf(params: &SkewTTwoSidedParams, t: &[f64]) -> Result<f64> {
    let d = SkewT::two_sided(params)?;
    scalar_point(t).map(|x| d.pdf(x))
}

fn scalar_point(t: &[f64]) -> Result<f64> {
    match t {
        [x] => Ok(*x),
        _ => Err(Error::DimensionMismatch { expected: 1, got: t.len() }),
    }
}

/// Univariate skew-Student t, one- or two-sided.
#[derive(Debug, Clone)]
pub struct SkewT {
    nu: f64,
    alpha0: f64,
    alpha1: f64,
    alpha2: Option<f64>,
    xi: f64,
    tau: f64,
    ln_base_norm: f64,
    ln_denominator: f64,
}

impl SkewT {
    pub fn one_sided(params: &SkewTOneSidedParams) -> Result<Self> {
        params.validate()?;
        if params.p != 1 {
            return Err(Error::UnsupportedDimension(params.p));
        }
        Self::build(params.nu, params.alpha0, params.alpha1[0], None, params.xi[0], params.tau)
    }

    pub fn two_sided(params: &SkewTTwoSidedParams) -> Result<Self> {
        params.validate()?;
        if params.p != 1 {
            return Err(Error::UnsupportedDimension(params.p));
        }
        Self::build(params.nu, params.alpha0, params.alpha1[0], Some(params.alpha2), params.xi[0], params.tau)
    }

    fn build(nu: f64, alpha0: f64, alpha1: f64, alpha2: Option<f64>, xi: f64, tau: f64) -> Result<Self> {
        let r = (1.0 + alpha1 * alpha1).sqrt();
        let denominator = match alpha2 {
            None => t_cdf(nu, alpha0 / r),
            Some(alpha2) => t_cdf_diff(nu, alpha0 / r, alpha2 / r),
        };
        if !(denominator > 0.0) {
            return Err(Error::NumericIntegrity("skew-t normalizer underflows to zero".into()));
        }
        Ok(Self {
            nu,
            alpha0,
            alpha1,
            alpha2,
            xi,
            tau,
            ln_base_norm: t_ln_norm(nu) - tau.ln(),
            ln_denominator: denominator.ln(),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> Option<f64> {
        self.alpha2
    }

    pub fn location(&self) -> f64 {
        self.xi
    }

    pub fn scale(&self) -> f64 {
        self.tau
    }

    /// Unnormalized skew weight at standardized `z`.
    pub fn weight(&self, z: f64) -> f64 {
        let nu1 = self.nu + 1.0;
        let g = (nu1 / (self.nu + z * z)).sqrt();
        let hi = (self.alpha0 + self.alpha1 * z) * g;
        match self.alpha2 {
            None => t_cdf(nu1, hi),
            Some(alpha2) => t_cdf_diff(nu1, hi, (alpha2 + self.alpha1 * z) * g),
        }
    }

    fn ln_base(&self, z: f64) -> f64 {
        self.ln_base_norm - 0.5 * (self.nu + 1.0) * (z * z / self.nu).ln_1p()
    }
}

impl Density for SkewT {
    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.xi) / self.tau;
        (self.ln_base(z) - self.ln_denominator).exp() * self.weight(z)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.xi) / self.tau;
        self.ln_base(z) - self.ln_denominator + self.weight(z).ln()
    }

    fn shape(&self) -> TailShape {
        TailShape { center: self.xi, scale: self.tau, tail_index: self.nu }
    }
}
