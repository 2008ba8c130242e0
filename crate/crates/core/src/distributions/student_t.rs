use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Density;
use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::TailShape;
use crate::rng::{open_unit, streams, substream};
use crate::special::{ln_gamma_ratio, t_cdf, t_ln_norm, t_quantile};

/// Location-scale Student t `T_p(ν, ξ, τ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentTParams {
    pub p: usize,
    pub nu: f64,
    pub xi: Vec<f64>,
    pub tau: f64,
}

impl StudentTParams {
    pub fn new(nu: f64, xi: Vec<f64>, tau: f64) -> Result<Self> {
        let params = Self { p: xi.len(), nu, xi, tau };
        params.validate()?;
        Ok(params)
    }

    pub fn univariate(nu: f64, xi: f64, tau: f64) -> Result<Self> {
        Self::new(nu, vec![xi], tau)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.p != self.xi.len() {
            return Err(Error::DimensionMismatch { expected: self.p, got: self.xi.len() });
        }
        if !(self.nu > 0.0) || self.nu.is_nan() {
            return Err(invalid(format!("ν must be positive, got {}", self.nu)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid(format!("τ must be positive, got {}", self.tau)));
        }
        if self.xi.iter().any(|v| !v.is_finite()) {
            return Err(invalid("ξ must be finite"));
        }
        Ok(())
    }
}

/// Multivariate location-scale Student t density at `t`, with `‖t - ξ‖²`
/// the squared Euclidean distance.
pub fn student_t_pdf(params: &StudentTParams, t: &[f64]) -> Result<f64> {
    params.validate()?;
    if t.len() != params.p {
        return Err(Error::DimensionMismatch { expected: params.p, got: t.len() });
    }
    let p = params.p as f64;
    let nu = params.nu;
    let dist2: f64 = t.iter().zip(&params.xi).map(|(a, b)| (a - b) * (a - b)).sum();
    let ln = ln_gamma_ratio(0.5 * nu, 0.5 * p)
        - 0.5 * p * (PI * nu).ln()
        - p * params.tau.ln()
        - 0.5 * (nu + p) * (dist2 / (nu * params.tau * params.tau)).ln_1p();
    Ok(ln.exp())
}

/// Univariate location-scale Student t.
#[derive(Debug, Clone)]
pub struct StudentT {
    nu: f64,
    xi: f64,
    tau: f64,
    ln_norm: f64,
}

impl StudentT {
    pub fn new(nu: f64, xi: f64, tau: f64) -> Result<Self> {
        Self::from_params(&StudentTParams::univariate(nu, xi, tau)?)
    }

    pub fn from_params(params: &StudentTParams) -> Result<Self> {
        params.validate()?;
        if params.p != 1 {
            return Err(Error::UnsupportedDimension(params.p));
        }
        let (nu, xi, tau) = (params.nu, params.xi[0], params.tau);
        Ok(Self { nu, xi, tau, ln_norm: t_ln_norm(nu) - tau.ln() })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn location(&self) -> f64 {
        self.xi
    }

    pub fn scale(&self) -> f64 {
        self.tau
    }

    pub fn params(&self) -> StudentTParams {
        StudentTParams { p: 1, nu: self.nu, xi: vec![self.xi], tau: self.tau }
    }
}

impl Density for StudentT {
    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.xi) / self.tau;
        self.ln_norm - 0.5 * (self.nu + 1.0) * (z * z / self.nu).ln_1p()
    }

    fn shape(&self) -> TailShape {
        TailShape { center: self.xi, scale: self.tau, tail_index: self.nu }
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(domain("cdf at NaN"));
        }
        Ok(t_cdf(self.nu, (x - self.xi) / self.tau))
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("quantile requires p in (0, 1), got {p}")));
        }
        Ok(self.xi + self.tau * t_quantile(self.nu, p))
    }

    fn mean(&self) -> Result<f64> {
        if self.nu <= 1.0 {
            return Err(domain(format!("Student t mean needs ν > 1, got {}", self.nu)));
        }
        Ok(self.xi)
    }

    fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = substream(seed, streams::SAMPLE);
        Ok((0..n).map(|_| self.xi + self.tau * t_quantile(self.nu, open_unit(&mut rng))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::check_normalization;
    use crate::special::{normal_pdf, t_ln_pdf};

    #[test]
    fn mode_value_for_walking_baseline() {
        // Γ(3) / (Γ(2.5) √(5π)) / 1.2, with Γ(2.5) = 3√π/4.
        let gamma_2_5 = 0.75 * PI.sqrt();
        let expected = 2.0 / (gamma_2_5 * (5.0 * PI).sqrt()) / 1.2;
        let d = StudentT::new(5.0, 11.37, 1.2).unwrap();
        assert!((d.pdf(11.37) - expected).abs() < 1e-14);
        assert!((d.pdf(11.37) - 0.3163).abs() < 1e-4);
        let p = StudentTParams::univariate(5.0, 11.37, 1.2).unwrap();
        assert!((student_t_pdf(&p, &[11.37]).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn normalizes_across_dof_and_scale() {
        for &nu in &[1.0, 3.0, 428.0] {
            for &tau in &[0.39, 1.2] {
                let d = StudentT::new(nu, 0.7, tau).unwrap();
                let total = check_normalization(&d).unwrap();
                assert!((total - 1.0).abs() < 1e-9, "nu={nu} tau={tau}");
            }
        }
    }

    #[test]
    fn approaches_normal_for_large_dof() {
        let d = StudentT::new(1e7, 0.0, 1.0).unwrap();
        for i in -12..=12 {
            let x = i as f64 * 0.5;
            assert!((d.pdf(x) - normal_pdf(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn multivariate_density_matches_product_structure() {
        // p = 2 at the center equals Γ((ν+2)/2) / (Γ(ν/2) πν τ²).
        let params = StudentTParams::new(4.0, vec![1.0, -1.0], 2.0).unwrap();
        let at_center = student_t_pdf(&params, &[1.0, -1.0]).unwrap();
        assert!((at_center - 1.0 / (2.0 * 4.0 * PI * 4.0) * 4.0).abs() < 1e-14);
        assert!(student_t_pdf(&params, &[1.0]).is_err());
        // p = 1 agrees with the standard density.
        let uni = StudentTParams::univariate(3.0, 0.0, 1.0).unwrap();
        assert!((student_t_pdf(&uni, &[0.8]).unwrap() - t_ln_pdf(3.0, 0.8).exp()).abs() < 1e-15);
    }

    #[test]
    fn table_percentiles() {
        let walking = StudentT::new(5.0, 11.37, 1.2).unwrap();
        let q: Vec<f64> = [0.1, 0.5, 0.9].iter().map(|&p| walking.quantile(p).unwrap()).collect();
        for (got, want) in q.iter().zip([9.6, 11.37, 13.14]) {
            assert!((got - want).abs() <= 0.02);
        }
        let body_mass = StudentT::new(428.0, 31.0, 0.39).unwrap();
        let q: Vec<f64> = [0.1, 0.5, 0.9].iter().map(|&p| body_mass.quantile(p).unwrap()).collect();
        for (got, want) in q.iter().zip([30.5, 31.0, 31.5]) {
            assert!((got - want).abs() <= 0.01);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StudentT::new(0.0, 0.0, 1.0).is_err());
        assert!(StudentT::new(3.0, 0.0, -1.0).is_err());
        assert!(StudentT::from_params(&StudentTParams::new(3.0, vec![0.0, 0.0], 1.0).unwrap()).is_err());
    }
}
