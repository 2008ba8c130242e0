use serde::{Deserialize, Serialize};

use super::{Density, Support};
use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::TailShape;
use crate::rng::{open_unit, streams, substream};
use crate::special::{gamma_p_q, ln_gamma_unchecked};

/// Scaled inverse chi-squared `Inv-χ²(ν, τ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleInvChiSqParams {
    pub nu: f64,
    pub tau: f64,
}

impl ScaleInvChiSqParams {
    pub fn new(nu: f64, tau: f64) -> Result<Self> {
        let params = Self { nu, tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(invalid(format!("ν must be positive, got {}", self.nu)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid(format!("τ must be positive, got {}", self.tau)));
        }
        Ok(())
    }
}

/// `(ντ²/2)^{ν/2} / Γ(ν/2) · exp(-ντ²/(2x)) / x^{1+ν/2}`.
pub fn scale_inv_chisq_pdf(params: &ScaleInvChiSqParams, x: f64) -> Result<f64> {
    let d = ScaleInvChiSq::new(params.nu, params.tau)?;
    if !(x > 0.0) {
        return Err(domain(format!("scaled inverse chi-squared pdf needs x > 0, got {x}")));
    }
    Ok(d.pdf(x))
}

#[derive(Debug, Clone)]
pub struct ScaleInvChiSq {
    nu: f64,
    tau: f64,
    /// `ντ²/2`, the rate of the underlying gamma on `1/x`.
    half_scale: f64,
    ln_norm: f64,
}

impl ScaleInvChiSq {
    pub fn new(nu: f64, tau: f64) -> Result<Self> {
        ScaleInvChiSqParams::new(nu, tau)?;
        let half_scale = 0.5 * nu * tau * tau;
        let a = 0.5 * nu;
        Ok(Self { nu, tau, half_scale, ln_norm: a * half_scale.ln() - ln_gamma_unchecked(a) })
    }

    pub fn params(&self) -> ScaleInvChiSqParams {
        ScaleInvChiSqParams { nu: self.nu, tau: self.tau }
    }

    pub fn mode(&self) -> f64 {
        self.nu * self.tau * self.tau / (self.nu + 2.0)
    }
}

/// `y` with `Q(a, y) = target`, by bisection in `ln y` refined with Newton steps.
fn inverse_upper_gamma(a: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (-700.0_f64, 700.0_f64);
    let mut t = a.ln();
    for _ in 0..300 {
        let y = t.exp();
        let q = gamma_p_q(a, y).1;
        let gap = q - target;
        if gap.abs() <= 1e-15 * target.max(1e-300) {
            return y;
        }
        // Q decreases in y.
        if gap > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        // dQ/dt = -y · y^{a-1} e^{-y} / Γ(a).
        let slope = -(a * t - y - ln_gamma_unchecked(a)).exp();
        let newton = t - gap / slope;
        let next = if slope < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - t).abs() <= 1e-15 * t.abs().max(1.0) {
            return next.exp();
        }
        t = next;
    }
    t.exp()
}

impl Density for ScaleInvChiSq {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.ln_pdf(x).exp()
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.ln_norm - self.half_scale / x - (1.0 + 0.5 * self.nu) * x.ln()
    }

    fn shape(&self) -> TailShape {
        TailShape { center: self.mode(), scale: self.mode(), tail_index: 0.5 * self.nu }
    }

    fn support(&self) -> Support {
        Support::Positive
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(domain("cdf at NaN"));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        Ok(gamma_p_q(0.5 * self.nu, self.half_scale / x).1)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("quantile requires p in (0, 1), got {p}")));
        }
        Ok(self.half_scale / inverse_upper_gamma(0.5 * self.nu, p))
    }

    fn mean(&self) -> Result<f64> {
        if self.nu <= 2.0 {
            return Err(domain(format!("scaled inverse chi-squared mean needs ν > 2, got {}", self.nu)));
        }
        Ok(self.nu * self.tau * self.tau / (self.nu - 2.0))
    }

    fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = substream(seed, streams::SAMPLE);
        let a = 0.5 * self.nu;
        let draws = (0..n).map(|_| self.half_scale / inverse_upper_gamma(a, open_unit(&mut rng))).collect::<Vec<_>>();
        if draws.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::NumericIntegrity("scaled inverse chi-squared draw out of range".into()));
        }
        Ok(draws)
    }
}
