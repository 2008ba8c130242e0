//! Evaluatable univariate distributions sharing one [`Density`] contract, and
//! the serializable parameter sets behind them.
//!
//! Families: location-scale Student t, (extended, optionally two-sided)
//! skew-normal, one- and two-sided skew-Student t, scaled inverse chi-squared.
//! Exact evaluation is univariate; the multivariate Student t density is the
//! only `p > 1` closed form offered ([`student_t_pdf`]).

mod numeric;
mod params;
mod scale_inv_chisq;
mod skew_normal;
mod skew_t;
mod student_t;
mod table;

pub use numeric::{check_normalization, total_mass};
pub use params::{Family, ParamSet};
pub use scale_inv_chisq::{scale_inv_chisq_pdf, ScaleInvChiSq, ScaleInvChiSqParams};
pub use skew_normal::{skew_normal_pdf, Normal, SkewNormal, SkewNormalParams};
pub use skew_t::{
    skew_t_one_sided_pdf, skew_t_two_sided_pdf, SkewT, SkewTOneSidedParams, SkewTTwoSidedParams,
};
pub use student_t::{student_t_pdf, StudentT, StudentTParams};
pub use table::TabulatedCdf;

use crate::error::Result;
use crate::quadrature::TailShape;

/// Where a density puts its mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    RealLine,
    Positive,
}

/// A univariate distribution.
///
/// Implementors provide the pdf and a [`TailShape`]; cdf, quantile, mean and
/// sampling fall back to quadrature, root-finding and inverse-cdf sampling
/// when no closed form is overridden.
pub trait Density: Send + Sync {
    fn pdf(&self, x: f64) -> f64;

    fn ln_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }

    /// Location, scale and tail heaviness used to lay out quadratures.
    fn shape(&self) -> TailShape;

    fn support(&self) -> Support {
        Support::RealLine
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        numeric::cdf(self, x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        numeric::quantile(self, p)
    }

    fn mean(&self) -> Result<f64> {
        numeric::mean(self)
    }

    /// `n` i.i.d. draws by inverse-cdf transform of the seeded uniform stream.
    fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        TabulatedCdf::build(self)?.sample(n, seed)
    }
}

/// Mean and `{0.1, 0.5, 0.9}` quantiles, as reported for every estimator.
pub fn density_summary(d: &dyn Density) -> Result<(f64, [f64; 3])> {
    let mean = d.mean()?;
    let q = [d.quantile(0.1)?, d.quantile(0.5)?, d.quantile(0.9)?];
    Ok((mean, q))
}
