//! Data summaries, restriction sets and parameter points of the two-group
//! normal model: `X_i ~ N_p(θ_i, σ² I)`, `S² ~ σ² χ²_k`, with the prior
//! `π(θ, σ²) ∝ σ^{-2} 1{θ₁ - θ₂ ∈ A}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical sufficient statistics `(x₁, x₂, s², k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleSummary {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// Variance statistic in units of variance (not a standard deviation).
    pub s2: f64,
    /// Degrees of freedom of `S²`.
    pub k: f64,
}

impl TwoSampleSummary {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>, s2: f64, k: f64) -> Result<Self> {
        let summary = Self { x1, x2, s2, k };
        summary.validate()?;
        Ok(summary)
    }

    /// Univariate convenience constructor.
    pub fn scalar(x1: f64, x2: f64, s2: f64, k: f64) -> Result<Self> {
        Self::new(vec![x1], vec![x2], s2, k)
    }

    /// Summary built the way the worked examples build theirs: group means,
    /// the group-1 sample standard deviation and `k = n₁ - 1`.
    pub fn from_group_stats(mean1: f64, mean2: f64, sd1: f64, n1: usize) -> Result<Self> {
        if n1 < 3 {
            return Err(Error::InvalidSummary(format!("group 1 needs n ≥ 3 for k ≥ 2, got {n1}")));
        }
        Self::scalar(mean1, mean2, sd1 * sd1, (n1 - 1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x1.is_empty() {
            return Err(Error::InvalidSummary("empty observation vector".into()));
        }
        if self.x1.len() != self.x2.len() {
            return Err(Error::DimensionMismatch { expected: self.x1.len(), got: self.x2.len() });
        }
        if self.x1.iter().chain(&self.x2).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSummary("observations must be finite".into()));
        }
        if !(self.s2 > 0.0 && self.s2.is_finite()) {
            return Err(Error::InvalidSummary(format!("s² must be positive, got {}", self.s2)));
        }
        if !(self.k >= 2.0 && self.k.is_finite()) {
            return Err(Error::InvalidSummary(format!("k must be at least 2, got {}", self.k)));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.x1.len()
    }

    pub(crate) fn require_univariate(&self) -> Result<(f64, f64)> {
        if self.p() != 1 {
            return Err(Error::UnsupportedDimension(self.p()));
        }
        Ok((self.x1[0], self.x2[0]))
    }

    /// Scale `√(2s²/k)` shared by all three predictive estimators.
    pub fn predictive_scale(&self) -> f64 {
        (2.0 * self.s2 / self.k).sqrt()
    }
}

/// The set `A` constraining `θ₁ - θ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RestrictionSet {
    /// No restriction, `A = ℝᵖ`.
    Unrestricted,
    /// `A = [0, ∞)ᵖ`.
    PositiveOrthant,
    /// `A = [-m, m]ᵖ`.
    SymmetricInterval { m: f64 },
}

impl RestrictionSet {
    pub fn interval(m: f64) -> Result<Self> {
        let set = Self::SymmetricInterval { m };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::SymmetricInterval { m } if !(m > 0.0 && m.is_finite()) => {
                Err(Error::InvalidRestriction(format!("interval half-width must be positive, got {m}")))
            }
            _ => Ok(()),
        }
    }

    /// Coordinatewise membership test.
    pub fn contains(&self, d: &[f64]) -> bool {
        match *self {
            Self::Unrestricted => true,
            Self::PositiveOrthant => d.iter().all(|&v| v >= 0.0),
            Self::SymmetricInterval { m } => d.iter().all(|&v| v.abs() <= m),
        }
    }

    pub fn contains_scalar(&self, d: f64) -> bool {
        self.contains(std::slice::from_ref(&d))
    }
}

/// A point `(θ₁, θ₂, σ²)` of the parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    pub sigma2: f64,
}

impl ModelPoint {
    pub fn new(theta1: Vec<f64>, theta2: Vec<f64>, sigma2: f64) -> Result<Self> {
        if theta1.len() != theta2.len() {
            return Err(Error::DimensionMismatch { expected: theta1.len(), got: theta2.len() });
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!("σ² must be positive, got {sigma2}")));
        }
        Ok(Self { theta1, theta2, sigma2 })
    }

    /// Precision `η = 1/σ²`.
    pub fn eta(&self) -> f64 {
        1.0 / self.sigma2
    }
}
