//! One serializable parameter set covering every family.
//!
//! Wire form is a flat JSON object `{family, p, nu, alpha0, alpha1, alpha2,
//! xi, tau}`; fields that do not apply to a family are omitted. Vector fields
//! are written as a bare number when `p = 1` and accept either form on input.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{
    Density, ScaleInvChiSq, ScaleInvChiSqParams, SkewNormal, SkewNormalParams, SkewT, SkewTOneSidedParams,
    SkewTTwoSidedParams, StudentT, StudentTParams,
};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    StudentT,
    SkewNormal,
    SkewT,
    SkewTTwoSided,
    ScaleInvChisq,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::StudentT => "student_t",
            Family::SkewNormal => "skew_normal",
            Family::SkewT => "skew_t",
            Family::SkewTTwoSided => "skew_t_two_sided",
            Family::ScaleInvChisq => "scale_inv_chisq",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamSet {
    StudentT(StudentTParams),
    SkewNormal(SkewNormalParams),
    SkewT(SkewTOneSidedParams),
    SkewTTwoSided(SkewTTwoSidedParams),
    ScaleInvChiSq(ScaleInvChiSqParams),
}

impl ParamSet {
    pub fn family(&self) -> Family {
        match self {
            ParamSet::StudentT(_) => Family::StudentT,
            ParamSet::SkewNormal(_) => Family::SkewNormal,
            ParamSet::SkewT(_) => Family::SkewT,
            ParamSet::SkewTTwoSided(_) => Family::SkewTTwoSided,
            ParamSet::ScaleInvChiSq(_) => Family::ScaleInvChisq,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ParamSet::StudentT(p) => p.validate(),
            ParamSet::SkewNormal(p) => p.validate(),
            ParamSet::SkewT(p) => p.validate(),
            ParamSet::SkewTTwoSided(p) => p.validate(),
            ParamSet::ScaleInvChiSq(p) => p.validate(),
        }
    }

    /// The evaluatable univariate density for these parameters.
    pub fn density(&self) -> Result<Box<dyn Density>> {
        Ok(match self {
            ParamSet::StudentT(p) => Box::new(StudentT::from_params(p)?),
            ParamSet::SkewNormal(p) => Box::new(SkewNormal::from_params(p)?),
            ParamSet::SkewT(p) => Box::new(SkewT::one_sided(p)?),
            ParamSet::SkewTTwoSided(p) => Box::new(SkewT::two_sided(p)?),
            ParamSet::ScaleInvChiSq(p) => Box::new(ScaleInvChiSq::new(p.nu, p.tau)?),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let params: ParamSet = serde_json::from_str(text)?;
        Ok(params)
    }
}

impl From<StudentTParams> for ParamSet {
    fn from(p: StudentTParams) -> Self {
        ParamSet::StudentT(p)
    }
}

impl From<SkewTOneSidedParams> for ParamSet {
    fn from(p: SkewTOneSidedParams) -> Self {
        ParamSet::SkewT(p)
    }
}

impl From<SkewTTwoSidedParams> for ParamSet {
    fn from(p: SkewTTwoSidedParams) -> Self {
        ParamSet::SkewTTwoSided(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarOrVec {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl ScalarOrVec {
    fn wrap(v: &[f64]) -> Self {
        match v {
            [x] => ScalarOrVec::Scalar(*x),
            _ => ScalarOrVec::Vector(v.to_vec()),
        }
    }

    fn into_vec(self) -> Vec<f64> {
        match self {
            ScalarOrVec::Scalar(x) => vec![x],
            ScalarOrVec::Vector(v) => v,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha1: Option<ScalarOrVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<ScalarOrVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
}

impl Wire {
    fn blank(family: Family) -> Self {
        Self { family, p: None, nu: None, alpha0: None, alpha1: None, alpha2: None, xi: None, tau: None }
    }
}

impl From<&ParamSet> for Wire {
    fn from(params: &ParamSet) -> Self {
        let mut w = Wire::blank(params.family());
        match params {
            ParamSet::StudentT(p) => {
                w.p = Some(p.p);
                w.nu = Some(p.nu);
                w.xi = Some(ScalarOrVec::wrap(&p.xi));
                w.tau = Some(p.tau);
            }
            ParamSet::SkewNormal(p) => {
                w.p = Some(p.p);
                w.alpha0 = Some(p.alpha0);
                w.alpha1 = Some(ScalarOrVec::wrap(&p.alpha1));
                w.alpha2 = p.alpha2;
                w.xi = Some(ScalarOrVec::wrap(&p.xi));
                w.tau = Some(p.tau);
            }
            ParamSet::SkewT(p) => {
                w.p = Some(p.p);
                w.nu = Some(p.nu);
                w.alpha0 = Some(p.alpha0);
                w.alpha1 = Some(ScalarOrVec::wrap(&p.alpha1));
                w.xi = Some(ScalarOrVec::wrap(&p.xi));
                w.tau = Some(p.tau);
            }
            ParamSet::SkewTTwoSided(p) => {
                w.p = Some(p.p);
                w.nu = Some(p.nu);
                w.alpha0 = Some(p.alpha0);
                w.alpha1 = Some(ScalarOrVec::wrap(&p.alpha1));
                w.alpha2 = Some(p.alpha2);
                w.xi = Some(ScalarOrVec::wrap(&p.xi));
                w.tau = Some(p.tau);
            }
            ParamSet::ScaleInvChiSq(p) => {
                w.nu = Some(p.nu);
                w.tau = Some(p.tau);
            }
        }
        w
    }
}

fn need<T>(value: Option<T>, field: &str, family: Family) -> Result<T> {
    value.ok_or_else(|| invalid(format!("{} requires field `{field}`", family.name())))
}

fn forbid<T>(value: &Option<T>, field: &str, family: Family) -> Result<()> {
    match value {
        Some(_) => Err(invalid(format!("field `{field}` does not apply to {}", family.name()))),
        None => Ok(()),
    }
}

impl TryFrom<Wire> for ParamSet {
    type Error = crate::error::Error;

    fn try_from(w: Wire) -> Result<Self> {
        let f = w.family;
        let xi = w.xi.map(ScalarOrVec::into_vec);
        let alpha1 = w.alpha1.map(ScalarOrVec::into_vec);
        let p = w.p.unwrap_or_else(|| xi.as_ref().map_or(1, Vec::len));
        let params = match f {
            Family::StudentT => {
                forbid(&w.alpha0, "alpha0", f)?;
                forbid(&alpha1, "alpha1", f)?;
                forbid(&w.alpha2, "alpha2", f)?;
                ParamSet::StudentT(StudentTParams { p, nu: need(w.nu, "nu", f)?, xi: need(xi, "xi", f)?, tau: need(w.tau, "tau", f)? })
            }
            Family::SkewNormal => {
                forbid(&w.nu, "nu", f)?;
                ParamSet::SkewNormal(SkewNormalParams {
                    p,
                    alpha0: need(w.alpha0, "alpha0", f)?,
                    alpha1: need(alpha1, "alpha1", f)?,
                    alpha2: w.alpha2,
                    xi: need(xi, "xi", f)?,
                    tau: need(w.tau, "tau", f)?,
                })
            }
            Family::SkewT => {
                forbid(&w.alpha2, "alpha2", f)?;
                ParamSet::SkewT(SkewTOneSidedParams {
                    p,
                    nu: need(w.nu, "nu", f)?,
                    alpha0: need(w.alpha0, "alpha0", f)?,
                    alpha1: need(alpha1, "alpha1", f)?,
                    xi: need(xi, "xi", f)?,
                    tau: need(w.tau, "tau", f)?,
                })
            }
            Family::SkewTTwoSided => ParamSet::SkewTTwoSided(SkewTTwoSidedParams {
                p,
                nu: need(w.nu, "nu", f)?,
                alpha0: need(w.alpha0, "alpha0", f)?,
                alpha1: need(alpha1, "alpha1", f)?,
                alpha2: need(w.alpha2, "alpha2", f)?,
                xi: need(xi, "xi", f)?,
                tau: need(w.tau, "tau", f)?,
            }),
            Family::ScaleInvChisq => {
                forbid(&w.alpha0, "alpha0", f)?;
                forbid(&alpha1, "alpha1", f)?;
                forbid(&w.alpha2, "alpha2", f)?;
                forbid(&xi, "xi", f)?;
                ParamSet::ScaleInvChiSq(ScaleInvChiSqParams { nu: need(w.nu, "nu", f)?, tau: need(w.tau, "tau", f)? })
            }
        };
        params.validate()?;
        Ok(params)
    }
}

impl Serialize for ParamSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParamSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        ParamSet::try_from(wire).map_err(serde::de::Error::custom)
    }
}
