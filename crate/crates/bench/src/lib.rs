//! Fixtures shared by the benchmarks.

use stpred_core::datasets::first_walk;
use stpred_core::predictive::{interval_restricted_predictive, positive_restricted_predictive};
use stpred_core::{Density, ParamSet, TwoSampleSummary};

pub fn walking_summary() -> TwoSampleSummary {
    first_walk().summary().expect("walking data are valid")
}

pub fn positive_density() -> Box<dyn Density> {
    ParamSet::from(positive_restricted_predictive(&walking_summary()).expect("valid")).density().expect("valid")
}

pub fn interval_density(m: f64) -> Box<dyn Density> {
    ParamSet::from(interval_restricted_predictive(&walking_summary(), m).expect("valid")).density().expect("valid")
}
