//! The two worked examples: body mass index by leg-length discrepancy
//! (summary statistics only) and age at first walking (raw observations),
//! together with the estimator summaries published for them.

use crate::error::Result;
use crate::io::RawTwoGroupData;
use crate::model::TwoSampleSummary;

/// Group sizes, means and standard deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupStats {
    pub n1: usize,
    pub mean1: f64,
    pub sd1: f64,
    pub n2: usize,
    pub mean2: f64,
    pub sd2: f64,
}

impl GroupStats {
    pub fn summary(&self) -> Result<TwoSampleSummary> {
        TwoSampleSummary::from_group_stats(self.mean1, self.mean2, self.sd1, self.n1)
    }
}

/// Body mass index, leg-length discrepancy ≥ 1 cm (group 1) vs < 1 cm.
pub const BODY_MASS: GroupStats = GroupStats { n1: 429, mean1: 31.0, sd1: 5.7, n2: 2535, mean2: 30.4, sd2: 5.7 };

/// Age in months at first walking: daily exercise (group 1) vs special
/// walking exercise (group 2).
pub fn first_walk() -> RawTwoGroupData {
    RawTwoGroupData {
        group1: vec![11.0, 10.0, 10.0, 11.75, 10.5, 15.0],
        group2: vec![9.0, 9.5, 9.75, 10.0, 13.0, 9.5],
    }
}

/// Printed group-1 standard deviation for [`first_walk`]. The data give
/// 1.896 for group 1; 1.44 is the group-2 value, so the two were swapped.
pub const FIRST_WALK_PRINTED_SD1: f64 = 1.44;

/// One published estimator row: parameters and `(mean, P10, P50, P90)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub label: &'static str,
    pub nu: f64,
    /// `None` for the Student t row.
    pub alpha0: Option<f64>,
    pub xi: f64,
    pub tau: f64,
    pub mean: f64,
    pub percentiles: [f64; 3],
}

pub const BODY_MASS_PUBLISHED: [PublishedRow; 2] = [
    PublishedRow { label: "baseline", nu: 428.0, alpha0: None, xi: 31.0, tau: 0.39, mean: 31.0, percentiles: [30.5, 31.0, 31.5] },
    PublishedRow { label: "restricted", nu: 428.0, alpha0: Some(1.26), xi: 31.0, tau: 0.39, mean: 31.02, percentiles: [30.52, 31.02, 31.52] },
];

pub const FIRST_WALK_PUBLISHED: [PublishedRow; 2] = [
    PublishedRow { label: "baseline", nu: 5.0, alpha0: None, xi: 11.37, tau: 1.2, mean: 11.37, percentiles: [9.6, 11.37, 13.14] },
    PublishedRow { label: "restricted", nu: 5.0, alpha0: Some(0.85), xi: 11.37, tau: 1.2, mean: 11.45, percentiles: [11.2, 11.44, 12.37] },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summaries() {
        let b = BODY_MASS.summary().unwrap();
        assert_eq!((b.k, b.s2), (428.0, 5.7 * 5.7));
        let w = first_walk().summary().unwrap();
        assert!((w.x1[0] - 11.375).abs() < 1e-12 && (w.x2[0] - 10.125).abs() < 1e-12);
        let sd2 = {
            let g = &first_walk().group2;
            let m = g.iter().sum::<f64>() / 6.0;
            (g.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 5.0).sqrt()
        };
        assert!((sd2 - 1.44).abs() < 0.01);
    }
}
