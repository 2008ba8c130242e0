use proptest::prelude::*;
use stpred_core::io::RawTwoGroupData;
use stpred_core::oracle::rejection_sample_predictive;
use stpred_core::predictive::{baseline_predictive, predictive_for};
use stpred_core::{ParamSet, RestrictionSet, TwoSampleSummary};

fn restriction() -> impl Strategy<Value = RestrictionSet> {
    prop_oneof![Just(RestrictionSet::PositiveOrthant), (0.2..8.0f64).prop_map(|m| RestrictionSet::SymmetricInterval { m })]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn raw_data_round_trips_through_csv(
        g1 in prop::collection::vec(-50.0..50.0f64, 3..20),
        g2 in prop::collection::vec(-50.0..50.0f64, 2..20),
    ) {
        let data = RawTwoGroupData::new(g1, g2).unwrap();
        let mut buf = Vec::new();
        data.write_csv(&mut buf).unwrap();
        let back = RawTwoGroupData::from_reader(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &data);
        let (a, b) = (data.summary().unwrap(), back.summary().unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn predictives_are_location_scale_equivariant(
        x1 in -5.0..5.0f64, d in -3.0..3.0f64, s2 in 0.1..5.0f64, k in 2u32..40,
        shift in -10.0..10.0f64, scale in 0.2..5.0f64, u in -4.0..4.0f64, a in restriction(),
    ) {
        let m = match a { RestrictionSet::SymmetricInterval { m } => m, _ => f64::INFINITY };
        let base = TwoSampleSummary::scalar(x1, x1 - d, s2, k as f64).unwrap();
        let moved = TwoSampleSummary::scalar(shift + scale * x1, shift + scale * (x1 - d), scale * scale * s2, k as f64).unwrap();
        let scaled_a = match a {
            RestrictionSet::SymmetricInterval { .. } => RestrictionSet::SymmetricInterval { m: scale * m },
            other => other,
        };
        let p = predictive_for(&base, &a).unwrap().density().unwrap();
        let q = predictive_for(&moved, &scaled_a).unwrap().density().unwrap();
        let y = x1 + u * base.predictive_scale();
        let lhs = p.pdf(y);
        let rhs = scale * q.pdf(shift + scale * y);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300) + 1e-300, "{lhs} vs {rhs}");
    }

    #[test]
    fn interval_predictive_reflects_with_the_mean_difference(
        d in -3.0..3.0f64, s2 in 0.1..5.0f64, k in 2u32..40, m in 0.2..8.0f64, u in -4.0..4.0f64,
    ) {
        let a = RestrictionSet::SymmetricInterval { m };
        let plus = TwoSampleSummary::scalar(0.0, -d, s2, k as f64).unwrap();
        let minus = TwoSampleSummary::scalar(0.0, d, s2, k as f64).unwrap();
        let p = predictive_for(&plus, &a).unwrap().density().unwrap();
        let q = predictive_for(&minus, &a).unwrap().density().unwrap();
        let y = u * plus.predictive_scale();
        prop_assert!((p.pdf(y) - q.pdf(-y)).abs() <= 1e-12 * p.pdf(y).max(1e-300), "{} vs {}", p.pdf(y), q.pdf(-y));
    }

    #[test]
    fn positive_restriction_moves_mass_up(
        d in -3.0..3.0f64, s2 in 0.1..5.0f64, k in 2u32..40, u in -4.0..4.0f64,
    ) {
        let s = TwoSampleSummary::scalar(0.0, -d, s2, k as f64).unwrap();
        let base = ParamSet::from(baseline_predictive(&s).unwrap()).density().unwrap();
        let restricted = predictive_for(&s, &RestrictionSet::PositiveOrthant).unwrap().density().unwrap();
        let y = u * s.predictive_scale();
        prop_assert!(restricted.cdf(y).unwrap() <= base.cdf(y).unwrap() + 1e-9);
    }
}

#[test]
fn positive_acceptance_rate_grows_with_the_mean_difference() {
    let rates: Vec<(f64, f64)> = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
        .into_iter()
        .map(|d| {
            let s = TwoSampleSummary::scalar(0.0, -d, 1.5, 5.0).unwrap();
            let draws = rejection_sample_predictive(&s, &RestrictionSet::PositiveOrthant, 20_000, 11).unwrap();
            let rate = draws.acceptance_rate();
            let n = draws.len() as f64 / rate;
            (rate, (rate * (1.0 - rate) / n).sqrt())
        })
        .collect();
    for w in rates.windows(2) {
        let ((r0, se0), (r1, se1)) = (w[0], w[1]);
        assert!(r1 >= r0 - 3.0 * se0.hypot(se1), "{rates:?}");
    }
    assert!((rates[3].0 - 0.5).abs() < 0.02);
}
