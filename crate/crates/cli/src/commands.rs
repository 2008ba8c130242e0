use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use stpred_core::io::Precision;
use stpred_core::oracle::rejection_sample_predictive;
use stpred_core::predictive::{baseline_predictive, predictive_for, summarize, PredictiveReport};
use stpred_core::risk::risk_ratio_curve;
use stpred_core::{RestrictionSet, TwoSampleSummary};

use crate::args::{load_params, load_restriction, load_summary, parse_delta_grid, parse_list};
use crate::output::{precision, to_json, with_sink, Format};
use crate::{CliError, EvalArgs, FitArgs, OracleArgs, QuantileArgs, Result, RiskArgs, SampleArgs};

#[derive(Debug, Serialize)]
struct FitReport {
    summary: TwoSampleSummary,
    restriction: RestrictionSet,
    baseline: PredictiveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    restricted: Option<PredictiveReport>,
}

const FIT_CSV_HEADER: [&str; 12] = ["estimator", "family", "nu", "alpha0", "alpha1", "alpha2", "xi", "tau", "mean", "p10", "p50", "p90"];

fn fit_csv_row(label: &str, report: &PredictiveReport, precision: Precision) -> Result<Vec<String>> {
    let params = serde_json::to_value(&report.params).map_err(stpred_core::Error::from)?;
    let field = |name: &str| match params.get(name) {
        Some(Value::Number(n)) => n.as_f64().map(|x| precision.format(x)).unwrap_or_default(),
        Some(Value::Array(v)) => v.iter().filter_map(Value::as_f64).map(|x| precision.format(x)).collect::<Vec<_>>().join(";"),
        _ => String::new(),
    };
    let mut row = vec![label.to_string(), report.family.clone()];
    row.extend(["nu", "alpha0", "alpha1", "alpha2", "xi", "tau"].map(field));
    row.extend([report.mean, report.p10, report.p50, report.p90].map(|x| precision.format(x)));
    Ok(row)
}

pub fn fit(args: &FitArgs, stdout: &mut dyn Write) -> Result<()> {
    let summary = load_summary(&args.data)?;
    let restriction = load_restriction(&args.restriction)?;
    let baseline = summarize(&baseline_predictive(&summary)?.into())?;
    let restricted = match restriction {
        RestrictionSet::Unrestricted => None,
        _ => Some(summarize(&predictive_for(&summary, &restriction)?)?),
    };
    let report = FitReport { summary, restriction, baseline, restricted };
    let precision = precision(&args.output);
    with_sink(args.output.out.as_deref(), stdout, |w| {
        match args.format {
            Format::Json => w.write_all(to_json(&report, precision)?.as_bytes())?,
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(FIT_CSV_HEADER).map_err(stpred_core::Error::from)?;
                let rows = std::iter::once(("baseline", &report.baseline)).chain(report.restricted.as_ref().map(|r| ("restricted", r)));
                for (label, r) in rows {
                    csv.write_record(fit_csv_row(label, r, precision)?).map_err(stpred_core::Error::from)?;
                }
                csv.flush()?;
            }
        }
        Ok(())
    })
}

/// Default grid in steps of 0.5: `[0, 5]` for the orthant, symmetric within
/// `±min(m, 5)` for an interval.
fn default_deltas(restriction: &RestrictionSet) -> Vec<f64> {
    match restriction {
        RestrictionSet::SymmetricInterval { m } => {
            let n = (m.min(5.0) / 0.5 + 1e-9).floor() as i64;
            (-n..=n).map(|i| 0.5 * i as f64).collect()
        }
        _ => (0..=10).map(|i| 0.5 * i as f64).collect(),
    }
}

pub fn risk_curve(args: &RiskArgs, stdout: &mut dyn Write) -> Result<()> {
    let restriction = load_restriction(&args.restriction)?;
    if restriction == RestrictionSet::Unrestricted {
        return Err(CliError::Usage("risk-curve needs --restriction positive or interval".into()));
    }
    let deltas = match &args.deltas {
        Some(g) => parse_delta_grid(g)?,
        None => default_deltas(&restriction),
    };
    if args.nmc == 0 {
        return Err(CliError::Usage("--nmc must be positive".into()));
    }
    let curve = risk_ratio_curve(&deltas, args.k as f64, 1, &restriction, args.nmc, args.seed)?;
    let precision = precision(&args.output);
    with_sink(args.output.out.as_deref(), stdout, |w| Ok(curve.write_csv(w, precision)?))
}

fn write_table(w: &mut dyn Write, header: [&str; 2], rows: &[(f64, f64)], format: Format, precision: Precision) -> Result<()> {
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(header).map_err(stpred_core::Error::from)?;
            for &(a, b) in rows {
                csv.write_record([precision.format(a), precision.format(b)]).map_err(stpred_core::Error::from)?;
            }
            csv.flush()?;
        }
        Format::Json => {
            let items: Vec<Value> = rows.iter().map(|&(a, b)| serde_json::json!({ header[0]: a, header[1]: b })).collect();
            w.write_all(to_json(&items, precision)?.as_bytes())?;
        }
    }
    Ok(())
}

pub fn eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<()> {
    let density = load_params(&args.dist.params)?.density()?;
    let points = parse_list(&args.points, "--points")?;
    let rows: Vec<(f64, f64)> = points.iter().map(|&x| (x, density.pdf(x))).collect();
    let precision = precision(&args.output);
    with_sink(args.output.out.as_deref(), stdout, |w| write_table(w, ["x", "pdf"], &rows, args.format, precision))
}

pub fn quantile(args: &QuantileArgs, stdout: &mut dyn Write) -> Result<()> {
    let density = load_params(&args.dist.params)?.density()?;
    let probs = parse_list(&args.probs, "--probs")?;
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(CliError::Usage(format!("--probs must lie in (0, 1), got {p}")));
    }
    let rows = probs.iter().map(|&p| Ok((p, density.quantile(p)?))).collect::<Result<Vec<_>>>()?;
    let precision = precision(&args.output);
    with_sink(args.output.out.as_deref(), stdout, |w| write_table(w, ["p", "quantile"], &rows, args.format, precision))
}

fn write_column(w: &mut dyn Write, values: &[f64], precision: Precision) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["y"]).map_err(stpred_core::Error::from)?;
    for &y in values {
        csv.write_record([precision.format(y)]).map_err(stpred_core::Error::from)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn sample(args: &SampleArgs, stdout: &mut dyn Write) -> Result<()> {
    let density = load_params(&args.dist.params)?.density()?;
    let values = density.sample(args.n, args.seed)?;
    let precision = precision(&args.output);
    with_sink(args.output.out.as_deref(), stdout, |w| write_column(w, &values, precision))
}

pub fn oracle_sample(args: &OracleArgs, stdout: &mut dyn Write) -> Result<()> {
    let summary = load_summary(&args.data)?;
    let restriction = load_restriction(&args.restriction)?;
    let samples = rejection_sample_predictive(&summary, &restriction, args.n, args.seed)?;
    let precision = precision(&args.output);
    with_sink(args.output.out.as_deref(), stdout, |w| Ok(samples.write_csv(w, |x| precision.format(x))?))
}
