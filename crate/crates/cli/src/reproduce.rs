//! Recomputes the two worked examples and the two risk-ratio curves and
//! compares them with the published values.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use stpred_core::datasets::{first_walk, PublishedRow, BODY_MASS, BODY_MASS_PUBLISHED, FIRST_WALK_PUBLISHED};
use stpred_core::distributions::SkewTOneSidedParams;
use stpred_core::io::Precision;
use stpred_core::predictive::{baseline_predictive, positive_restricted_predictive, summarize, PredictiveReport, ALPHA1};
use stpred_core::risk::{risk_ratio_curve, RiskCurve};
use stpred_core::{ParamSet, RestrictionSet, TwoSampleSummary};

use crate::output::to_json;
use crate::{CliError, ReproduceArgs, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// One published-vs-computed comparison. Cells without a tolerance are
/// reported only.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub example: &'static str,
    pub row: &'static str,
    pub quantity: String,
    pub published: f64,
    pub computed: f64,
    pub delta: f64,
    pub tolerance: Option<f64>,
    pub passed: Option<bool>,
}

impl Cell {
    fn new(example: &'static str, row: &'static str, quantity: impl Into<String>, published: f64, computed: f64, tolerance: Option<f64>) -> Self {
        let delta = computed - published;
        let passed = tolerance.map(|t| delta.abs() <= t);
        Cell { example, row, quantity: quantity.into(), published, computed, delta, tolerance, passed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureCheck {
    pub figure: &'static str,
    pub check: String,
    pub value: f64,
    pub bound: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub cells: Vec<Cell>,
    /// Informational: `α₀` from the printed formula `(x₁ - x₂)/√(3s²/k)`, and
    /// the summaries of the skew-t evaluated at the published parameters.
    pub published_parameter_cells: Vec<Cell>,
    pub figures: Vec<FigureCheck>,
    pub passed: bool,
}

/// Tolerances per quantity for one example.
struct Tolerances {
    tau: f64,
    alpha0: f64,
    baseline: f64,
    restricted_mean: f64,
    /// `None` when the restricted percentiles are informational.
    restricted_percentiles: Option<f64>,
}

const BODY_MASS_TOL: Tolerances = Tolerances { tau: 0.005, alpha0: 0.005, baseline: 0.01, restricted_mean: 0.01, restricted_percentiles: Some(0.01) };
const FIRST_WALK_TOL: Tolerances = Tolerances { tau: 0.01, alpha0: 0.01, baseline: 0.02, restricted_mean: 0.05, restricted_percentiles: None };

const PERCENTILE_NAMES: [&str; 3] = ["p10", "p50", "p90"];

fn row_cells(example: &'static str, published: &PublishedRow, report: &PredictiveReport, params: (f64, Option<f64>, f64, f64), tol: &Tolerances) -> Vec<Cell> {
    let (nu, alpha0, xi, tau) = params;
    let restricted = published.alpha0.is_some();
    let row = published.label;
    let mut cells = vec![
        Cell::new(example, row, "nu", published.nu, nu, Some(0.0)),
        Cell::new(example, row, "xi", published.xi, xi, None),
        Cell::new(example, row, "tau", published.tau, tau, Some(tol.tau)),
    ];
    if let (Some(p), Some(c)) = (published.alpha0, alpha0) {
        cells.push(Cell::new(example, row, "alpha0", p, c, Some(tol.alpha0)));
    }
    let (mean_tol, pct_tol) = if restricted { (tol.restricted_mean, tol.restricted_percentiles) } else { (tol.baseline, Some(tol.baseline)) };
    cells.push(Cell::new(example, row, "mean", published.mean, report.mean, Some(mean_tol)));
    for ((name, &p), c) in PERCENTILE_NAMES.iter().zip(&published.percentiles).zip(report.percentiles()) {
        cells.push(Cell::new(example, row, *name, p, c, pct_tol));
    }
    cells
}

fn example_cells(example: &'static str, summary: &TwoSampleSummary, published: &[PublishedRow; 2], tol: &Tolerances) -> Result<(Vec<Cell>, Vec<Cell>)> {
    let t = baseline_predictive(summary)?;
    let st = positive_restricted_predictive(summary)?;
    let t_report = summarize(&t.clone().into())?;
    let st_report = summarize(&st.clone().into())?;
    let mut cells = row_cells(example, &published[0], &t_report, (t.nu, None, t.xi[0], t.tau), tol);
    cells.extend(row_cells(example, &published[1], &st_report, (st.nu, Some(st.alpha0), st.xi[0], st.tau), tol));
    let printed = printed_formula_alpha0(summary);
    let mut extra = vec![Cell::new(example, "restricted", "alpha0 (printed formula)", published[1].alpha0.unwrap_or(f64::NAN), printed, None)];
    let at_published = published_parameter_summary(&published[1])?;
    extra.push(Cell::new(example, "restricted", "mean (published params)", published[1].mean, at_published.mean, None));
    for ((name, &p), c) in PERCENTILE_NAMES.iter().zip(&published[1].percentiles).zip(at_published.percentiles()) {
        extra.push(Cell::new(example, "restricted", format!("{name} (published params)"), p, c, None));
    }
    Ok((cells, extra))
}

/// `(x₁ - x₂)/√(3s²/k)`, which is what the published `α₀` values evaluate.
pub fn printed_formula_alpha0(summary: &TwoSampleSummary) -> f64 {
    (summary.x1[0] - summary.x2[0]) / (3.0 * summary.s2 / summary.k).sqrt()
}

/// Summary of the skew-t with the published parameters, for comparison.
pub fn published_parameter_summary(row: &PublishedRow) -> Result<PredictiveReport> {
    let params = SkewTOneSidedParams::univariate(row.nu, row.alpha0.unwrap_or(0.0), ALPHA1, row.xi, row.tau)?;
    Ok(summarize(&ParamSet::from(params))?)
}

pub const POSITIVE_GRID: (f64, f64, f64) = (0.0, 5.0, 0.5);
pub const INTERVAL_M: f64 = 6.0;
pub const INTERVAL_GRID: (f64, f64, f64) = (-5.0, 5.0, 0.5);
pub const RATIO_BAND: (f64, f64) = (0.83, 0.93);
pub const RATIO_CEILING: f64 = 1.02;
pub const SYMMETRY_Z: f64 = 3.0;
pub const RISK_K: f64 = 3.0;

pub fn grid((start, stop, step): (f64, f64, f64)) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

/// Band, ceiling and (for symmetric sets) ±Δ symmetry checks on one curve.
pub fn figure_checks(figure: &'static str, curve: &RiskCurve, symmetric: bool) -> Vec<FigureCheck> {
    let mut checks = Vec::new();
    let min = curve.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = curve.rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    checks.push(FigureCheck {
        figure,
        check: "min ratio".into(),
        value: min,
        bound: format!("[{}, {}]", RATIO_BAND.0, RATIO_BAND.1),
        passed: (RATIO_BAND.0..=RATIO_BAND.1).contains(&min),
    });
    checks.push(FigureCheck { figure, check: "max ratio".into(), value: max, bound: format!("<= {RATIO_CEILING}"), passed: max <= RATIO_CEILING });
    if symmetric {
        let mut worst = 0.0_f64;
        for r in &curve.rows {
            if let Some(m) = curve.rows.iter().find(|m| (m.delta + r.delta).abs() < 1e-9) {
                let se = (r.mc_standard_error.powi(2) + m.mc_standard_error.powi(2)).sqrt();
                let z = if se > 0.0 { (r.ratio - m.ratio).abs() / se } else { 0.0 };
                worst = worst.max(z);
            }
        }
        checks.push(FigureCheck { figure, check: "max |z| between +Δ and -Δ".into(), value: worst, bound: format!("<= {SYMMETRY_Z}"), passed: worst <= SYMMETRY_Z });
    }
    checks
}

pub fn build_report(n_mc: usize, seed: u64) -> Result<(Report, [RiskCurve; 2])> {
    let (mut cells, a1) = example_cells("body mass", &BODY_MASS.summary()?, &BODY_MASS_PUBLISHED, &BODY_MASS_TOL)?;
    let (walk, a2) = example_cells("first walk", &first_walk().summary()?, &FIRST_WALK_PUBLISHED, &FIRST_WALK_TOL)?;
    cells.extend(walk);
    let positive = risk_ratio_curve(&grid(POSITIVE_GRID), RISK_K, 1, &RestrictionSet::PositiveOrthant, n_mc, seed)?;
    let interval = risk_ratio_curve(&grid(INTERVAL_GRID), RISK_K, 1, &RestrictionSet::interval(INTERVAL_M)?, n_mc, seed)?;
    let mut figures = figure_checks("positive", &positive, false);
    figures.extend(figure_checks("interval m=6", &interval, true));
    let passed = cells.iter().all(|c| c.passed != Some(false)) && figures.iter().all(|f| f.passed);
    Ok((Report { cells, published_parameter_cells: [a1, a2].concat(), figures, passed }, [positive, interval]))
}

fn verdict(passed: Option<bool>) -> &'static str {
    match passed {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "info",
    }
}

fn write_text(w: &mut dyn Write, report: &Report, precision: Precision) -> Result<()> {
    let f = |x: f64| precision.format(x);
    writeln!(w, "{:<11} {:<11} {:<27} {:>12} {:>12} {:>12} {:>9}  status", "example", "row", "quantity", "published", "computed", "delta", "tol")?;
    for c in report.cells.iter().chain(&report.published_parameter_cells) {
        let tol = c.tolerance.map_or_else(|| "-".to_string(), f);
        writeln!(w, "{:<11} {:<11} {:<27} {:>12} {:>12} {:>12} {:>9}  {}", c.example, c.row, c.quantity, f(c.published), f(c.computed), f(c.delta), tol, verdict(c.passed))?;
    }
    writeln!(w)?;
    for fc in &report.figures {
        writeln!(w, "{:<13} {:<27} {:>12} {:>14}  {}", fc.figure, fc.check, f(fc.value), fc.bound, verdict(Some(fc.passed)))?;
    }
    writeln!(w, "\n{}", if report.passed { "all asserted checks passed" } else { "some asserted checks failed" })?;
    Ok(())
}

pub fn run(args: &ReproduceArgs, stdout: &mut dyn Write) -> Result<()> {
    if args.nmc == 0 {
        return Err(CliError::Usage("--nmc must be positive".into()));
    }
    let precision = if args.full_precision { Precision::Full } else { Precision::REPORT };
    let (report, [positive, interval]) = build_report(args.nmc, args.seed)?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        positive.write_csv(std::fs::File::create(dir.join("risk_positive.csv"))?, precision)?;
        interval.write_csv(std::fs::File::create(dir.join("risk_interval.csv"))?, precision)?;
    }
    match args.format {
        ReportFormat::Text => write_text(stdout, &report, precision)?,
        ReportFormat::Json => stdout.write_all(to_json(&report, precision)?.as_bytes())?,
    }
    stdout.flush()?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .cells
            .iter()
            .filter(|c| c.passed == Some(false))
            .map(|c| format!("{} {} {}", c.example, c.row, c.quantity))
            .chain(report.figures.iter().filter(|f| !f.passed).map(|f| format!("{} {}", f.figure, f.check)))
            .collect();
        Err(CliError::Reproduction(failed.join(", ")))
    }
}
