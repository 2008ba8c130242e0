use stpred_core::distributions::ParamSet;
use stpred_core::io::ingest_raw;
use stpred_core::{RestrictionSet, TwoSampleSummary};

use crate::{CliError, DataArgs, RestrictionArgs, RestrictionKind, Result};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Comma-separated reals.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("{what}: cannot parse {t:?} as a number"))))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(usage(format!("{what}: values must be finite")));
    }
    Ok(values)
}

/// `x1,x2,s,n` with `s` the group-1 standard deviation and `n` the group-1 size.
pub fn parse_summary(text: &str) -> Result<TwoSampleSummary> {
    let v = parse_list(text, "--summary")?;
    let [x1, x2, s, n] = v[..] else {
        return Err(usage(format!("--summary expects x1,x2,s,n; got {} values", v.len())));
    };
    if s <= 0.0 {
        return Err(usage("--summary: s must be positive"));
    }
    if n.fract() != 0.0 || n < 2.0 {
        return Err(usage("--summary: n must be an integer ≥ 2"));
    }
    Ok(TwoSampleSummary::from_group_stats(x1, x2, s, n as usize)?)
}

pub fn load_summary(args: &DataArgs) -> Result<TwoSampleSummary> {
    let mut summary = match (&args.summary, &args.data) {
        (Some(s), None) => parse_summary(s)?,
        (None, Some(path)) => ingest_raw(path)?,
        _ => return Err(usage("give exactly one of --summary or --data")),
    };
    if let Some(k) = args.k {
        summary = TwoSampleSummary::new(summary.x1, summary.x2, summary.s2, k as f64)?;
    }
    Ok(summary)
}

pub fn load_restriction(args: &RestrictionArgs) -> Result<RestrictionSet> {
    match (args.restriction, args.m) {
        (RestrictionKind::Interval, Some(m)) => Ok(RestrictionSet::interval(m)?),
        (RestrictionKind::Interval, None) => Err(usage("--restriction interval requires --m")),
        (_, Some(_)) => Err(usage("--m is only valid with --restriction interval")),
        (RestrictionKind::Positive, None) => Ok(RestrictionSet::PositiveOrthant),
        (RestrictionKind::None, None) => Ok(RestrictionSet::Unrestricted),
    }
}

/// `START:STOP:STEP`, inclusive of `STOP` when it lies on the grid.
pub fn parse_delta_grid(text: &str) -> Result<Vec<f64>> {
    let parts = text
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("--deltas: cannot parse {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(usage("--deltas expects START:STOP:STEP"));
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(usage("--deltas needs finite START ≤ STOP and STEP > 0"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(usage("--deltas grid has too many points"));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Inline JSON, or `@path` to read it from a file.
pub fn load_params(text: &str) -> Result<ParamSet> {
    let json = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => text.to_string(),
    };
    Ok(ParamSet::from_json(&json)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_delta_grid("0:5:0.5").unwrap().len(), 11);
        let g = parse_delta_grid("-5:5:0.5").unwrap();
        assert_eq!((g.len(), g[0], g[10]), (21, -5.0, 0.0));
        assert_eq!(parse_delta_grid("1:1:1").unwrap(), vec![1.0]);
        for bad in ["0:5", "0:5:0", "5:0:1", "a:1:1", "0:inf:1"] {
            assert!(parse_delta_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn summaries() {
        let s = parse_summary("31,30.4,5.7,429").unwrap();
        assert_eq!((s.k, s.x2[0]), (428.0, 30.4));
        for bad in ["1,2,3", "1,2,3,4.5", "1,2,-1,10", "1,2,3,1"] {
            assert!(parse_summary(bad).is_err(), "{bad}");
        }
    }
}
