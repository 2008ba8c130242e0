//! Raw two-group data ingestion and float formatting for reports.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::TwoSampleSummary;

/// Observations of the two groups, as read from `group,value` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTwoGroupData {
    pub group1: Vec<f64>,
    pub group2: Vec<f64>,
}

#[derive(Deserialize)]
struct Row {
    group: String,
    value: String,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

impl RawTwoGroupData {
    pub fn new(group1: Vec<f64>, group2: Vec<f64>) -> Result<Self> {
        let data = Self { group1, group2 };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        for (label, g) in [("1", &self.group1), ("2", &self.group2)] {
            if g.len() < 2 {
                return Err(Error::Input(format!("group {label} needs at least 2 observations, got {}", g.len())));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::Input(format!("group {label} has a non-finite value")));
            }
        }
        Ok(())
    }

    /// Parses CSV with header `group,value`; LF and CRLF line endings both work.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["group", "value"] {
            return Err(Error::Input(format!("expected header `group,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let (mut group1, mut group2) = (Vec::new(), Vec::new());
        for (line, row) in rdr.deserialize::<Row>().enumerate() {
            let row = row?;
            let value: f64 = row
                .value
                .parse()
                .map_err(|_| Error::Input(format!("row {}: non-numeric value `{}`", line + 1, row.value)))?;
            match row.group.as_str() {
                "1" => group1.push(value),
                "2" => group2.push(value),
                other => return Err(Error::Input(format!("row {}: unknown group label `{other}`", line + 1))),
            }
        }
        Self::new(group1, group2)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["group", "value"])?;
        for (label, g) in [("1", &self.group1), ("2", &self.group2)] {
            for v in g {
                w.write_record([label, &format!("{v}")])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Group-1 sample standard deviation (divisor `n₁ - 1`).
    pub fn sd1(&self) -> f64 {
        let m = mean(&self.group1);
        let ss: f64 = self.group1.iter().map(|v| (v - m).powi(2)).sum();
        (ss / (self.group1.len() - 1) as f64).sqrt()
    }

    /// `x₁, x₂` the group means, `s²` the group-1 sample variance, `k = n₁ - 1`.
    pub fn summary(&self) -> Result<TwoSampleSummary> {
        self.validate()?;
        let n1 = self.group1.len();
        let m1 = mean(&self.group1);
        let ss: f64 = self.group1.iter().map(|v| (v - m1).powi(2)).sum();
        TwoSampleSummary::scalar(m1, mean(&self.group2), ss / (n1 - 1) as f64, (n1 - 1) as f64)
    }
}

/// Reads `group,value` CSV and reduces it to the canonical summary.
pub fn ingest_raw(path: impl AsRef<Path>) -> Result<TwoSampleSummary> {
    RawTwoGroupData::read_csv(path)?.summary()
}

/// How floats are written in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// `%g`-style with this many significant digits.
    Significant(usize),
    /// Shortest representation that round-trips.
    #[default]
    Full,
}

impl Precision {
    pub const REPORT: Precision = Precision::Significant(6);

    pub fn format(self, x: f64) -> String {
        match self {
            Precision::Full => format!("{x}"),
            Precision::Significant(digits) => format_significant(x, digits),
        }
    }
}

/// `%g`-style formatting: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Round first so that e.g. 9.999996 picks up the exponent of 10.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WALKING: &str = "group,value\n1,11\n1,10\n1,10\n1,11.75\n1,10.5\n1,15\n2,9\n2,9.5\n2,9.75\n2,10\n2,13\n2,9.5\n";

    #[test]
    fn walking_data_summary() {
        let data = RawTwoGroupData::from_reader(WALKING.as_bytes()).unwrap();
        let s = data.summary().unwrap();
        assert!((s.x1[0] - 11.375).abs() < 1e-12);
        assert!((s.x2[0] - 10.125).abs() < 1e-12);
        assert!((s.s2 - 3.59375).abs() < 1e-12);
        assert_eq!(s.k, 5.0);
        assert!((data.sd1() - 1.896).abs() < 5e-4);
    }

    #[test]
    fn crlf_and_round_trip() {
        let crlf = WALKING.replace('\n', "\r\n");
        let a = RawTwoGroupData::from_reader(crlf.as_bytes()).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let b = RawTwoGroupData::from_reader(buf.as_slice()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identical_groups() {
        let data = RawTwoGroupData::new(vec![1.0, 2.0, 4.0], vec![1.0, 2.0, 4.0]).unwrap();
        let s = data.summary().unwrap();
        assert_eq!(s.x1, s.x2);
    }

    #[test]
    fn ingestion_errors() {
        for bad in [
            "group,value\n1,1\n1,2\n2,3\n",
            "group,value\n1,1\n1,x\n2,3\n2,4\n",
            "group,value\n1,1\n1,2\n3,3\n2,4\n",
            "grp,val\n1,1\n",
        ] {
            assert!(matches!(RawTwoGroupData::from_reader(bad.as_bytes()), Err(Error::Input(_)) | Err(Error::Csv(_))), "{bad}");
        }
    }

    #[test]
    fn file_path_ingestion() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("walk.csv");
        std::fs::write(&path, WALKING).unwrap();
        assert_eq!(ingest_raw(&path).unwrap().k, 5.0);
        assert!(matches!(ingest_raw(dir.path().join("missing.csv")), Err(Error::Io(_))));
    }

    #[test]
    fn significant_digits() {
        let f = |x| format_significant(x, 6);
        assert_eq!(f(31.025_512_3), "31.0255");
        assert_eq!(f(0.389_643_9), "0.389644");
        assert_eq!(f(428.0), "428");
        assert_eq!(f(-1.5), "-1.5");
        assert_eq!(f(1.234_567_8e-7), "1.23457e-07");
        assert_eq!(f(9_999_999.0), "1e+07");
        assert_eq!(f(0.0), "0");
        assert_eq!(f(999_999.6), "1e+06");
        assert_eq!(Precision::Full.format(0.1), "0.1");
    }
}
