use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use stpred_core::io::Precision;

use crate::{OutputArgs, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn precision(args: &OutputArgs) -> Precision {
    if args.full_precision { Precision::Full } else { Precision::REPORT }
}

/// Rounds every float in a JSON tree to the requested precision.
pub fn round_json(value: Value, precision: Precision) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            precision.format(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Number(n), Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(|v| round_json(v, precision)).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v, precision))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T, precision: Precision) -> Result<String> {
    let tree = serde_json::to_value(value).map_err(stpred_core::Error::from)?;
    let mut text = serde_json::to_string_pretty(&round_json(tree, precision)).map_err(stpred_core::Error::from)?;
    text.push('\n');
    Ok(text)
}

/// Runs `body` against the `--out` file, or `stdout` when none is given.
pub fn with_sink(out: Option<&Path>, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            body(stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_nested_floats() {
        let v = serde_json::json!({"a": 1.23456789, "b": [0.000123456789, 3], "c": "x"});
        let r = round_json(v, Precision::REPORT);
        assert_eq!(r, serde_json::json!({"a": 1.23457, "b": [0.000123457, 3], "c": "x"}));
    }
}
