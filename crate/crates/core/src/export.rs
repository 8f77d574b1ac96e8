//! Tabular datasets with a run-metadata header, written as CSV or as a JSON
//! mirror.
//!
//! CSV layout:
//!
//! ```text
//! # thermoprobe 0.1.0 format 1
//! # metadata: {"kind":"profile",...}
//! x,u
//! 0,100
//! ...
//! ```
//!
//! Column order and names are part of the format; changing them bumps
//! [`FORMAT_VERSION`].

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Result;
use crate::model::RodConfig;

pub const TOOL_NAME: &str = "thermoprobe";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FORMAT_VERSION: u32 = 1;

/// Default number of significant digits for printed numbers.
pub const DEFAULT_PRECISION: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub format_version: u32,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RodConfig>,
    /// Free-form run parameters (conductivities, seeds, generator names).
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub parameters: Map<String, Value>,
}

impl RunMetadata {
    pub fn new(kind: impl Into<String>, config: Option<RodConfig>) -> Self {
        Self {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            format_version: FORMAT_VERSION,
            kind: kind.into(),
            config,
            parameters: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }
}

/// Named numeric columns; missing values are written as empty cells / null.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub metadata: RunMetadata,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Dataset {
    pub fn new(metadata: RunMetadata, columns: Vec<&'static str>) -> Self {
        Self {
            metadata,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W, precision: usize) -> Result<()> {
        writeln!(out, "# {TOOL_NAME} {TOOL_VERSION} format {FORMAT_VERSION}")?;
        writeln!(
            out,
            "# metadata: {}",
            serde_json::to_string(&self.metadata)?
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| {
                v.map(|x| format_significant(x, precision))
                    .unwrap_or_default()
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json_value(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| ((*c).to_owned(), v.map_or(Value::Null, Value::from)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": Value::Array(rows),
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json_value())?;
        writeln!(out)?;
        Ok(())
    }
}

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// fixed notation for moderate exponents, scientific otherwise, trailing
/// zeros trimmed.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so that e.g. 9.9999999 → 10 picks the right exponent.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
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

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(443.4869603, 6), "443.487");
        assert_eq!(format_significant(656.054279749, 6), "656.054");
        assert_eq!(format_significant(100.0, 6), "100");
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(-2.5, 6), "-2.5");
        assert_eq!(format_significant(1234567.0, 6), "1.23457e6");
        assert_eq!(format_significant(0.000012345678, 6), "1.23457e-5");
        assert_eq!(format_significant(0.00012345678, 6), "0.000123457");
        assert_eq!(format_significant(9.9999999, 3), "10");
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [443.48696038819185, 1.0 / 3.0, 6.02e23, -1e-7] {
            let s = format_significant(x, 17);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_and_json_layout() {
        let meta = RunMetadata::new("demo", None).with("seed", 7u64);
        let mut ds = Dataset::new(meta, vec!["a", "b"]);
        ds.push(vec![Some(1.0), None]);
        ds.push(vec![Some(0.5), Some(2.0)]);
        let mut buf = Vec::new();
        ds.write_csv(&mut buf, 6).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert!(lines[0].starts_with("# thermoprobe "));
        assert!(lines[1].starts_with("# metadata: {"));
        assert!(lines[1].contains("\"seed\":7"));
        assert_eq!(&lines[2..], &["a,b", "1,", "0.5,2"]);

        let json = ds.to_json_value();
        assert_eq!(json["rows"][0]["b"], Value::Null);
        assert_eq!(json["rows"][1]["b"], Value::from(2.0));
        assert_eq!(
            json["metadata"]["format_version"],
            Value::from(FORMAT_VERSION)
        );
    }
}
