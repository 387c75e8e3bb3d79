//! CSV and JSON serialization of sweep tables.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::{Column, SweepTable, TableMeta};
use crate::error::{Error, Result};

pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Registry { kind: "format", tag: s.to_string() }),
        }
    }
}

/// `%.{digits}g`: shortest of fixed or exponent notation, trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn rounded(x: f64) -> f64 {
    format_sig(x, SIG_DIGITS).parse().unwrap_or(x)
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.column_names().join(","));
        out.push('\n');
        for r in 0..self.rows() {
            let row: Vec<String> = self.columns.iter().map(|c| format_sig(c.values[r], SIG_DIGITS)).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let mut cols = Map::new();
        for c in &self.columns {
            let vals: Vec<Value> = c
                .values
                .iter()
                .map(|&x| serde_json::Number::from_f64(rounded(x)).map_or(Value::Null, Value::Number))
                .collect();
            cols.insert(c.name.clone(), Value::Array(vals));
        }
        json!({ "meta": self.meta, "columns": cols })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<SweepTable> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Spec(format!("invalid table JSON: {e}")))?;
        let meta: TableMeta = serde_json::from_value(v.get("meta").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Spec(format!("invalid table meta: {e}")))?;
        let cols = v
            .get("columns")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Spec("table JSON has no columns object".into()))?;
        let mut columns = Vec::with_capacity(cols.len());
        for (name, vals) in cols {
            let arr = vals.as_array().ok_or_else(|| Error::Spec(format!("column {name} is not an array")))?;
            let values = arr
                .iter()
                .map(|x| match x {
                    Value::Null => Ok(f64::NAN),
                    other => other.as_f64().ok_or_else(|| Error::Spec(format!("column {name}: non-numeric {other}"))),
                })
                .collect::<Result<Vec<f64>>>()?;
            columns.push(Column { name: name.clone(), values });
        }
        if columns.windows(2).any(|w| w[0].values.len() != w[1].values.len()) {
            return Err(Error::Spec("columns differ in length".into()));
        }
        Ok(SweepTable { meta, columns })
    }

    pub fn render(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Csv => self.to_csv(),
            ExportFormat::Json => self.to_json(),
        }
    }
}

pub fn export(table: &SweepTable, format: ExportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, table.render(format))?;
    Ok(())
}
