use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;

use super::ExperimentConfig;
use crate::error::{Error, Result};

/// One report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i128),
    Real(f64),
    Text(String),
    /// Not applicable.
    Na,
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Real(x) if x.is_finite() => Some(*x),
            _ => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Real(x) => fmt_real(*x),
            Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Value::Text(s) => s.clone(),
            Value::Na => ".".into(),
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Int(b as i128)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Self {
                Value::Int(v as i128)
            }
        }
    )*};
}
int_value!(u32, u64, usize, i64, u128);

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Na, Into::into)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Int(i) => s.serialize_i128(*i),
            Value::Real(x) if x.is_finite() => {
                s.serialize_f64(fmt_real(*x).parse().expect("formatted float parses"))
            }
            Value::Text(t) => s.serialize_str(t),
            Value::Real(_) | Value::Na => s.serialize_none(),
        }
    }
}

/// A real with 12 significant digits, trailing zeros trimmed; `.` if not finite.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return ".".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{e}")
    }
}

/// Provenance block of a report.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct ReportHeader {
    pub experiment: String,
    pub version: String,
    /// Unix seconds; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub seed: u64,
    pub notes: Vec<String>,
}

/// Rows of named measurements with a summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub header: ReportHeader,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

struct RowRef<'a>(&'a [String], &'a [Value]);

impl Serialize for RowRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

struct Pairs<'a>(&'a [(String, Value)]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl ExperimentReport {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn summary_value(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Column header, rows and summary: everything that must be reproducible.
    pub fn body_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# summary {k}={}", v.csv());
        }
        out
    }

    /// Full CSV: `#` metadata lines, then the body.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let h = &self.header;
        let _ = writeln!(out, "# experiment {}", h.experiment);
        let _ = writeln!(out, "# version {}", h.version);
        let _ = writeln!(out, "# timestamp {}", h.timestamp);
        let _ = writeln!(out, "# seed {}", h.seed);
        let config = serde_json::to_string(&self.config).expect("config serializes");
        let _ = writeln!(out, "# config {config}");
        for note in &h.notes {
            let _ = writeln!(out, "# note {note}");
        }
        out.push_str(&self.body_csv());
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<RowRef> = self.rows.iter().map(|r| RowRef(&self.columns, r)).collect();
        serde_json::json!({
            "config": self.config,
            "header": self.header,
            "rows": rows,
            "summary": Pairs(&self.summary),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line: experiment, row count and summary values.
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self.summary.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect();
        format!("{} rows={} {}", self.header.experiment, self.rows.len(), parts.join(" "))
    }

    /// Writes CSV, or JSON when the path ends in `.json`.
    pub fn write_to(&self, path: &std::path::Path) -> Result<()> {
        let text = if path.extension().is_some_and(|e| e == "json") {
            self.to_json()
        } else {
            self.to_csv()
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}
