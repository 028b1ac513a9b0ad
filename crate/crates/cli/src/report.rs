//! Deterministic report serialization.
//!
//! JSON objects have sorted keys, big integers are decimal strings and floats
//! carry 17 significant digits. A list report puts one record per line.

use std::fmt::Write as _;

use binsum::Counterexample;
use serde_json::{Map, Value};

use crate::config::Format;

/// Report body: one object, a list of rows, or an object whose CSV form is a
/// separate table (a scan summary with its violation rows).
#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    Single {
        record: Value,
        columns: Vec<&'static str>,
    },
    Rows {
        rows: Vec<Value>,
        columns: Vec<&'static str>,
    },
    Nested {
        record: Value,
        rows: Vec<Value>,
        columns: Vec<&'static str>,
    },
}

impl Report {
    pub fn single(record: Value, columns: &[&'static str]) -> Self {
        Report::Single {
            record,
            columns: columns.to_vec(),
        }
    }

    pub fn rows(rows: Vec<Value>, columns: &[&'static str]) -> Self {
        Report::Rows {
            rows,
            columns: columns.to_vec(),
        }
    }

    pub fn nested(record: Value, rows: Vec<Value>, columns: &[&'static str]) -> Self {
        Report::Nested {
            record,
            rows,
            columns: columns.to_vec(),
        }
    }
}

/// Object builder; keys end up sorted because `serde_json::Map` is a `BTreeMap`.
#[derive(Default)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Self {
        Record(Map::new())
    }

    pub fn uint(mut self, key: &str, v: u64) -> Self {
        self.0.insert(key.to_string(), Value::from(v));
        self
    }

    /// Exact integer of any size, as a decimal string.
    pub fn big(mut self, key: &str, v: impl ToString) -> Self {
        self.0.insert(key.to_string(), Value::String(v.to_string()));
        self
    }

    pub fn str(mut self, key: &str, v: &str) -> Self {
        self.0.insert(key.to_string(), Value::String(v.to_string()));
        self
    }

    pub fn float(mut self, key: &str, v: f64) -> Self {
        let value = serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number);
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn bool(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.to_string(), Value::Bool(v));
        self
    }

    pub fn value(mut self, key: &str, v: Value) -> Self {
        self.0.insert(key.to_string(), v);
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn counterexample_record(c: &Counterexample) -> Value {
    let params: Map<String, Value> = c
        .parameters
        .iter()
        .map(|(name, v)| (name.clone(), Value::from(*v)))
        .collect();
    Record::new()
        .str("kind", "counterexample")
        .str("operation", &c.operation)
        .value("parameters", Value::Object(params))
        .str("detail", &c.detail)
        .build()
}

pub const COUNTEREXAMPLE_COLUMNS: &[&str] = &["kind", "operation", "parameters", "detail"];

pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => Ok(emit_json(report).into_bytes()),
        Format::Csv => emit_csv(report),
        Format::Text => Ok(emit_text(report).into_bytes()),
    }
}

/// `{:e}` with 17 significant digits; always a valid JSON number.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_json(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => write!(out, "{u}").unwrap(),
            (None, Some(i)) => write!(out, "{i}").unwrap(),
            _ => out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                write_json(out, item);
            }
            out.push('}');
        }
    }
}

pub fn emit_json(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Single { record, .. } | Report::Nested { record, .. } => {
            write_json(&mut out, record)
        }
        Report::Rows { rows, .. } if rows.is_empty() => out.push_str("[]"),
        Report::Rows { rows, .. } => {
            out.push_str("[\n");
            for (i, row) in rows.iter().enumerate() {
                write_json(&mut out, row);
                out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
            }
            out.push(']');
        }
    }
    out.push('\n');
    out
}

/// Flat cell text: scalars bare, nested values as compact JSON.
fn cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Bool(b)) => b.to_string(),
        Some(other) => {
            let mut s = String::new();
            write_json(&mut s, other);
            s
        }
    }
}

fn emit_csv(report: &Report) -> Result<Vec<u8>, String> {
    let (rows, columns): (Vec<&Value>, &[&str]) = match report {
        Report::Single { record, columns } => (vec![record], columns),
        Report::Rows { rows, columns } | Report::Nested { rows, columns, .. } => {
            (rows.iter().collect(), columns)
        }
    };
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(columns).map_err(|e| e.to_string())?;
    for row in rows {
        let cells: Vec<String> = columns.iter().map(|c| cell(row.get(*c))).collect();
        writer.write_record(&cells).map_err(|e| e.to_string())?;
    }
    writer.into_inner().map_err(|e| e.to_string())
}

fn emit_text(report: &Report) -> String {
    let rows: Vec<&Value> = match report {
        Report::Single { record, .. } | Report::Nested { record, .. } => vec![record],
        Report::Rows { rows, .. } => rows.iter().collect(),
    };
    let mut out = String::new();
    for row in rows {
        match row {
            Value::Object(map) => {
                let parts: Vec<String> = map
                    .iter()
                    .map(|(k, v)| format!("{k}={}", cell(Some(v))))
                    .collect();
                out.push_str(&parts.join("  "));
            }
            other => out.push_str(&cell(Some(other))),
        }
        out.push('\n');
    }
    if out.is_empty() {
        out.push_str("(no results)\n");
    }
    out
}
