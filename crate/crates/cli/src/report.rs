use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a subcommand produced, before rendering.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub witnesses: Option<Value>,
    pub stats: Value,
    /// Flat rows for CSV output.
    pub rows: Vec<Map<String, Value>>,
    /// Mathematical assertions that failed; nonempty means exit 4.
    pub failures: Vec<String>,
    /// Format used when `--output` is not given.
    pub default_format: Format,
}

impl Report {
    pub fn new(command: &'static str, params: impl Serialize, default_format: Format) -> Self {
        Report {
            command,
            params: to_value(params),
            result: Value::Null,
            witnesses: None,
            stats: json!({}),
            rows: Vec::new(),
            failures: Vec::new(),
            default_format,
        }
    }

    pub fn render(&self, format: Option<Format>, out: &mut impl Write) -> std::io::Result<()> {
        match format.unwrap_or(self.default_format) {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("command".into(), Value::from(self.command));
                doc.insert("params".into(), self.params.clone());
                doc.insert("result".into(), self.result.clone());
                if let Some(w) = &self.witnesses {
                    doc.insert("witnesses".into(), w.clone());
                }
                doc.insert("stats".into(), self.stats.clone());
                doc.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
                serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                if let Some(first) = self.rows.first() {
                    w.write_record(first.keys())?;
                }
                for row in &self.rows {
                    w.write_record(row.values().map(cell))?;
                }
                w.flush()
            }
        }
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Flatten a serializable struct into one CSV row; nested values become
/// compact JSON text.
pub fn row(v: impl Serialize) -> Map<String, Value> {
    match to_value(v) {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_array) => items
            .iter()
            .map(|t| {
                let parts: Vec<String> = t.as_array().unwrap().iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
