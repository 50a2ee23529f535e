//! Output envelope and its JSON, CSV and plain-text renderings.

use std::fmt::Display;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

/// Version of the JSON envelope layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rows for the CSV projection.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    params: &'a Map<String, Value>,
    result: &'a Value,
    diagnostics: &'a [String],
}

/// A command result before rendering.
#[derive(Clone, Debug)]
pub struct Output {
    pub command: String,
    pub params: Map<String, Value>,
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub table: Option<Table>,
    pub text: Option<String>,
}

impl Output {
    pub fn new(command: &str, result: Value) -> Self {
        Self { command: command.into(), params: Map::new(), result, diagnostics: Vec::new(), table: None, text: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn warn(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command: &self.command,
                    params: &self.params,
                    result: &self.result,
                    diagnostics: &self.diagnostics,
                };
                let mut s = serde_json::to_string_pretty(&env).expect("serialisable envelope");
                s.push('\n');
                s
            }
            Format::Csv => {
                let table = self.table.clone().unwrap_or_else(|| flatten(&self.result));
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.header).expect("in-memory write");
                for row in &table.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
            }
            Format::Text => match &self.text {
                Some(t) if t.ends_with('\n') => t.clone(),
                Some(t) => format!("{t}\n"),
                None => format!("{}\n", serde_json::to_string_pretty(&self.result).expect("serialisable result")),
            },
        }
    }
}

/// `key,value` rows for the scalar leaves of a JSON value, with dotted paths.
fn flatten(v: &Value) -> Table {
    let mut t = Table::new(&["key", "value"]);
    walk("", v, &mut t);
    t
}

fn walk(prefix: &str, v: &Value, t: &mut Table) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, t)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, t)),
        Value::String(s) => t.push(vec![prefix.to_string(), s.clone()]),
        other => t.push(vec![prefix.to_string(), other.to_string()]),
    }
}

/// Decimal strings for exact integers and rationals.
pub fn strings<T: Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}
