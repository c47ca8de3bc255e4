use serde::Serialize;
use serde_json::{Map, Value};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command's result before rendering.
///
/// The JSON form is the envelope `{command, parameters, version, records,
/// notes}` plus `summary` when the command has one. Keys are sorted, so the
/// bytes depend only on the inputs and the version.
pub struct Report {
    pub command: String,
    pub parameters: Value,
    pub records: Vec<Value>,
    pub summary: Option<Value>,
    pub notes: Vec<String>,
    pub text: String,
    pub csv: Option<Table>,
}

/// Flat rows for the CSV rendering of scans.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, parameters: Value) -> Self {
        Report {
            command: command.to_string(),
            parameters,
            records: Vec::new(),
            summary: None,
            notes: Vec::new(),
            text: String::new(),
            csv: None,
        }
    }

    pub fn envelope(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command.clone()));
        m.insert("parameters".into(), self.parameters.clone());
        m.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        m.insert("records".into(), Value::Array(self.records.clone()));
        if let Some(s) = &self.summary {
            m.insert("summary".into(), s.clone());
        }
        m.insert(
            "notes".into(),
            Value::Array(self.notes.iter().cloned().map(Value::from).collect()),
        );
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                Ok(s)
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope())
                    .map_err(|e| Failure::Usage(format!("cannot serialize report: {e}")))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let table = self.csv.as_ref().ok_or_else(|| {
                    Failure::Usage(format!(
                        "--format csv is only available for scan, not {}",
                        self.command
                    ))
                })?;
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Failure::Usage(format!("cannot write csv: {e}"));
                w.write_record(&table.header).map_err(io)?;
                for row in &table.rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| Failure::Usage(format!("cannot write csv: {e}")))?;
                String::from_utf8(bytes).map_err(|e| Failure::Usage(e.to_string()))
            }
        }
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}
