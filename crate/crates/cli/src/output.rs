use std::fs;
use std::io::Write;

use serde_json::{json, Value};

use crate::args::{Format, IoArgs};
use crate::error::CliError;

/// A report in both shapes; the caller's `--format` picks one.
pub struct Report {
    pub json: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Self {
            json,
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
        }
    }

    pub fn csv(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.csv_header = header;
        self.csv_rows = rows;
        self
    }
}

/// `quantity,value` rows from the scalar fields of a JSON object.
pub fn scalar_rows(v: &Value) -> Vec<Vec<String>> {
    v.as_object()
        .map(|o| {
            o.iter()
                .filter(|(_, x)| !x.is_array() && !x.is_object())
                .map(|(k, x)| vec![k.clone(), cell(x)])
                .collect()
        })
        .unwrap_or_default()
}

pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(command: &str, config: &Value, report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = json!({"command": command, "config": config, "report": report.json});
            let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = format!("# invariance {command} {config}\n");
            s.push_str(&report.csv_header.join(","));
            s.push('\n');
            for row in &report.csv_rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
    }
}

pub fn emit(text: &str, io: &IoArgs) -> Result<(), CliError> {
    match &io.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Usage(format!("cannot write report: {e}")))
        }
    }
}
