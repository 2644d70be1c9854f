//! Rendering of command results as JSON documents or CSV tables.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A command result in both output shapes.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(result: &impl Serialize, header: Vec<&'static str>) -> Result<Self> {
        Ok(Report {
            json: serde_json::to_value(result)?,
            header,
            rows: Vec::new(),
        })
    }

    pub fn row(mut self, cells: Vec<String>) -> Self {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
        self
    }

    pub fn rows(mut self, rows: impl IntoIterator<Item = Vec<String>>) -> Self {
        for r in rows {
            self = self.row(r);
        }
        self
    }
}

/// The JSON document: tool name and version, the resolved configuration,
/// the result, and the elapsed time if it was requested.
pub fn render_json(config: &Value, report: &Report, seconds: Option<f64>) -> Result<String> {
    let mut doc = json!({
        "tool": "noodle",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "result": report.json,
    });
    if let Some(s) = seconds {
        doc["wall_clock_seconds"] = json!(s);
    }
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// The CSV table, preceded by `#` comment lines carrying the same metadata
/// as the JSON document.
pub fn render_csv(config: &Value, report: &Report, seconds: Option<f64>) -> Result<String> {
    let mut out = format!(
        "# noodle {}\n# config {}\n",
        env!("CARGO_PKG_VERSION"),
        serde_json::to_string(config)?
    );
    if let Some(s) = seconds {
        out.push_str(&format!("# wall_clock_seconds {s}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&report.header).map_err(csv_err)?;
    for r in &report.rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
