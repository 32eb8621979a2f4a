//! Tabular reports with a fixed column header and a summary block.

use std::io::Write;

use serde_json::{Map, Value};
use sparsenum_core::BigNat;

use crate::config::OutputFormat;
use crate::error::HarnessError;

/// Marker written wherever a quantity falls outside its domain.
pub const UNDEFINED: &str = "undefined";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigNat),
    Signed(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Undefined,
}

impl Cell {
    pub fn opt_float(v: Option<f64>) -> Self {
        v.map_or(Cell::Undefined, Cell::Float)
    }

    pub fn opt_bool(v: Option<bool>) -> Self {
        v.map_or(Cell::Undefined, Cell::Bool)
    }

    pub fn int(v: impl Into<BigNat>) -> Self {
        Cell::Int(v.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Signed(n) => n.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Undefined => UNDEFINED.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => match u64::try_from(n) {
                Ok(v) => Value::from(v),
                Err(_) => Value::from(n.to_string()),
            },
            Cell::Signed(n) => Value::from(*n),
            Cell::Float(x) => serde_json::Number::from_f64(*x)
                .map(Value::Number)
                .unwrap_or_else(|| Value::from(format_float(*x))),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Undefined => Value::from(UNDEFINED),
        }
    }
}

/// Shortest round-trip decimal form; identical on every platform.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Report {
    pub fn new(experiment: impl Into<String>, columns: Vec<&'static str>) -> Self {
        Self {
            experiment: experiment.into(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push_summary(&mut self, key: impl Into<String>, value: Cell) {
        self.summary.push((key.into(), value));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// CSV: the header, one line per row, then the summary as `# key,value` comment lines.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let mut out = w.into_inner().map_err(|e| e.into_error())?;
        for (k, v) in &self.summary {
            writeln!(out, "# {k},{}", v.render())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let mut top = Map::new();
        top.insert("experiment".into(), Value::from(self.experiment.clone()));
        top.insert("rows".into(), Value::Array(rows));
        top.insert("summary".into(), Value::Object(summary));
        Value::Object(top)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), HarnessError> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, out: W) -> Result<(), HarnessError> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => self.write_json(out),
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>, HarnessError> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }
}

/// Adds `<prefix>_min`, `_p50`, `_p90`, `_max` over the given values (nearest-rank percentiles).
pub fn push_distribution(report: &mut Report, prefix: &str, values: &[f64]) {
    if values.is_empty() {
        for suffix in ["min", "p50", "p90", "max"] {
            report.push_summary(format!("{prefix}_{suffix}"), Cell::Undefined);
        }
        return;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = |q: f64| {
        let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
        sorted[idx]
    };
    report.push_summary(format!("{prefix}_min"), Cell::Float(sorted[0]));
    report.push_summary(format!("{prefix}_p50"), Cell::Float(rank(0.5)));
    report.push_summary(format!("{prefix}_p90"), Cell::Float(rank(0.9)));
    report.push_summary(
        format!("{prefix}_max"),
        Cell::Float(*sorted.last().unwrap()),
    );
}
