//! Result tables and their CSV / JSON renderings.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::Format;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(x.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// `a;b;c`, for list-valued inputs in a single CSV cell.
pub fn join(values: &[f64]) -> Cell {
    Cell::Text(
        values
            .iter()
            .map(|v| format!("{v:e}"))
            .collect::<Vec<_>>()
            .join(";"),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Drops a column in place, if present.
    pub fn drop_column(&mut self, name: &str) {
        if let Some(i) = self.column(name) {
            self.columns.remove(i);
            for row in &mut self.rows {
                row.remove(i);
            }
        }
    }

    /// CSV preceded by `# ` comment lines carrying `header` (the resolved
    /// configuration as one JSON line).
    pub fn write_csv<W: Write>(&self, out: W, header: &Value) -> Result<()> {
        let mut out = out;
        writeln!(out, "# ness-chain {}", env!("CARGO_PKG_VERSION")).map_err(io)?;
        writeln!(out, "# config: {header}").map_err(io)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W, header: &Value) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": header,
            "columns": self.columns,
            "rows": rows,
        });
        let mut out = out;
        serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Config(e.to_string()))?;
        writeln!(out).map_err(io)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: Format, header: &Value) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out, header),
            Format::Json => self.write_json(out, header),
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}
