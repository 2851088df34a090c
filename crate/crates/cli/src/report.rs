use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                write!(f, "\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Table {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Numeric values of a column, skipping text cells.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match &r[i] {
                Cell::Float(v) => Some(*v),
                Cell::Int(v) => Some(*v as f64),
                Cell::Text(_) => None,
            })
            .collect()
    }
}

/// Result of one experiment: a summary object and, for sweeps, a table of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: Value,
    pub table: Option<Table>,
}

fn header(config: &ExperimentConfig) -> Map<String, Value> {
    let mut config = config.clone();
    *config.output_path_mut() = None;
    let mut m = Map::new();
    m.insert("experiment".into(), json!(config.name()));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), serde_json::to_value(&config).expect("config serializes"));
    m
}

impl Report {
    /// CSV with a one-line `# {json}` header when there is a table, otherwise a JSON document.
    pub fn write<W: Write>(&self, config: &ExperimentConfig, out: &mut W) -> Result<()> {
        let mut head = header(config);
        head.insert("summary".into(), self.summary.clone());
        match &self.table {
            Some(t) => {
                writeln!(out, "# {}", Value::Object(head))?;
                writeln!(out, "{}", t.columns.join(","))?;
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            None => {
                serde_json::to_writer_pretty(&mut *out, &Value::Object(head)).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }

    pub fn to_string(&self, config: &ExperimentConfig) -> Result<String> {
        let mut buf = Vec::new();
        self.write(config, &mut buf)?;
        Ok(String::from_utf8(buf).expect("utf-8 output"))
    }
}
