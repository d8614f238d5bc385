//! Deterministic CSV and JSON writers. Floats are always written in
//! scientific notation with 9 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// `x` rounded to 9 significant digits, for JSON output.
pub fn round9(x: f64) -> f64 {
    if x.is_finite() {
        fmt_float(x).parse().unwrap_or(x)
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
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

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Config(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.render())
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// JSON document with the resolved configuration and the crate version.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, D: Serialize> {
    pub version: &'a str,
    pub command: &'a str,
    pub config: &'a C,
    pub data: D,
}

pub fn to_json<C: Serialize, D: Serialize>(command: &str, config: &C, data: D) -> Result<String> {
    let env = Envelope { version: VERSION, command, config, data };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

/// Converts a table into JSON records keyed by the header, floats rounded.
pub fn table_records(table: &CsvTable) -> Vec<serde_json::Map<String, serde_json::Value>> {
    table
        .rows
        .iter()
        .map(|row| {
            table
                .header
                .iter()
                .zip(row)
                .map(|(h, c)| {
                    let v = match c {
                        Cell::Float(x) => serde_json::Number::from_f64(round9(*x))
                            .map_or(serde_json::Value::Null, serde_json::Value::Number),
                        Cell::Int(i) => (*i).into(),
                        Cell::Text(s) => s.clone().into(),
                    };
                    (h.clone(), v)
                })
                .collect()
        })
        .collect()
}
