//! Deterministic CSV tables and the per-run JSON summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use moutard_core::Check;
use serde::Serialize;

use crate::config::RunConfig;

/// Formats a float with 17 significant digits; non-finite values as
/// `nan`, `inf`, `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(usize),
    B(bool),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => fmt_f64(*v),
            Cell::U(v) => v.to_string(),
            Cell::B(v) => v.to_string(),
            Cell::S(v) => v.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(
            row.len(),
            self.header.len(),
            "row width for table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// One command's result: echoed parameters, written tables and checks.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: RunConfig,
    pub tables: Vec<String>,
    pub summary: Vec<Check>,
    pub passed: bool,
    pub details: serde_json::Value,
    #[serde(skip)]
    pub table_data: Vec<Table>,
}

impl OutputRecord {
    pub fn new(
        command: &str,
        params: &RunConfig,
        tables: Vec<Table>,
        summary: Vec<Check>,
        details: serde_json::Value,
    ) -> Self {
        let passed = summary.iter().all(|c| c.pass);
        Self {
            command: command.into(),
            params: params.clone(),
            tables: tables
                .iter()
                .map(|t| format!("{command}_{}.csv", t.name))
                .collect(),
            summary,
            passed,
            details,
            table_data: tables,
        }
    }

    /// Writes every table and `<command>_summary.json` into `dir`; returns
    /// the written paths in order.
    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (file, table) in self.tables.iter().zip(&self.table_data) {
            let path = dir.join(file);
            fs::write(&path, table.to_csv())?;
            written.push(path);
        }
        let path = dir.join(format!("{}_summary.json", self.command));
        let mut json = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        json.push('\n');
        fs::write(&path, json)?;
        written.push(path);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_seventeen_digits() {
        for v in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, -0.0] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
            let mantissa = s
                .split('e')
                .next()
                .unwrap()
                .trim_start_matches('-')
                .replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_uses_newline_terminators() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(vec![1.0.into(), true.into()]);
        assert_eq!(t.to_csv(), "a,b\n1.0000000000000000e0,true\n");
    }
}
