//! Tabular output: CSV with a header row or a JSON array of objects.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Int(v) => Value::Number((*v).into()),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// Homogeneous rows under fixed column names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Emitted as `# key=value` lines above the CSV header.
    pub metadata: Vec<(String, f64)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), ..Table::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v:.16e}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes `table` to `path`, creating parent directories.
pub fn write_table(table: &Table, format: Format, path: &Path) -> Result<(), CliError> {
    let text = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()?,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    let mut f = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["omega", "value", "label"]);
        t.push(vec![0.1.into(), (1.0 / 3.0).into(), "a".into()]);
        t.push(vec![2.0.into(), (-1e-300).into(), "b,c".into()]);
        t.push(vec![0.225_933_681_620_533_62.into(), 0.1.into(), "".into()]);
        t
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n");
        assert_eq!(t.to_json().unwrap().trim(), "[]");
    }

    #[test]
    fn one_row_is_two_lines() {
        let mut t = Table::new(&["x"]);
        t.push(vec![1.5.into()]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(!csv.contains('\r'));
        assert_eq!(csv, "x\n1.5000000000000000e0\n");
    }

    #[test]
    fn csv_keeps_full_precision() {
        let csv = sample().to_csv().unwrap();
        let second = csv.lines().nth(1).unwrap();
        let v: f64 = second.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 1.0 / 3.0);
        assert!(csv.contains("\"b,c\""));
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let parsed: Vec<Map<String, Value>> = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(parsed.len(), 3);
        for (row, obj) in t.rows.iter().zip(&parsed) {
            assert_eq!(obj.keys().cloned().collect::<Vec<_>>(), t.columns);
            for (cell, col) in row.iter().zip(&t.columns) {
                match cell {
                    Cell::Num(v) => assert_eq!(obj[col].as_f64().unwrap(), *v),
                    Cell::Int(v) => assert_eq!(obj[col].as_i64().unwrap(), *v),
                    Cell::Text(s) => assert_eq!(obj[col].as_str().unwrap(), s),
                }
            }
        }
    }

    #[test]
    fn metadata_precedes_header() {
        let mut t = Table::new(&["t"]);
        t.metadata.push(("fitted_slope".into(), 2.0));
        assert!(t.to_csv().unwrap().starts_with("# fitted_slope=2.0000000000000000e0\nt\n"));
    }
}
