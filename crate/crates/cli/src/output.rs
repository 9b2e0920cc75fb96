use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use carries_core::exact::{format_rational, to_f64};
use carries_core::{ExactMatrix, ProbVector, Rational};
use serde_json::{json, Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// Rows for CSV and text output.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a command produced: a JSON document and the same data as a table.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub json: Map<String, Value>,
    pub table: Table,
}

impl Report {
    pub fn new(command: &str, table: Table) -> Self {
        Self {
            command: command.to_string(),
            json: Map::new(),
            table,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.json.insert(key.to_string(), value);
        self
    }
}

pub fn rat(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix_json(m: &ExactMatrix) -> Value {
    Value::Array(m.row_vectors().map(rats).collect())
}

/// A float with 15 significant digits, trailing zeros removed.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        return format!("{x:.14e}");
    }
    let decimals = (14 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn dec(q: &Rational) -> String {
    sig15(to_f64(q))
}

/// `i, j, exact, decimal` rows of a matrix.
pub fn matrix_table(m: &ExactMatrix) -> Table {
    let mut t = Table::new(&["i", "j", "exact", "decimal"]);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let q = &m[(i, j)];
            t.push(vec![i.to_string(), j.to_string(), format_rational(q), dec(q)]);
        }
    }
    t
}

/// `state, exact, decimal` rows of a law.
pub fn law_table(p: &ProbVector) -> Table {
    let mut t = Table::new(&["state", "exact", "decimal"]);
    for (k, q) in p.entries().iter().enumerate() {
        t.push(vec![k.to_string(), format_rational(q), dec(q)]);
    }
    t
}

pub fn emit(report: Report, format: Format, out: Option<&Path>) -> Result<()> {
    let mut buffer = Vec::new();
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
            doc.insert("command".into(), json!(report.command));
            doc.extend(report.json);
            serde_json::to_writer_pretty(&mut buffer, &Value::Object(doc))?;
            buffer.push(b'\n');
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buffer);
            w.write_record(&report.table.headers)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => write_text(&report.table, &mut buffer)?,
    }
    match out {
        Some(path) => fs::write(path, &buffer).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&buffer)?,
    }
    Ok(())
}

fn write_text(table: &Table, w: &mut impl Write) -> Result<()> {
    let columns = table.headers.len();
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (k, cell) in row.iter().enumerate().take(columns) {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &width)| format!("{c:<width$}"))
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    writeln!(w, "{}", line(&table.headers))?;
    for row in &table.rows {
        writeln!(w, "{}", line(row))?;
    }
    Ok(())
}
