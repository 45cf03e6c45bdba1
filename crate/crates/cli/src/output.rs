//! Tabular output shared by every subcommand.
//!
//! A command produces a list of named sections, each a table. Plain output
//! aligns columns, CSV writes one header plus rows per section (sections
//! separated by a blank line) and JSON writes an object keyed by section
//! name whose values are arrays of row objects. Floats are printed with
//! Rust's shortest round-trip formatting in every format, so a number read
//! back from JSON equals the one shown in the plain table.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// Arbitrary-size integer, kept as decimal text so JSON stays lossless.
    Big(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Big(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => float_text(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Big(s) | Cell::Text(s) => Value::from(s.as_str()),
            Cell::Float(v) if v.is_finite() => Value::from(*v),
            Cell::Float(v) => Value::from(v.to_string()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest round-trip text, switching to exponent form for very small or
/// very large magnitudes.
fn float_text(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Section {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "section {}", self.name);
        self.rows.push(row);
    }

    /// Two-column key/value section.
    pub fn pairs(name: &str, pairs: Vec<(&str, Cell)>) -> Self {
        let columns: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
        let mut s = Section::new(name, &columns);
        s.push(pairs.into_iter().map(|(_, v)| v).collect());
        s
    }
}

pub fn render(sections: &[Section], format: Format, out: &mut impl Write) -> Result<()> {
    match format {
        Format::Plain => render_plain(sections, out),
        Format::Csv => render_csv(sections, out),
        Format::Json => {
            let mut top = Map::new();
            for s in sections {
                let rows = s
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            s.columns
                                .iter()
                                .cloned()
                                .zip(row.iter().map(Cell::json))
                                .collect(),
                        )
                    })
                    .collect();
                top.insert(s.name.clone(), Value::Array(rows));
            }
            serde_json::to_writer_pretty(&mut *out, &Value::Object(top))?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn render_plain(sections: &[Section], out: &mut impl Write) -> Result<()> {
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        if sections.len() > 1 {
            writeln!(out, "{}:", s.name)?;
        }
        // a single-row section reads better vertically
        if s.rows.len() == 1 && s.columns.len() > 3 {
            let width = s.columns.iter().map(String::len).max().unwrap_or(0);
            for (c, v) in s.columns.iter().zip(&s.rows[0]) {
                writeln!(out, "  {c:<width$}  {}", v.plain())?;
            }
            continue;
        }
        let text: Vec<Vec<String>> = s
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::plain).collect())
            .collect();
        let widths: Vec<usize> = (0..s.columns.len())
            .map(|j| {
                text.iter()
                    .map(|r| r[j].len())
                    .chain([s.columns[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(&s.columns))?;
        for r in &text {
            writeln!(out, "{}", line(r))?;
        }
    }
    Ok(())
}

fn render_csv(sections: &[Section], out: &mut impl Write) -> Result<()> {
    for (i, s) in sections.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(&s.columns)?;
        for r in &s.rows {
            w.write_record(r.iter().map(Cell::plain))?;
        }
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Section> {
        let mut s = Section::new("rows", &["k", "p", "big"]);
        s.push(vec![
            Cell::Int(3),
            Cell::Float(0.1 + 0.2),
            Cell::Big("123456789012345678901234567890".into()),
        ]);
        vec![s]
    }

    #[test]
    fn json_floats_match_plain() {
        let mut plain = Vec::new();
        render(&sample(), Format::Plain, &mut plain).unwrap();
        let plain = String::from_utf8(plain).unwrap();
        assert!(plain.contains("0.30000000000000004"));

        let mut json = Vec::new();
        render(&sample(), Format::Json, &mut json).unwrap();
        let v: Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["rows"][0]["p"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(v["rows"][0]["big"], "123456789012345678901234567890");
    }

    #[test]
    fn csv_has_header() {
        let mut buf = Vec::new();
        render(&sample(), Format::Csv, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("k,p,big\n3,"));
    }
}
