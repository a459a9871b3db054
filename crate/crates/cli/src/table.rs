use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Missing,
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => self.csv(precision),
            Format::Json => self.json(),
        }
    }

    fn csv(&self, precision: usize) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => sci(*x, precision),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(t) => csv_text(t),
                    Cell::Missing => String::new(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn json(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            s.push('{');
            for (i, (k, c)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{}:", json_str(k));
                match c {
                    Cell::Num(x) if x.is_finite() => {
                        let _ = write!(s, "{x:.16e}");
                    }
                    Cell::Int(v) => {
                        let _ = write!(s, "{v}");
                    }
                    Cell::Text(t) => s.push_str(&json_str(t)),
                    Cell::Num(_) | Cell::Missing => s.push_str("null"),
                }
            }
            s.push_str("}\n");
        }
        s
    }
}

/// `precision` significant digits in scientific notation.
fn sci(x: f64, precision: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", precision.saturating_sub(1), x)
    } else {
        x.to_string()
    }
}

fn csv_text(t: &str) -> String {
    if t.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

fn json_str(t: &str) -> String {
    serde_json::Value::String(t.to_string()).to_string()
}

/// Writes to `out` when given, else stdout.
pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let mut w = io::stdout().lock();
            w.write_all(text.as_bytes())?;
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["n", "x", "note"]);
        t.push(vec![0usize.into(), 0.1.into(), "a,\"b\"".into()]);
        t.push(vec![1usize.into(), f64::NAN.into(), Cell::Missing]);
        t
    }

    #[test]
    fn csv_has_header_and_quotes() {
        let s = sample().render(Format::Csv, 17);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "n,x,note");
        assert_eq!(lines[1], "0,1.0000000000000001e-1,\"a,\"\"b\"\"\"");
        assert_eq!(lines[2], "1,NaN,");
        assert_eq!(
            sample().render(Format::Csv, 3).lines().nth(1).unwrap(),
            "0,1.00e-1,\"a,\"\"b\"\"\""
        );
    }

    #[test]
    fn json_lines_parse() {
        let s = sample().render(Format::Json, 17);
        let rows: Vec<serde_json::Value> = s
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["x"].as_f64(), Some(0.1));
        assert_eq!(rows[0]["note"], "a,\"b\"");
        assert!(rows[1]["x"].is_null());
        assert!(s.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [std::f64::consts::PI, -1.0 / 3.0, 1e-300, 6.02214076e23] {
            assert_eq!(sci(x, 17).parse::<f64>().unwrap(), x);
        }
    }
}
