//! Report tables: CSV with a header row, or a JSON mirror.

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Real,
    Text,
    Bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u128> for Cell {
    fn from(x: u128) -> Self {
        i128::try_from(x).map_or(Cell::Empty, Cell::Int)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// `%.15g`: 15 significant digits, trailing zeros dropped, scientific
/// notation outside `[1e-4, 1e15)`.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    trim_zeros(&format!("{x:.*}", (14 - exp) as usize)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn parse(text: &str, kind: Kind) -> Option<Cell> {
        if text.is_empty() {
            return Some(Cell::Empty);
        }
        Some(match kind {
            Kind::Int => Cell::Int(text.parse().ok()?),
            Kind::Real => Cell::Real(text.parse().ok()?),
            Kind::Text => Cell::Text(text.to_string()),
            Kind::Bool => Cell::Bool(text.parse().ok()?),
        })
    }

    fn to_json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Int(i) => i64::try_from(*i).map_or_else(|_| Value::String(i.to_string()), Value::from),
            // Round through the printed form so both formats agree.
            Cell::Real(x) => serde_json::Number::from_f64(format_real(*x).parse().unwrap_or(*x))
                .map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<(String, Kind)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, Kind)]) -> Self {
        Self {
            columns: columns.iter().map(|(n, k)| (n.to_string(), *k)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|(n, _)| n.as_str()))
            .expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Reads a table written by [`Table::to_csv`] with the given schema.
    pub fn from_csv(text: &str, columns: &[(String, Kind)]) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| CliError::Table(e.to_string()))?;
        if header.len() != columns.len() || header.iter().zip(columns).any(|(h, (c, _))| h != c) {
            return Err(CliError::Table("header does not match the schema".into()));
        }
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(|e| CliError::Table(e.to_string()))?;
            let row = record
                .iter()
                .zip(columns)
                .map(|(text, (name, kind))| {
                    Cell::parse(text, *kind)
                        .ok_or_else(|| CliError::Table(format!("bad value `{text}` in column {name}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self {
            columns: columns.to_vec(),
            rows,
        })
    }

    /// `{"columns": [...], "rows": [[...], ...]}`
    pub fn to_structured(&self) -> String {
        let doc = serde_json::json!({
            "columns": self.columns.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
            "rows": self.rows
                .iter()
                .map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}
