use std::collections::BTreeMap;
use std::io::Write;

use exkn::exact_geom::{format_rational, to_f64, Rational};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Rational,
    Integer,
    Float,
    Text,
    Bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub kind: Kind,
    pub lossy: bool,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Rat(Rational),
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rat(r)
    }
}

impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Rat(r.clone())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(x: $t) -> Self {
                Cell::Int(x as i64)
            }
        }
    )*};
}
int_cell!(u32, u64, usize, i64);

/// One command's result: parameters plus a typed table.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[(&str, Kind)]) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            columns: columns
                .iter()
                .map(|&(name, kind)| Column {
                    name: name.to_string(),
                    kind,
                    lossy: kind == Kind::Float,
                })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for {}", self.command);
        self.rows.push(row);
    }

    pub fn write_json<W: Write>(&self, mut w: W, precision: usize) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Json<'a> {
            schema_version: &'static str,
            command: &'a str,
            parameters: &'a BTreeMap<String, String>,
            columns: &'a [Column],
            lossy_columns: Vec<&'a str>,
            rows: Vec<Vec<Value>>,
        }
        let doc = Json {
            schema_version: SCHEMA_VERSION,
            command: &self.command,
            parameters: &self.parameters,
            columns: &self.columns,
            lossy_columns: self.columns.iter().filter(|c| c.lossy).map(|c| c.name.as_str()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| json_cell(c, precision)).collect())
                .collect(),
        };
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, w: W, precision: usize) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            out.write_record(row.iter().map(|c| text_cell(c, precision)))?;
        }
        out.flush()
    }
}

fn float_text(x: f64, precision: usize) -> String {
    format!("{x:.precision$}")
}

fn text_cell(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Rat(r) => format_rational(r),
        Cell::Int(i) => i.to_string(),
        Cell::Float(x) => float_text(*x, precision),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Rat(r) => Value::String(format_rational(r)),
        Cell::Int(i) => Value::from(*i),
        Cell::Float(x) => float_text(*x, precision)
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map_or(Value::Null, Value::Number),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Empty => Value::Null,
    }
}

/// A rational cell followed by its lossy float rendering.
pub fn exact_and_float(r: &Rational) -> [Cell; 2] {
    [Cell::Rat(r.clone()), Cell::Float(to_f64(r))]
}
