//! Tables of results and their CSV / JSON renderings.
//!
//! Every floating-point value is printed in scientific notation with a fixed
//! number of significant digits, so that output is byte-stable and a value
//! parsed back from a report prints identically.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

/// Largest number of significant digits that still round-trips an `f64`.
pub const MAX_SIG_DIGITS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// `v` with `sig` significant digits and a signed exponent, e.g.
/// `1.2500000000000000e-1` or `3.00e+2`; `None` for NaN and infinities.
pub fn sci(v: f64, sig: usize) -> Option<String> {
    if !v.is_finite() {
        return None;
    }
    let s = format!("{:.*e}", sig.clamp(1, MAX_SIG_DIGITS) - 1, v);
    Some(match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self, sig: usize) -> String {
        match self {
            Cell::Num(v) => sci(*v, sig).unwrap_or_default(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self, sig: usize) -> Value {
        match self {
            Cell::Num(v) => number(*v, sig),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// JSON number carrying exactly the text of [`sci`], or `null`.
pub fn number(v: f64, sig: usize) -> Value {
    match sci(v, sig) {
        Some(s) => {
            Value::Number(Number::from_str(&s).expect("formatted float is a valid JSON number"))
        }
        None => Value::Null,
    }
}

/// Column names plus rows in grid (or plan) order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, sig: usize) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.csv(sig)))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }

    /// `{ "meta": …, "<key>": [ {column: value, …}, … ] }`.
    pub fn to_json(&self, meta: Map<String, Value>, key: &str, sig: usize) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| c.json(sig)))
                        .collect(),
                )
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(meta));
        top.insert(key.into(), Value::Array(rows));
        let mut s =
            serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn render(
        &self,
        format: Format,
        meta: Map<String, Value>,
        key: &str,
        sig: usize,
    ) -> String {
        match format {
            Format::Csv => self.to_csv(sig),
            Format::Json => self.to_json(meta, key, sig),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scientific_formatting() {
        assert_eq!(sci(0.125, 17).unwrap(), "1.2500000000000000e-1");
        assert_eq!(sci(-300.0, 3).unwrap(), "-3.00e+2");
        assert_eq!(sci(0.0, 2).unwrap(), "0.0e+0");
        assert!(sci(f64::NAN, 17).is_none());
        assert!(sci(f64::INFINITY, 17).is_none());
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "note", "ok"]);
        t.push(vec![
            Cell::Num(0.5),
            Cell::Text("x, y".into()),
            Cell::Bool(true),
        ]);
        t.push(vec![Cell::Empty, Cell::Int(-2), Cell::Bool(false)]);
        assert_eq!(
            t.to_csv(4),
            "a,note,ok\n5.000e-1,\"x, y\",true\n,-2,false\n"
        );
    }

    #[test]
    fn json_layout_keeps_printed_text() {
        let mut t = Table::new(["v"]);
        t.push(vec![Cell::Num(1e-300)]);
        t.push(vec![Cell::Num(f64::NAN)]);
        let mut meta = Map::new();
        meta.insert("command".into(), Value::from("x"));
        let s = t.to_json(meta, "rows", 17);
        assert!(s.contains("\"v\": 1.0000000000000000e-300"), "{s}");
        assert!(s.contains("\"v\": null"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["meta"]["command"], "x");
        assert_eq!(back["rows"].as_array().unwrap().len(), 2);
    }

    proptest! {
        #[test]
        fn printed_values_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            let s = sci(v, MAX_SIG_DIGITS).unwrap();
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back, v);
            prop_assert_eq!(sci(back, MAX_SIG_DIGITS).unwrap(), s);
        }

        #[test]
        fn json_numbers_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            let text = serde_json::to_string(&number(v, MAX_SIG_DIGITS)).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.as_f64().unwrap(), v);
            prop_assert_eq!(text, sci(v, MAX_SIG_DIGITS).unwrap());
        }
    }
}
