use std::io::{self, Write};

use serde_json::{Map, Number, Value};

use crate::minimizer::Method;

pub const JSON_DIGITS: usize = 10;
pub const TABLE_DIGITS: usize = 6;

/// Rounds to `digits` significant figures.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits - 1, v).parse().unwrap_or(v)
}

/// Human-readable rendering at `digits` significant figures.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    let r = round_sig(v, digits);
    if r == 0.0 {
        "0".into()
    } else if !r.is_finite() {
        format!("{r}")
    } else if r.abs() < 1e-4 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn json_number(v: f64) -> Value {
    Number::from_f64(round_sig(v, JSON_DIGITS)).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Flag(bool),
    Empty,
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(v) => json_number(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Flag(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }

    fn text(&self, digits: usize) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => fmt_sig(*v, digits),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => if *b { "yes" } else { "no" }.into(),
            Cell::Empty => "-".into(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// What one command invocation reports.
#[derive(Debug, Clone, Default)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Vec<(String, Cell)>,
    pub results: Vec<(String, Cell, Method)>,
    pub seed: Option<u64>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub rows_method: Option<Method>,
    /// Free-form `#` lines written ahead of table rows.
    pub notes: Vec<String>,
}

impl OutputRecord {
    pub fn new(command: String) -> Self {
        Self {
            command,
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.parameters.push((key.into(), value.into()));
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Cell>, method: Method) -> &mut Self {
        self.results.push((key.into(), value.into(), method));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command.as_str()));
        let params: Map<String, Value> = self.parameters.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        doc.insert("parameters".into(), Value::Object(params));
        let results: Map<String, Value> = self.results.iter().map(|(k, v, _)| (k.clone(), v.json())).collect();
        doc.insert("results".into(), Value::Object(results));
        let mut provenance: Map<String, Value> = self
            .results
            .iter()
            .map(|(k, _, m)| (k.clone(), Value::from(m.tag())))
            .collect();
        if let Some(m) = self.rows_method {
            provenance.insert("rows".into(), Value::from(m.tag()));
        }
        doc.insert("provenance".into(), Value::Object(provenance));
        if let Some(seed) = self.seed {
            doc.insert("seed".into(), Value::from(seed));
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| ((*c).to_string(), v.json()))
                            .collect(),
                    )
                })
                .collect();
            doc.insert("rows".into(), Value::Array(rows));
        }
        Value::Object(doc)
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).map_err(io::Error::other)?;
        writeln!(out, "{text}")
    }

    pub fn write_table(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.command)?;
        for (k, v) in &self.parameters {
            writeln!(out, "  {k} = {}", v.text(TABLE_DIGITS))?;
        }
        if let Some(seed) = self.seed {
            writeln!(out, "  seed = {seed}")?;
        }
        if !self.results.is_empty() {
            let width = self.results.iter().map(|(k, _, _)| k.len()).max().unwrap_or(0);
            let cells: Vec<String> = self.results.iter().map(|(_, v, _)| v.text(TABLE_DIGITS)).collect();
            let vwidth = cells.iter().map(String::len).max().unwrap_or(0);
            for ((k, _, m), v) in self.results.iter().zip(&cells) {
                writeln!(out, "{k:<width$}  {v:>vwidth$}  [{}]", m.tag())?;
            }
        }
        for note in &self.notes {
            writeln!(out, "# {note}")?;
        }
        if !self.columns.is_empty() {
            let text: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.text(TABLE_DIGITS)).collect())
                .collect();
            let widths: Vec<usize> = self
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| text.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(self.columns.clone()))?;
            for r in &text {
                writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig(-2.847656251234, 6), -2.84766);
        assert_eq!(fmt_sig(-77.48757421875, 6), "-77.4876");
        assert_eq!(fmt_sig(2.0, 6), "2");
        assert_eq!(fmt_sig(1.234567e-9, 6), "1.23457e-9");
        assert_eq!(round_sig(0.1 + 0.2, 10), 0.3);
    }

    #[test]
    fn json_layout() {
        let mut r = OutputRecord::new("solve x".into());
        r.param("z", 2.0).result("e", -2.0, Method::Analytic);
        let v = r.to_json();
        assert_eq!(v["results"]["e"], -2.0);
        assert_eq!(v["provenance"]["e"], "analytic");
        assert!(v.get("seed").is_none());
        assert!(v.get("rows").is_none());
    }
}
