//! Output records shared by the CLI and the browser demo.
//!
//! Big integers are always emitted as decimal strings. Row fields keep their
//! insertion order in both JSON and CSV.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Int(i64),
    Str(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Str(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Str(v) => s.serialize_str(v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Null => s.serialize_none(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Cell {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Cell {
        i64::try_from(v).map(Cell::Int).unwrap_or_else(|_| Cell::Str(v.to_string()))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Str(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Cell {
        v.map(Into::into).unwrap_or(Cell::Null)
    }
}

/// An ordered record.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Row(pub Vec<(&'static str, Cell)>);

impl Row {
    pub fn new() -> Row {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Row {
        self.0.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Exact identity; a failure fails the run.
    Exact,
    /// Finite-window evidence for an asymptotic claim; never fails the run.
    Empirical,
    /// Reported observation; never fails the run.
    Reported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub params: Row,
    pub pass: bool,
    pub kind: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, params: Row, pass: bool, kind: CheckKind) -> Check {
        Check { name: name.to_string(), params, pass, kind, detail: None }
    }

    pub fn exact(name: &str, params: Row, pass: bool) -> Check {
        Check::new(name, params, pass, CheckKind::Exact)
    }

    /// Attaches both sides of a comparison; kept on failure only.
    pub fn sides(mut self, lhs: impl std::fmt::Display, rhs: impl std::fmt::Display) -> Check {
        if !self.pass {
            self.detail = Some(format!("lhs = {lhs}, rhs = {rhs}"));
        }
        self
    }

    pub fn failed_exact(&self) -> bool {
        self.kind == CheckKind::Exact && !self.pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub config: Row,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Row>,
    pub rows: Vec<Row>,
    pub fit: Option<Row>,
    pub checks: Vec<Check>,
    pub truncated: Option<Row>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Header row plus one record per row; summary, fit, truncation and failing
    /// checks follow as `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.rows.first() {
            let header: Vec<&str> = first.0.iter().map(|(k, _)| *k).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in &self.rows {
                let cells: Vec<String> = row.0.iter().map(|(_, v)| v.csv()).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        let comment = |label: &str, row: &Row| {
            let body: Vec<String> = row.0.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect();
            format!("# {label}: {}\n", body.join(" "))
        };
        if let Some(s) = &self.summary {
            out.push_str(&comment("summary", s));
        }
        if let Some(f) = &self.fit {
            out.push_str(&comment("fit", f));
        }
        if let Some(t) = &self.truncated {
            out.push_str(&comment("truncated", t));
        }
        for c in self.checks.iter().filter(|c| !c.pass) {
            let mut line = comment(&format!("check {} failed", c.name), &c.params);
            if let Some(d) = &c.detail {
                line.pop();
                line.push_str(&format!(" ({d})\n"));
            }
            out.push_str(&line);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_order_is_kept() {
        let r = Row::new().with("z", 1i64).with("a", "x,y").with("m", Option::<i64>::None);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"z":1,"a":"x,y","m":null}"#);
        let rep = Report {
            config: Row::new(),
            summary: None,
            rows: vec![r],
            fit: None,
            checks: vec![],
            truncated: None,
        };
        assert_eq!(rep.to_csv(), "z,a,m\n1,\"x,y\",\n");
    }

    #[test]
    fn large_unsigned_becomes_string() {
        assert_eq!(Cell::from(u64::MAX), Cell::Str(u64::MAX.to_string()));
        assert_eq!(Cell::from(7u64), Cell::Int(7));
    }
}
