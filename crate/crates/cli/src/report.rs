//! Result tables and checks, rendered as versioned CSV or JSON.

use crate::config::RunConfig;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Text(s) => json!(s),
            _ => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub metric: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Check {
    pub fn measured(name: &str, metric: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let status = if metric <= tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, metric: Some(metric), tolerance: Some(tolerance), detail: detail.into() }
    }

    pub fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Skipped, metric: None, tolerance: None, detail: detail.into() }
    }

    pub fn failed(name: &str, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Fail, metric: None, tolerance: None, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_csv(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        writeln!(out, "# schema={SCHEMA}").unwrap();
        if let Value::Object(map) = serde_json::to_value(cfg).expect("config serializes") {
            for (k, v) in map {
                writeln!(out, "# {k}={}", header_value(&v)).unwrap();
            }
        }
        for w in &self.warnings {
            writeln!(out, "# warning={w}").unwrap();
        }
        for c in &self.checks {
            let metric = c.metric.map(|m| format!("{m:.16e}")).unwrap_or_default();
            let tol = c.tolerance.map(|m| format!("{m:.16e}")).unwrap_or_default();
            let status = serde_json::to_value(c.status).unwrap();
            writeln!(out, "# check={},{},{metric},{tol},{}", c.name, status.as_str().unwrap(), c.detail).unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::csv).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self, cfg: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (k, v) in self.columns.iter().zip(r) {
                    m.insert((*k).to_string(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": c.status,
                    "metric": c.metric.filter(|m| m.is_finite()),
                    "tolerance": c.tolerance.filter(|m| m.is_finite()),
                    "detail": c.detail,
                })
            })
            .collect();
        let doc = json!({
            "config": cfg,
            "results": { "schema": SCHEMA, "columns": self.columns, "rows": rows, "warnings": self.warnings },
            "checks": checks,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

fn header_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n.as_f64().map(|x| if n.is_f64() { format!("{x:.16e}") } else { n.to_string() }).unwrap_or_default(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(header_value).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
