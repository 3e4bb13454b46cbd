use crate::args::Format;
use hrcone::scalar::{exact_repr, Scalar};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when margin >= -tolerance.
    pub fn margin(name: impl Into<String>, margin: f64, tolerance: f64) -> Self {
        Check { name: name.into(), pass: margin >= -tolerance, margin, tolerance }
    }

    /// Exact comparison; margin is 0 on a match and -1 otherwise.
    pub fn equal(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), pass: ok, margin: if ok { 0.0 } else { -1.0 }, tolerance: 0.0 }
    }

    /// |got - want| <= tol * |want|, reported as margin = tol*|want| - |got - want| scaled by |want|.
    pub fn relative(name: impl Into<String>, got: f64, want: f64, tol: f64) -> Self {
        let scale = want.abs().max(f64::MIN_POSITIVE);
        let dev = (got - want).abs() / scale;
        Check { name: name.into(), pass: dev <= tol, margin: -dev, tolerance: tol }
    }
}

/// Rows for the csv and md renderings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a command hands back before timing and rendering.
#[derive(Clone, Debug)]
pub struct Output {
    pub inputs: Value,
    pub results: Value,
    pub table: Table,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, out: Output, timing_ms: u64) -> (Self, Table) {
        let report = Report {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs: out.inputs,
            results: out.results,
            checks: out.checks,
            timing_ms,
        };
        (report, out.table)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, table: &Table, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(table),
            Format::Md => self.render_md(table),
        }
    }

    fn render_md(&self, table: &Table) -> String {
        let mut s = format!("# hrcone {}\n\n", self.command);
        if let Value::Object(map) = &self.inputs {
            for (k, v) in map {
                let shown = match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "- {k}: {shown}");
            }
            s.push('\n');
        }
        if !table.columns.is_empty() {
            md_table(&mut s, &table.columns, &table.rows);
        }
        if !self.checks.is_empty() {
            s.push_str("\n## Checks\n\n");
            let rows: Vec<Vec<String>> = self
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), if c.pass { "pass" } else { "FAIL" }.into(), fmt_f(c.margin), fmt_f(c.tolerance)])
                .collect();
            md_table(&mut s, &["check".into(), "status".into(), "margin".into(), "tolerance".into()], &rows);
        }
        s
    }
}

fn md_table(s: &mut String, columns: &[String], rows: &[Vec<String>]) {
    let _ = writeln!(s, "| {} |", columns.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(columns.len()));
    for r in rows {
        let _ = writeln!(s, "| {} |", r.join(" | "));
    }
}

fn render_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for r in &table.rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn fmt_f(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// {"value": float, "exact": "p/q" or null}
pub fn num<S: Scalar>(x: &S) -> Value {
    json!({ "value": x.to_f64(), "exact": x.to_exact().map(|q| exact_repr(&q)) })
}

/// Exact string when available, else the float.
pub fn cell<S: Scalar>(x: &S) -> String {
    match x.to_exact() {
        Some(q) => exact_repr(&q),
        None => fmt_f(x.to_f64()),
    }
}
