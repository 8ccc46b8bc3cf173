//! The document every command produces, and its three renderings.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|actual − expected| ≤ tol`
    Abs,
    /// `|actual − expected| ≤ tol·|expected|`
    Rel,
    /// `actual ≤ expected + tol`
    Le,
    /// `actual ≥ expected − tol`
    Ge,
    /// `actual > expected`
    Gt,
    /// `actual < expected`
    Lt,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Abs => "≈",
            Relation::Rel => "≈rel",
            Relation::Le => "≤",
            Relation::Ge => "≥",
            Relation::Gt => ">",
            Relation::Lt => "<",
        }
    }

    pub fn holds(self, actual: f64, expected: f64, tol: f64) -> bool {
        match self {
            Relation::Abs => (actual - expected).abs() <= tol,
            Relation::Rel => (actual - expected).abs() <= tol * expected.abs(),
            Relation::Le => actual <= expected + tol,
            Relation::Ge => actual >= expected - tol,
            Relation::Gt => actual > expected,
            Relation::Lt => actual < expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub relation: Relation,
    pub expected: f64,
    /// `None` when the quantity could not be computed.
    pub actual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, relation: Relation, expected: f64, actual: Option<f64>, tol: f64) -> Self {
        let actual = actual.filter(|a| a.is_finite());
        let pass = actual.is_some_and(|a| relation.holds(a, expected, tol));
        CheckRecord {
            name: name.into(),
            relation,
            expected,
            actual,
            tol,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub label: String,
    /// Provenance or other tag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub values: IndexMap<String, Option<f64>>,
}

impl Record {
    pub fn new(label: impl Into<String>) -> Self {
        Record {
            label: label.into(),
            kind: None,
            values: IndexMap::new(),
        }
    }

    pub fn kind(mut self, kind: impl Into<String>) -> Self {
        self.kind = Some(kind.into());
        self
    }

    pub fn value(mut self, name: &str, v: impl Into<Option<f64>>) -> Self {
        self.values.insert(name.to_string(), v.into().filter(|x| x.is_finite()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub command: String,
    pub inputs: IndexMap<String, String>,
    pub results: Vec<Record>,
    pub checks: Vec<CheckRecord>,
    /// Every check passed.
    pub status: bool,
    /// Checks that are known to fail because the bound they test is false.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub known_failures: Vec<String>,
}

impl ReportDoc {
    pub fn new(command: &str) -> Self {
        ReportDoc {
            command: command.to_string(),
            inputs: IndexMap::new(),
            results: Vec::new(),
            checks: Vec::new(),
            status: true,
            known_failures: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, r: Record) {
        self.results.push(r);
    }

    pub fn check(&mut self, c: CheckRecord) {
        self.status &= c.pass;
        self.checks.push(c);
    }

    /// Adds a check of a bound that is known to be false; a failure is
    /// recorded in `known_failures` as well.
    pub fn check_known_false(&mut self, c: CheckRecord) {
        if !c.pass {
            self.known_failures.push(c.name.clone());
        }
        self.check(c);
    }

    /// Whether every failing check is a known failure.
    pub fn only_known_failures(&self) -> bool {
        self.checks.iter().all(|c| c.pass || self.known_failures.contains(&c.name))
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for r in &self.results {
            for k in r.values.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols
    }

    /// The results table, or the checks table when there are no results.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        if self.results.is_empty() {
            w.write_record(["name", "relation", "expected", "actual", "tol", "pass"]).unwrap();
            for c in &self.checks {
                w.write_record([
                    c.name.clone(),
                    format!("{:?}", c.relation).to_lowercase(),
                    fmt_sig(c.expected),
                    c.actual.map(fmt_sig).unwrap_or_default(),
                    fmt_sig(c.tol),
                    c.pass.to_string(),
                ])
                .unwrap();
            }
        } else {
            let cols = self.columns();
            let mut header = vec!["label".to_string(), "kind".to_string()];
            header.extend(cols.iter().cloned());
            w.write_record(&header).unwrap();
            for r in &self.results {
                let mut row = vec![r.label.clone(), r.kind.clone().unwrap_or_default()];
                row.extend(cols.iter().map(|c| r.values.get(c).copied().flatten().map(fmt_sig).unwrap_or_default()));
                w.write_record(&row).unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "{} {}", self.command, inputs.join(" ")).unwrap();
        if !self.results.is_empty() {
            let cols = self.columns();
            let mut rows = vec![{
                let mut h = vec!["".to_string(), "".to_string()];
                h.extend(cols.iter().cloned());
                h
            }];
            for r in &self.results {
                let mut row = vec![r.label.clone(), r.kind.clone().unwrap_or_default()];
                row.extend(
                    cols.iter()
                        .map(|c| r.values.get(c).copied().flatten().map(fmt_sig).unwrap_or_else(|| "-".into())),
                );
                rows.push(row);
            }
            out.push('\n');
            out.push_str(&align(&rows));
        }
        if !self.checks.is_empty() {
            out.push('\n');
            let mut rows = Vec::new();
            for c in &self.checks {
                let tag = if c.pass {
                    "PASS"
                } else if self.known_failures.contains(&c.name) {
                    "FAIL*"
                } else {
                    "FAIL"
                };
                rows.push(vec![
                    tag.to_string(),
                    c.name.clone(),
                    c.actual.map(fmt_sig).unwrap_or_else(|| "n/a".into()),
                    c.relation.symbol().to_string(),
                    fmt_sig(c.expected),
                    format!("tol {}", fmt_sig(c.tol)),
                ]);
            }
            out.push_str(&align(&rows));
            let failed = self.checks.iter().filter(|c| !c.pass).count();
            writeln!(out, "\n{} of {} checks pass", self.checks.len() - failed, self.checks.len()).unwrap();
            if !self.known_failures.is_empty() {
                writeln!(out, "FAIL* marks checks of bounds known to be false").unwrap();
            }
        }
        out
    }
}

fn align(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..ncol).map(|j| rows.iter().map(|r| r.get(j).map_or(0, |s| s.chars().count())).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(j, s)| format!("{s}{}", " ".repeat(widths[j] - s.chars().count())))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
    }
    out
}

/// Twelve significant digits, trailing zeros trimmed, like C's `%.12g`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
