//! Run reports and their JSON / CSV renderings.

use std::collections::BTreeMap;

use gaussmod::InequalityReport;
use serde_json::{Map, Number, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// `{:.16e}` as a JSON number; `null` for NaN and infinities.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(text.parse::<Number>().expect("formatted float is valid JSON"))
}

/// Same digits as the JSON rendering; empty for non-finite values.
fn csv_number(x: f64) -> String {
    match number(x) {
        Value::Null => String::new(),
        v => v.to_string(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub seed: u64,
    pub rng: String,
    pub config: BTreeMap<String, Value>,
    pub timestamp: Option<u64>,
    pub results: Vec<InequalityReport>,
    pub scalars: BTreeMap<String, Value>,
    /// Matrices of small instances, for reproduction.
    pub instances: Vec<Value>,
    pub errors: Vec<String>,
}

impl RunReport {
    pub fn status(&self) -> Status {
        if !self.errors.is_empty() {
            Status::Error
        } else if self.results.iter().all(|r| r.holds) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn scalar(&mut self, name: impl Into<String>, x: f64) {
        self.scalars.insert(name.into(), number(x));
    }

    pub fn scalar_value(&mut self, name: impl Into<String>, v: Value) {
        self.scalars.insert(name.into(), v);
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityReport> {
        self.results.iter().filter(|r| !r.holds)
    }

    pub fn to_json(&self) -> Value {
        let mut meta = Map::new();
        meta.insert("version".into(), Value::from(VERSION));
        meta.insert("seed".into(), Value::from(self.seed));
        meta.insert("rng".into(), Value::from(self.rng.clone()));
        meta.insert("config".into(), Value::Object(self.config.clone().into_iter().collect()));
        if let Some(t) = self.timestamp {
            meta.insert("timestamp".into(), Value::from(t));
        }
        let results = self.results.iter().map(result_json).collect();
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(meta));
        root.insert("results".into(), Value::Array(results));
        root.insert("scalars".into(), Value::Object(self.scalars.clone().into_iter().collect()));
        if !self.instances.is_empty() {
            root.insert("instances".into(), Value::Array(self.instances.clone()));
        }
        if !self.errors.is_empty() {
            root.insert("errors".into(), Value::from(self.errors.clone()));
        }
        root.insert("status".into(), Value::from(self.status().as_str()));
        Value::Object(root)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "lhs", "rhs", "holds", "margin"]).expect("in-memory write");
        for r in &self.results {
            w.write_record([
                r.name.clone(),
                csv_number(r.lhs),
                csv_number(r.rhs),
                r.holds.to_string(),
                csv_number(r.margin),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn result_json(r: &InequalityReport) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), Value::from(r.name.clone()));
    m.insert("lhs".into(), number(r.lhs));
    m.insert("rhs".into(), number(r.rhs));
    m.insert("holds".into(), Value::from(r.holds));
    m.insert("margin".into(), number(r.margin));
    m.insert("relation".into(), Value::from(r.relation.symbol()));
    if let Some(c) = r.cross_check {
        m.insert("cross_check".into(), number(c));
    }
    if let Some(note) = &r.note {
        m.insert("note".into(), Value::from(note.clone()));
    }
    Value::Object(m)
}

/// Per-name statistics over many instances of the same check.
#[derive(Debug, Clone)]
struct Tally {
    name: String,
    evaluated: usize,
    skipped: usize,
    violations: usize,
    min_margin: f64,
    /// Instance with the smallest relative slack, and that slack.
    tightest: Option<(usize, f64, InequalityReport)>,
    first_violation: Option<(usize, InequalityReport)>,
}

/// Folds reports from many trials into one row per check name, in order of
/// first appearance.
#[derive(Debug, Clone, Default)]
pub struct Aggregator {
    tallies: Vec<Tally>,
    index: BTreeMap<String, usize>,
}

impl Aggregator {
    pub fn add(&mut self, trial: usize, report: &InequalityReport) {
        let k = *self.index.entry(report.name.clone()).or_insert_with(|| {
            self.tallies.push(Tally {
                name: report.name.clone(),
                evaluated: 0,
                skipped: 0,
                violations: 0,
                min_margin: f64::INFINITY,
                tightest: None,
                first_violation: None,
            });
            self.tallies.len() - 1
        });
        let t = &mut self.tallies[k];
        if report.is_skipped() {
            t.skipped += 1;
            return;
        }
        t.evaluated += 1;
        if !report.holds {
            t.violations += 1;
            if t.first_violation.is_none() {
                t.first_violation = Some((trial, report.clone()));
            }
        }
        if !(report.margin >= t.min_margin) {
            t.min_margin = report.margin;
        }
        let slack = report.relative_slack;
        if t.tightest.as_ref().is_none_or(|(_, s, _)| slack < *s || s.is_nan()) {
            t.tightest = Some((trial, slack, report.clone()));
        }
    }

    /// One row per name (the first violation, else the tightest instance)
    /// plus `<name>.violations`, `.evaluated`, `.skipped`, `.min_margin`,
    /// `.min_relative_slack` and `.tightest_trial` scalars.
    pub fn finish(self, report: &mut RunReport) {
        for t in self.tallies {
            let row = match (&t.first_violation, &t.tightest) {
                (Some((trial, r)), _) => r.clone().with_note(match &r.note {
                    Some(n) => format!("trial {trial}: {n}"),
                    None => format!("trial {trial}"),
                }),
                (None, Some((_, _, r))) => r.clone(),
                (None, None) => InequalityReport::skipped(&t.name, "no instance met the hypotheses"),
            };
            report.results.push(row);
            let n = &t.name;
            report.scalar_value(format!("{n}.violations"), Value::from(t.violations));
            report.scalar_value(format!("{n}.evaluated"), Value::from(t.evaluated));
            report.scalar_value(format!("{n}.skipped"), Value::from(t.skipped));
            if t.evaluated > 0 {
                report.scalar(format!("{n}.min_margin"), t.min_margin);
            }
            if let Some((trial, slack, _)) = &t.tightest {
                report.scalar(format!("{n}.min_relative_slack"), *slack);
                report.scalar_value(format!("{n}.tightest_trial"), Value::from(*trial));
            }
        }
    }
}
