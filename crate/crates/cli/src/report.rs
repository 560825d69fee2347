//! Per-check records and their JSON and text renderings.

use std::fmt::Write as _;

use gamma_core::{Error, Verdict, Witness};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
    Skipped,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Error => "error",
            Outcome::Skipped => "skipped",
        }
    }
}

/// A witness in report form: the law name followed by the named values in
/// the order the checker produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub law: String,
    #[serde(flatten)]
    pub values: Map<String, Value>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        let values = w
            .values
            .iter()
            .map(|(name, datum)| (name.clone(), serde_json::to_value(datum).expect("datum serializes")))
            .collect();
        WitnessRecord { law: w.law.clone(), values }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub target: String,
    pub verdict: Outcome,
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    /// Wall-clock time in microseconds; present only when timing is requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl Record {
    pub fn new(id: impl Into<String>, target: impl Into<String>, verdict: &Verdict) -> Self {
        let (outcome, witness) = match verdict {
            Verdict::Pass => (Outcome::Pass, None),
            Verdict::Fail(w) => (Outcome::Fail, Some(WitnessRecord::from(w))),
        };
        Record {
            id: id.into(),
            target: target.into(),
            verdict: outcome,
            witness,
            message: None,
            details: None,
            timing_us: None,
        }
    }

    /// An error record; exhausted budgets become `skipped`.
    pub fn from_error(id: impl Into<String>, target: impl Into<String>, error: &Error) -> Self {
        let verdict = match error {
            Error::Budget { .. } => Outcome::Skipped,
            _ => Outcome::Error,
        };
        let witness = match error {
            Error::Rejected { witness, .. } => Some(WitnessRecord::from(witness)),
            _ => None,
        };
        Record {
            id: id.into(),
            target: target.into(),
            verdict,
            witness,
            message: Some(error.to_string()),
            details: None,
            timing_us: None,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    /// Sorts the records by id and recomputes the summary.
    pub fn new(mut checks: Vec<Record>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary { total: checks.len(), ..Summary::default() };
        for r in &checks {
            match r.verdict {
                Outcome::Pass => summary.pass += 1,
                Outcome::Fail => summary.fail += 1,
                Outcome::Error => summary.error += 1,
                Outcome::Skipped => summary.skipped += 1,
            }
        }
        Report { checks, summary }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.fail + self.summary.error > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        crate::emit::pretty(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.checks {
            let _ = write!(out, "{:<8} {}", r.verdict.as_str(), r.id);
            if let Some(w) = &r.witness {
                let _ = write!(out, "  {}", w.law);
                for (i, (name, value)) in w.values.iter().enumerate() {
                    let sep = if i == 0 { " at " } else { ", " };
                    let _ = write!(out, "{sep}{name}={}", compact(value));
                }
            }
            if let Some(m) = &r.message {
                let _ = write!(out, "  ({m})");
            }
            out.push('\n');
            if let Some(d) = &r.details {
                let _ = writeln!(out, "         {}", compact(d));
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} error, {} skipped",
            s.total, s.pass, s.fail, s.error, s.skipped
        );
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Structural validation of a JSON report; returns the first problem found.
pub fn validate_schema(value: &Value) -> Result<(), String> {
    let obj = value.as_object().ok_or("report is not an object")?;
    let checks = obj.get("checks").and_then(Value::as_array).ok_or("missing \"checks\" list")?;
    let summary = obj.get("summary").and_then(Value::as_object).ok_or("missing \"summary\" object")?;
    let mut counts = [0usize; 4];
    let mut last: Option<&str> = None;
    for (i, c) in checks.iter().enumerate() {
        let c = c.as_object().ok_or(format!("check {i} is not an object"))?;
        let id = c.get("id").and_then(Value::as_str).ok_or(format!("check {i}: missing id"))?;
        c.get("target").and_then(Value::as_str).ok_or(format!("check {id}: missing target"))?;
        if last.is_some_and(|prev| prev > id) {
            return Err(format!("check {id}: records are not sorted by id"));
        }
        last = Some(id);
        let verdict = c.get("verdict").and_then(Value::as_str).ok_or(format!("check {id}: missing verdict"))?;
        let slot = ["pass", "fail", "error", "skipped"]
            .iter()
            .position(|v| *v == verdict)
            .ok_or(format!("check {id}: unknown verdict {verdict}"))?;
        counts[slot] += 1;
        match c.get("witness") {
            Some(Value::Null) if verdict == "fail" => return Err(format!("check {id}: fail without witness")),
            Some(Value::Null) => {}
            Some(Value::Object(w)) => {
                w.get("law").and_then(Value::as_str).ok_or(format!("check {id}: witness without law"))?;
            }
            _ => return Err(format!("check {id}: witness must be an object or null")),
        }
        for key in c.keys() {
            if !["id", "target", "verdict", "witness", "message", "details", "timing_us"].contains(&key.as_str()) {
                return Err(format!("check {id}: unexpected field {key}"));
            }
        }
    }
    let expect = [("total", checks.len()), ("pass", counts[0]), ("fail", counts[1]), ("error", counts[2]), ("skipped", counts[3])];
    for (key, n) in expect {
        if summary.get(key).and_then(Value::as_u64) != Some(n as u64) {
            return Err(format!("summary.{key} does not match the records"));
        }
    }
    Ok(())
}
