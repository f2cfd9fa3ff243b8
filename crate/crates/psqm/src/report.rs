//! Report records and their canonical JSON form.
//!
//! Canonical means: object keys sorted, every float rounded to 12 significant
//! digits, non-finite floats spelled as strings, two-space indentation and a
//! trailing newline. Two runs with the same configuration therefore produce
//! identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check was skipped; the reason is in `witnesses`.
    pub pass: Option<bool>,
    pub witnesses: Value,
    pub coverage: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: Option<bool>, witnesses: Value) -> Self {
        Check { name: name.into(), pass, witnesses, coverage: Value::Null }
    }

    pub fn with_coverage(mut self, coverage: Value) -> Self {
        self.coverage = coverage;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    pub value: usize,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub cost: Option<CostRecord>,
    /// Wall-clock time, only recorded on request since it breaks byte-identity.
    pub elapsed_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcripts: Option<Value>,
}

impl Report {
    pub fn new(config: Value) -> Self {
        Report {
            version: REPORT_VERSION.to_string(),
            config,
            checks: Vec::new(),
            cost: None,
            elapsed_ms: None,
            transcripts: None,
        }
    }

    /// True unless some check failed; skipped checks do not count.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass != Some(false))
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports are plain data");
        let mut out = serde_json::to_string_pretty(&canonicalize(value)).expect("values serialize");
        out.push('\n');
        out
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// The report as it reads back from its canonical form.
    pub fn canonical(&self) -> Report {
        Report::from_json(&self.to_canonical_json()).expect("canonical output parses")
    }
}

/// A float as a JSON value: rounded to 12 significant digits, or a string for
/// infinities and NaN.
pub fn num(x: f64) -> Value {
    if x.is_nan() {
        Value::String("nan".into())
    } else if x.is_infinite() {
        Value::String(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
        let rounded = if rounded == 0.0 { 0.0 } else { rounded };
        serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }
}

/// Rounds every float in `value`; maps are already key-sorted.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => num(n.as_f64().expect("f64 number")),
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_are_rounded() {
        assert_eq!(num(0.1 + 0.2), json!(0.3));
        assert_eq!(num(1.0 - 1e-15), json!(1.0));
        assert_eq!(num(-0.0), json!(0.0));
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(2.5e-300), json!(2.5e-300));
    }

    #[test]
    fn keys_are_sorted() {
        let mut r = Report::new(json!({"zeta": 1, "alpha": 2}));
        r.checks.push(Check::new("c", Some(true), json!({"b": 0.1 + 0.2, "a": [1.0 / 3.0]})));
        let s = r.to_canonical_json();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.contains("0.333333333333"));
        assert!(!s.contains("transcripts"));
        assert_eq!(Report::from_json(&s).unwrap().to_canonical_json(), s);
    }

    #[test]
    fn skipped_checks_do_not_fail() {
        let mut r = Report::new(Value::Null);
        r.checks.push(Check::new("a", None, json!({"skipped": "n/a"})));
        assert!(r.all_pass());
        r.checks.push(Check::new("b", Some(false), Value::Null));
        assert!(!r.all_pass());
    }
}
