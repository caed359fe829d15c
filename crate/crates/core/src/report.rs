//! Verification report entries and their deterministic JSON form.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// A published coefficient was shown wrong by an explicit witness while
    /// the corrected expression held on every sample. Does not fail a run.
    #[serde(rename = "discrepancy-confirmed")]
    DiscrepancyConfirmed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyConfirmed => "discrepancy-confirmed",
        }
    }

    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub check_id: String,
    pub statement: String,
    pub status: Status,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_expression: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_expression: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckEntry {
    pub fn new(check_id: &str, statement: &str, samples: usize) -> Self {
        CheckEntry {
            check_id: check_id.to_string(),
            statement: statement.to_string(),
            status: Status::Pass,
            samples,
            counterexample: None,
            printed_expression: None,
            derived_expression: None,
            witness: None,
        }
    }

    /// Pass when `counterexample` is `None`, fail with it otherwise.
    pub fn with_outcome(mut self, counterexample: Option<Value>) -> Self {
        self.status = if counterexample.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        self.counterexample = counterexample;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub discrepancies: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: Value,
    pub checks: Vec<CheckEntry>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.status.is_failure())
    }

    pub fn find(&self, check_id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.check_id == check_id)
    }

    pub fn summary(&self) -> Summary {
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        Summary {
            total: self.checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            discrepancies: count(Status::DiscrepancyConfirmed),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["summary"] = serde_json::to_value(self.summary()).expect("summary serializes");
        v["passed"] = Value::Bool(self.passed());
        v
    }

    /// Pretty-printed with sorted keys.
    pub fn to_json(&self) -> String {
        to_canonical_json(&self.to_value())
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<22} {:<36} samples={}\n",
                c.status.as_str(),
                c.check_id,
                c.samples
            ));
        }
        let s = self.summary();
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} discrepancies confirmed\n",
            s.total, s.passed, s.failed, s.discrepancies
        ));
        out
    }
}

/// Serializes any value with object keys sorted and two-space indentation.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // `serde_json::Value` objects are BTreeMaps, so a round trip sorts keys.
    let v = serde_json::to_value(value).expect("value serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_optionals_omitted() {
        let entry = CheckEntry::new("b", "x", 3);
        let text = to_canonical_json(&entry);
        let order: Vec<usize> = ["check_id", "samples", "statement", "status"]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(!text.contains("witness"));
    }

    #[test]
    fn discrepancies_do_not_fail_a_run() {
        let mut d = CheckEntry::new("d", "", 1);
        d.status = Status::DiscrepancyConfirmed;
        let report = Report {
            config: json!({}),
            checks: vec![CheckEntry::new("a", "", 1), d],
        };
        assert!(report.passed());
        assert!(report.to_json().contains("\"discrepancy-confirmed\""));
        let failing = CheckEntry::new("f", "", 1).with_outcome(Some(json!({"k": 1})));
        let report = Report {
            config: json!({}),
            checks: vec![failing],
        };
        assert!(!report.passed());
        assert_eq!(report.summary().failed, 1);
    }
}
