//! JSON reports of verification suites.

use std::time::Instant;

use serde_json::{json, Value};

use crate::fields::field_budget;
use crate::groups::group_budget;

#[derive(Clone, Debug)]
pub struct Case {
    pub id: String,
    pub passed: bool,
    pub payload: Value,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    /// Which character convention the suite runs in.
    pub convention: String,
    pub cases: Vec<Case>,
    pub seconds: Option<f64>,
}

impl SuiteReport {
    pub fn new(suite: &str, convention: &str) -> Self {
        SuiteReport { suite: suite.to_string(), convention: convention.to_string(), cases: Vec::new(), seconds: None }
    }

    pub fn push(&mut self, id: impl Into<String>, passed: bool, payload: Value) {
        self.cases.push(Case { id: id.into(), passed, payload });
    }

    /// Records an error as a failing case.
    pub fn push_result(&mut self, id: impl Into<String>, r: crate::Result<(bool, Value)>) {
        match r {
            Ok((passed, payload)) => self.push(id, passed, payload),
            Err(e) => self.push(id, false, json!({ "error": e.to_string(), "exit_code": e.exit_code() })),
        }
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.cases.extend(other.cases);
    }

    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Case> {
        self.cases.iter().filter(|c| !c.passed).collect()
    }

    /// Exit status for the command line: 0 if every case passed, 3 if a case
    /// ran out of budget, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else if self.failures().iter().any(|c| c.payload["exit_code"] == 3) {
            3
        } else {
            1
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.seconds = Some(start.elapsed().as_secs_f64());
        self
    }

    /// The report document. Wall time is included only when requested, so
    /// reports are reproducible by default.
    pub fn to_json(&self, with_timing: bool) -> Value {
        let mut v = json!({
            "schema": 1,
            "suite": self.suite,
            "convention": self.convention,
            "status": if self.passed() { "pass" } else { "fail" },
            "cases": self.cases.iter().map(|c| json!({
                "id": c.id,
                "status": if c.passed { "pass" } else { "fail" },
                "payload": c.payload,
            })).collect::<Vec<_>>(),
            "environment": {
                "field_budget": field_budget(),
                "group_budget": group_budget(),
                "crate_version": env!("CARGO_PKG_VERSION"),
            },
        });
        if with_timing {
            v["seconds"] = json!(self.seconds);
        }
        v
    }
}
