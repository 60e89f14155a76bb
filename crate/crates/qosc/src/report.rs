//! Machine-readable reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "qosc/1";

/// One named pass/fail check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, detail: None }
    }

    pub fn with_detail(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: Some(detail.into()) }
    }
}

/// The report written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub args: Vec<String>,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    /// Wall-clock milliseconds per phase, only when requested (reports are
    /// otherwise byte-identical across runs).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn new(command: &str, args: Vec<String>, timings: bool) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            args,
            pass: true,
            checks: Vec::new(),
            data: BTreeMap::new(),
            timings_ms: timings.then(BTreeMap::new),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.push(Check::new(name, pass));
    }

    pub fn data(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    /// Records the time since `t` under `phase` when timings are on.
    pub fn time(&mut self, phase: &str, t: Instant) {
        if let Some(m) = &mut self.timings_ms {
            m.insert(phase.to_string(), t.elapsed().as_millis());
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
