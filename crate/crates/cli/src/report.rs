//! Run reports and the exit-code contract.

use serde::Serialize;
use serde_json::Value;

use crate::input::InstanceDesc;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE_LIMIT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    ResourceLimit,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_HOLDS,
            Verdict::Fail => EXIT_FAILS,
            Verdict::ResourceLimit => EXIT_RESOURCE_LIMIT,
        }
    }
}

/// What a single check produced, before it is wrapped into a report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub holds: bool,
    pub mode: Option<String>,
    pub witness: Value,
    pub details: Value,
    pub nodes_explored: u64,
}

impl Outcome {
    pub fn new(holds: bool) -> Self {
        Outcome {
            holds,
            mode: None,
            witness: Value::Null,
            details: Value::Null,
            nodes_explored: 0,
        }
    }

    pub fn witness(mut self, w: impl Serialize) -> Self {
        self.witness = serde_json::to_value(w).expect("witness is serializable");
        self
    }

    pub fn details(mut self, d: impl Serialize) -> Self {
        self.details = serde_json::to_value(d).expect("details are serializable");
        self
    }

    pub fn nodes(mut self, n: u64) -> Self {
        self.nodes_explored = n;
        self
    }

    pub fn mode(mut self, m: impl Into<String>) -> Self {
        self.mode = Some(m.into());
        self
    }
}

/// Field order is the serialization order and is part of the interface.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub claim: String,
    pub instance: InstanceDesc,
    pub mode: Option<String>,
    pub result: Verdict,
    pub witness: Value,
    pub details: Value,
    pub nodes_explored: u64,
    pub wall_clock_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}
