//! Report documents. The payload is deterministic; wall time is kept apart.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Refuted,
    Success,
    Failure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified | Status::Success => 0,
            Status::Refuted | Status::Failure => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub tool: String,
    pub version: String,
    pub library_version: String,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub result: serde_json::Value,
}

impl Payload {
    pub fn new(command: &str, status: Status, config: Option<RunConfig>, result: serde_json::Value) -> Self {
        Self {
            tool: "pshift".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            library_version: pseudoshift::VERSION.into(),
            command: command.into(),
            status,
            config,
            result,
        }
    }

    /// Pretty JSON with sorted object keys.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("payload serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(flatten)]
    pub payload: Payload,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
