use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Fail => ExitCode::from(1),
            Status::Error => ExitCode::from(2),
        }
    }
}

/// Top-level JSON document written by every command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub status: Status,
}

impl Report {
    pub fn error(command: &str, inputs: Value, err: &CliError) -> Self {
        Report {
            command: command.into(),
            inputs,
            results: json!({ "error": { "kind": err.kind(), "message": err.to_string() } }),
            status: Status::Error,
        }
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn render(&self) -> String {
        // Value maps are BTreeMaps, so converting first sorts every level.
        let v = serde_json::to_value(self).expect("report is serializable");
        let mut s = serde_json::to_string_pretty(&v).expect("value is serializable");
        s.push('\n');
        s
    }
}

#[derive(Debug)]
pub enum CliError {
    Lib(cfhyp::Error),
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Usage(_) => "usage",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<cfhyp::Error> for CliError {
    fn from(e: cfhyp::Error) -> Self {
        CliError::Lib(e)
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
