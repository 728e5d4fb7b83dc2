use serde::Serialize;

use crate::config::SCHEMA_VERSION;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] resq_core::Error),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema_version: u32,
    error: ErrorBody<'a>,
}

impl CliError {
    /// 2 for user or configuration errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Core(e) if e.is_numerical() => "numerical",
            CliError::Core(_) => "parameters",
        }
    }

    pub fn to_json(&self) -> String {
        let report = ErrorReport { schema_version: SCHEMA_VERSION, error: ErrorBody { kind: self.kind(), message: self.to_string() } };
        serde_json::to_string(&report).expect("error report serializes")
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
