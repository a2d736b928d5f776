//! Library surface of the `errts` command-line tool: ingestion, the analysis
//! pipeline, and report rendering. The binary in `main.rs` parses arguments
//! and dispatches here.

pub mod analyze;
pub mod ingest;
pub mod report;

/// Failure category, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Data,
    Model,
    Internal,
}

#[derive(Debug)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
}

impl CliError {
    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            class: ErrorClass::Data,
            message: message.into(),
        }
    }
    pub fn model(err: impl std::fmt::Display) -> Self {
        CliError {
            class: ErrorClass::Model,
            message: err.to_string(),
        }
    }
    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            class: ErrorClass::Internal,
            message: message.into(),
        }
    }
    /// 1 data error, 2 model/bound error, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Data => 1,
            ErrorClass::Model => 2,
            ErrorClass::Internal => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
