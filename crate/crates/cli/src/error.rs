use std::fmt;
use std::path::Path;

use serde::Serialize;

/// A failed command, printed as JSON on standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    #[serde(skip)]
    pub exit_code: i32,
}

impl CliError {
    pub const INVALID_INPUT: i32 = 2;
    pub const MATH: i32 = 3;

    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            kind: "InvalidInput".into(),
            message: message.into(),
            exit_code: Self::INVALID_INPUT,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::invalid(format!("{}: {err}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind, "message": self.message, "exit_code": self.exit_code }).to_string()
    }
}

impl From<motionforge::Error> for CliError {
    fn from(e: motionforge::Error) -> Self {
        let exit_code = if e.is_invalid_input() {
            Self::INVALID_INPUT
        } else {
            Self::MATH
        };
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
            exit_code,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}
