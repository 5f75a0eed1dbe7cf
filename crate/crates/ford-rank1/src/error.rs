use ford_rank1_core::Error;
use serde_json::{json, Value};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const BUDGET_EXHAUSTED: u8 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input.
    #[error("{message}")]
    Input { kind: String, message: String },
    /// A check ran and failed; the report has already been printed.
    #[error("{0}")]
    Verification(String),
    #[error("{message}")]
    Budget { message: String, partial: Value },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Variant name of a core error, used as the `error` field on stderr.
fn core_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input { kind: core_kind(&e), message: e.to_string() }
    }
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> CliError {
        CliError::Input { kind: kind.to_string(), message: message.into() }
    }

    pub fn io(path: &str, source: std::io::Error) -> CliError {
        CliError::Io { path: path.to_string(), source }
    }

    /// Prefixes the message with where the error happened.
    pub fn context(self, what: &str) -> CliError {
        match self {
            CliError::Input { kind, message } => CliError::Input { kind, message: format!("{what}: {message}") },
            other => other,
        }
    }

    pub fn kind(&self) -> &str {
        match self {
            CliError::Input { kind, .. } => kind,
            CliError::Verification(_) => "VerificationFailed",
            CliError::Budget { .. } => "BudgetExhausted",
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } | CliError::Io { .. } => exit::INPUT,
            CliError::Verification(_) => exit::VERIFICATION_FAILED,
            CliError::Budget { .. } => exit::BUDGET_EXHAUSTED,
        }
    }

    /// Structured form written to stderr.
    pub fn to_json(&self) -> Value {
        let mut v = json!({"error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code()});
        if let CliError::Budget { partial, .. } = self {
            v["partial"] = partial.clone();
        }
        v
    }
}
