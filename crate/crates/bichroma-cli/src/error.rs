use std::fmt;

/// Harness-level failures, each tied to a process exit code:
/// 2 = input validation, 3 = infeasible instance, 4 = budget exceeded,
/// 5 = internal invariant violation.
#[derive(Debug)]
pub enum CliError {
    /// An instance size outside a generator's supported range.
    BadSize { min: usize, got: usize },
    /// Malformed files, arguments, configs, or geometry preconditions.
    Input(String),
    /// The instance admits no properly colored spanning tree.
    Infeasible(String),
    /// An enumeration limit was exceeded.
    Budget(String),
    /// A library invariant failed; a bug, not bad input.
    Internal(String),
    /// File system failures.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadSize { .. } | CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::BadSize { min, got } => {
                write!(f, "instance size {got} is too small (need at least {min})")
            }
            CliError::Input(msg) => write!(f, "invalid input: {msg}"),
            CliError::Infeasible(msg) => write!(f, "infeasible instance: {msg}"),
            CliError::Budget(msg) => write!(f, "budget exceeded: {msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<bichroma::Error> for CliError {
    fn from(e: bichroma::Error) -> Self {
        match e {
            bichroma::Error::Monochromatic => CliError::Infeasible(e.to_string()),
            bichroma::Error::TooLarge { .. } => CliError::Budget(e.to_string()),
            bichroma::Error::Internal(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
