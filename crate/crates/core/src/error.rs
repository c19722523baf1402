use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context for the
/// CLI to report which module refused the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("structural error in cell `{cell}`: {reason}")]
    Structural { cell: String, reason: String },

    #[error("complex is not code-admissible: {0}")]
    NotAdmissible(String),

    #[error("{what} = {value} out of range ({allowed})")]
    Range {
        what: &'static str,
        value: i64,
        allowed: String,
    },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("unknown cell `{0}`")]
    UnknownCell(String),

    #[error("capacity guard exceeded: {0}")]
    Capacity(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("bundle spec error: {0}")]
    Spec(String),

    #[error("invalid group: {0}")]
    Group(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
