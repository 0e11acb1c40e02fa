use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input shape: wrong matrix sizes or generator counts.
    #[error("structural input error: {0}")]
    Structure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cohomology routes disagree: h1 (euler) = {h1_euler}, h1 (parabolic) = {h1_parabolic}")]
    Inconsistent { h1_euler: i64, h1_parabolic: i64 },

    #[error("degeneration certificate failed: {0}")]
    Certification(String),

    #[error("inadmissible weight pair (alpha = {alpha}, k = {k})")]
    Inadmissible { alpha: f64, k: i32 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return Error::Io(std::io::Error::other(e.to_string()));
        }
        // serde_json appends " at line X column Y"; strip it, we carry both fields
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(idx) => full[..idx].to_string(),
            None => full,
        };
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
