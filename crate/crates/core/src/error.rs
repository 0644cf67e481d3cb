use std::fmt;

/// How a failure should be classified by callers that need a coarse outcome
/// (the CLI maps these onto exit codes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input, violated precondition, malformed file.
    Precondition,
    /// A cap or search budget ran out before an answer was reached.
    Resource,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("level {level} is out of depth {depth}")]
    OutOfDepth { level: usize, depth: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("quotient cap of {cap} elements exceeded (reached {partial} elements)")]
    CapExceeded { cap: usize, partial: usize },

    #[error("conjugation leaves the quotient at depth {depth}: {detail}")]
    NotNormalized { depth: usize, detail: String },

    #[error("automorphism is not well defined at depth {depth}: {detail}")]
    NotWellDefined { depth: usize, detail: String },

    #[error("{stage}: no solution within budget ({detail})")]
    NotFound { stage: &'static str, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("missing witness for level {level}")]
    MissingWitness { level: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::CapExceeded { .. } | Error::NotFound { .. } | Error::MissingWitness { .. } => {
                ErrorClass::Resource
            }
            _ => ErrorClass::Precondition,
        }
    }

    pub(crate) fn invalid(what: &'static str, detail: impl fmt::Display) -> Self {
        Error::Invalid {
            what,
            detail: detail.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
