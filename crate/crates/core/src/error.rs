use std::fmt;

use thiserror::Error;

/// A structural problem found by one of the validators.
///
/// Validators collect these rather than failing on the first problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("element family or rank mismatch: {0}")]
    FamilyMismatch(String),
    #[error("weight {weight} on {location} is not expressible in the declared generators")]
    NotExpressible { location: String, weight: String },
    #[error("machine class mismatch: expected {expected}, found {found}")]
    ClassMismatch { expected: String, found: String },
    #[error("no decider for machine class {0}")]
    UnimplementedClass(String),
    #[error("G-automaton is not normalized: {0}")]
    NotNormalized(String),
    #[error("generator token mismatch: {0}")]
    GeneratorMismatch(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("vector length {found} does not match rank {rank}")]
    LengthMismatch { rank: usize, found: usize },
    #[error("invalid structure:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("{0}")]
    Argument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    /// `field` is the JSON path to the offending value, `.` for the root.
    #[error("malformed document {path}: {source} (field {field})")]
    Document {
        path: String,
        field: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
