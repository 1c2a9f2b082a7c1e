//! Crate-wide error type.

use thiserror::Error;

/// All failure modes surfaced by the toolkit.
///
/// Variants are grouped so callers (notably the CLI) can distinguish
/// configuration/validation problems from runtime failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("csv header is missing schema column `{0}`")]
    MissingHeaderColumn(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("row arity mismatch at line {line}: got {actual} fields, schema has {expected}")]
    Arity {
        line: u64,
        expected: usize,
        actual: usize,
    },

    #[error("column `{0}` has no non-missing values; cannot fit a {1} fill")]
    UnfittableColumn(String, String),

    #[error("column `{0}` still contains missing cells; impute before encoding")]
    EncodeBeforeImpute(String),

    #[error("assembly error in column `{column}`, row {row}: {message}")]
    Assembly {
        column: String,
        row: usize,
        message: String,
    },

    #[error("split error: {0}")]
    Split(String),

    #[error("feature dimension mismatch: model expects {expected}, input has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("degenerate labels: both classes must be present")]
    DegenerateLabels,

    #[error("empty evaluation: all confusion counts are zero")]
    EmptyEvaluation,

    #[error("unsupported artifact version `{0}`")]
    ArtifactVersion(String),

    #[error("artifact is truncated or malformed: {0}")]
    ArtifactTruncated(String),

    #[error("artifact checksum mismatch")]
    ArtifactChecksum,

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad inputs or configuration rather than a
    /// failure at runtime. The CLI maps these to a distinct exit code.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnknownColumn(_)
                | Error::Schema(_)
                | Error::MissingHeaderColumn(_)
                | Error::Parse { .. }
                | Error::Arity { .. }
                | Error::Config { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
