//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// A malformed row in an input file; `row` is the 1-based line number.
    #[error("{path}: row {row}: {reason}")]
    Record {
        path: PathBuf,
        row: u64,
        reason: String,
    },

    #[error("invalid {what}: {value}")]
    Parse { what: &'static str, value: String },

    #[error("lexicon error: {0}")]
    Lexicon(String),

    /// An external label file does not cover the corpus. At most the first
    /// ten missing sentence keys are listed.
    #[error("label file missing {count} sentence(s); first missing: {}", missing.join(", "))]
    LabelCoverage { count: usize, missing: Vec<String> },

    #[error("{0}")]
    Mismatch(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Degenerate numeric input (constant regressor, too few observations, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A date range is not covered by the supplied series.
    #[error("coverage gap: {0}")]
    Coverage(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn record(path: impl Into<PathBuf>, row: u64, reason: impl Into<String>) -> Self {
        Error::Record {
            path: path.into(),
            row,
            reason: reason.into(),
        }
    }
}
