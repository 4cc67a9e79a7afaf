use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not valid UTF-8 (first invalid byte at offset {offset})")]
    Encoding { offset: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("shape mismatch: expected {expected} entries, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("invalid matrix: {0}")]
    Validation(String),

    #[error("no term reaches the minimum total frequency of {threshold}")]
    EmptyVocabulary { threshold: u64 },

    #[error("document-term matrix is empty: every document was pruned")]
    EmptyMatrix,

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("weighting scheme `{0}` needs at least two documents")]
    DegenerateCorpus(&'static str),

    #[error("statistic is undefined: {0}")]
    UndefinedStatistic(String),

    #[error("need at least 3 distinct years for a quadratic fit, got {0}")]
    InsufficientData(usize),

    #[error("unknown label `{0}`")]
    Lookup(String),

    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("period `{0}` has no usable documents")]
    EmptyPeriod(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("map needs at least 2 retained dimensions, model has {0}")]
    Dimensionality(usize),

    #[error("missing upstream artifact {path}; run `{producer}` first")]
    Dependency { path: PathBuf, producer: &'static str },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status for this error: 1 validation, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Argument(_) | Error::Dependency { .. } => 1,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}
