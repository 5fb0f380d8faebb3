use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing database file {0}")]
    MissingFile(PathBuf),

    #[error("{file}:{line}: malformed record: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },

    #[error("is-a graph contains a cycle through synset {0:08}")]
    Cycle(u32),

    #[error("is-a graph has {} roots (first: {:08?})", .0.len(), .0.first())]
    MultipleRoots(Vec<u32>),

    #[error("is-a graph has no root")]
    NoRoot,

    #[error("database constants deviate from the reference values: {0}")]
    ConstantsMismatch(String),

    #[error("cache: {0}")]
    Cache(#[from] CacheError),

    #[error("unknown word `{0}`")]
    UnknownWord(String),

    #[error("unresolvable nouns: {}", .0.join(", "))]
    UnresolvedWords(Vec<String>),

    #[error("unknown synset {0:08}")]
    UnknownSynset(u32),

    #[error("similarity requires two distinct words, got `{0}` twice")]
    IdenticalWords(String),

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("too few nouns: minimum {needed} nouns, got {got}")]
    TooFewNouns { needed: usize, got: usize },

    #[error("segmentation: {0}")]
    Segmentation(String),

    #[error("session: {0}")]
    Session(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse error classes; the CLI maps them to exit codes and the service
/// to HTTP statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// Bad arguments, unknown words or measures, unreadable input files.
    Input,
    /// The word database or its cache failed to load or verify.
    Database,
    /// Well-formed input the analysis rules reject (noun minimums, segmentation).
    Constraint,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::MissingFile(_)
            | Error::Malformed { .. }
            | Error::Cycle(_)
            | Error::MultipleRoots(_)
            | Error::NoRoot
            | Error::ConstantsMismatch(_)
            | Error::Cache(_) => ErrorKind::Database,
            Error::TooFewNouns { .. } | Error::Segmentation(_) => ErrorKind::Constraint,
            _ => ErrorKind::Input,
        }
    }

    /// Stable snake_case identifier for machine-readable error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MissingFile(_) => "missing_file",
            Error::Malformed { .. } => "malformed_database",
            Error::Cycle(_) | Error::MultipleRoots(_) | Error::NoRoot => "invalid_taxonomy",
            Error::ConstantsMismatch(_) => "constants_mismatch",
            Error::Cache(_) => "cache",
            Error::UnknownWord(_) => "unknown_word",
            Error::UnresolvedWords(_) => "unresolved_words",
            Error::UnknownSynset(_) => "unknown_synset",
            Error::IdenticalWords(_) => "identical_words",
            Error::UnknownMeasure(_) => "unknown_measure",
            Error::TooFewNouns { .. } => "too_few_nouns",
            Error::Segmentation(_) => "segmentation",
            Error::Session(_) => "session",
            Error::Input(_) => "invalid_input",
            Error::Io(_) => "io",
            Error::Json(_) => "invalid_json",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("not a wordgraph cache (bad magic bytes)")]
    BadMagic,
    #[error("cache format version {found} is not supported (expected {expected})")]
    Version { found: u8, expected: u8 },
    #[error("checksum mismatch")]
    Checksum,
    #[error("truncated cache file")]
    Truncated,
    #[error("inconsistent cache payload: {0}")]
    Corrupt(String),
}
