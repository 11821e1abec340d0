use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("line {line}: malformed JSON: {message}")]
    Json { line: usize, message: String },

    #[error("line {line}: missing field \"{field}\"")]
    MissingField { line: usize, field: &'static str },

    #[error("line {line}: invalid field \"{field}\": {message}")]
    InvalidField {
        line: usize,
        field: &'static str,
        message: String,
    },

    #[error("line {line}: unknown truth class \"{value}\"")]
    UnknownTruthClass { line: usize, value: String },

    #[error("duplicate id \"{0}\"")]
    DuplicateId(String),

    #[error("unmatched ids: instances without truth {instances:?}, truth without instances {truths:?}")]
    OrphanIds {
        instances: Vec<String>,
        truths: Vec<String>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tagger load failed: {0}")]
    TaggerLoad(String),

    #[error("lexicon load failed: {0}")]
    LexiconLoad(String),

    #[error("unknown pattern \"{0}\"")]
    UnknownPattern(String),

    #[error("schema manifest: {0}")]
    Schema(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("training labels contain a single class")]
    SingleClass,

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("checksum mismatch: {0}")]
    ChecksumMismatch(String),

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by bad input files or arguments rather than by
    /// the computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::FileNotFound(_)
                | Error::Json { .. }
                | Error::MissingField { .. }
                | Error::InvalidField { .. }
                | Error::UnknownTruthClass { .. }
                | Error::DuplicateId(_)
                | Error::OrphanIds { .. }
                | Error::UnknownPattern(_)
                | Error::InvalidArgument(_)
                | Error::TaggerLoad(_)
                | Error::LexiconLoad(_)
                | Error::Schema(_)
                | Error::ModelFormat(_)
        )
    }
}
