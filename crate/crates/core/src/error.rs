use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the pipeline. Every variant carries the
/// offending entity (line, id, name) so callers can report it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("duplicate document id {id:?} at line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("unknown label value {value:?} for {toi:?} at line {line} (expected pos|neg|unk)")]
    UnknownLabelValue {
        line: usize,
        toi: String,
        value: String,
    },

    #[error("template bank has no templates in section {section:?}")]
    EmptyTemplateBank { section: String },

    #[error("invalid prevalence {value} for {toi:?}: must lie in [0, 1]")]
    InvalidPrevalence { toi: String, value: f64 },

    #[error("invalid corpus spec: {reason}")]
    InvalidCorpusSpec { reason: String },

    #[error("invalid pipeline config: {reason}")]
    InvalidPipelineConfig { reason: String },

    #[error("empty input: {what}")]
    EmptyInput { what: String },

    #[error("invalid n-gram range ({lo}, {hi}): need 1 <= lo <= hi")]
    InvalidRange { lo: usize, hi: usize },

    #[error("training data contains a single class")]
    SingleClassInput,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid architecture: {reason}")]
    InvalidArchitecture { reason: String },

    #[error("class {class:?} has {count} samples, fewer than k = {folds}")]
    ClassTooSmall {
        class: String,
        count: usize,
        folds: usize,
    },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    #[error("bootstrap resampling collapsed to a single class in every draw ({attempts} attempts)")]
    DegenerateResampling { attempts: usize },

    #[error("unsupported model file version {found:?}, expected {expected:?}")]
    VersionMismatch { found: String, expected: String },

    #[error("malformed model file: {reason}")]
    MalformedModel { reason: String },

    #[error("unknown method id {id:?}")]
    UnknownMethod { id: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
