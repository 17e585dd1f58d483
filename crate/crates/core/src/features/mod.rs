//! Feature matrices, class posteriors, the GMF1 file format, Gaussian moment
//! summaries and the backbone registry.

pub mod gmf1;
mod registry;
mod set;
mod summary;

pub use gmf1::{read_features, read_features_file, write_features, write_features_file};
pub use registry::{BackboneSpec, Registry};
pub use set::{FeatureSet, Labels, PosteriorSet, POSTERIOR_ROW_TOLERANCE};
pub use summary::{summarize, GaussianSummary};

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("feature matrix must have at least one row and one column")]
    Empty,
    #[error("{len} values cannot be split into rows of width {dim}")]
    RaggedMatrix { len: usize, dim: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("label {label} is out of range for {class_count} classes")]
    LabelOutOfRange { label: u32, class_count: u32 },
    #[error("labelled set must have at least one class")]
    NoClasses,
    #[error("row count mismatch: expected {expected}, got {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error("posterior row {row} is not a probability vector (sum {sum})")]
    InvalidPosterior { row: usize, sum: f64 },
    #[error("need at least {required} samples, got {count}")]
    TooFewSamples { count: usize, required: usize },
    #[error("covariance is not symmetric at ({row}, {col})")]
    AsymmetricCovariance { row: usize, col: usize },
    #[error("not a GMF1 file (bad magic)")]
    BadMagic,
    #[error("unsupported GMF1 version {0}")]
    VersionMismatch(u32),
    #[error("unsupported GMF1 flags {0:#x}")]
    UnsupportedFlags(u32),
    #[error("truncated GMF1 payload: expected {expected} bytes, found {actual}")]
    TruncatedPayload { expected: u64, actual: u64 },
    #[error("GMF1 file has trailing data: expected {expected} bytes, found {actual}")]
    TrailingBytes { expected: u64, actual: u64 },
    #[error("unknown backbone '{0}'")]
    UnknownBackbone(String),
    #[error("backbone '{0}' is already registered")]
    DuplicateBackbone(String),
    #[error("invalid registry manifest: {0}")]
    InvalidManifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
