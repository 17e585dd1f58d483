//! Evaluation metrics over feature sets, posteriors and Gaussian summaries.

mod accuracy;
mod frechet;
mod intra;
pub mod knn;
mod prdc;
mod score;

pub use accuracy::top_k_accuracy;
pub use frechet::{frechet_breakdown, frechet_distance, FrechetBreakdown, NEGATIVE_EIGEN_WARN};
pub use intra::{intra_class_fd, IntraClassFd};
pub use knn::{knn_radii, squared_distance};
pub use prdc::{prdc, ManifoldParams, PrdcResult};
pub use score::{classifier_score, split_ranges, ScoreResult};

use crate::features::FeatureError;

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("symmetric eigendecomposition did not converge")]
    NonConvergentEigensolve,
    #[error("cannot split {rows} rows into {splits} non-empty chunks")]
    EmptyChunk { rows: usize, splits: usize },
    #[error("k = {k} is invalid for {n} candidates")]
    KTooLarge { k: usize, n: usize },
    #[error("feature sets must both carry labels")]
    MissingLabels,
    #[error("source and target contain different class sets")]
    LabelMismatch,
    #[error("class {class} has only {count} sample(s); at least 2 are needed on each side")]
    ClassTooSmall { class: u32, count: usize },
    #[error("label {label} is out of range for {classes} classes")]
    LabelOutOfRange { label: u32, classes: usize },
    #[error("row count mismatch: expected {expected}, got {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Feature(#[from] FeatureError),
}
