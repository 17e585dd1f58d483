//! Sample-efficiency curves, metric reports and model ranking.

mod curve;
mod ranking;
mod report;
pub mod rng;

pub use curve::{
    real_to_real_curve, relative_fd_curve, CurveMode, EfficiencyCurve, DEFAULT_FRACTIONS, ZERO_FD_RELATIVE,
};
pub use ranking::{rank_models, RankCell, RankRow, RankingTable};
pub use report::{
    Direction, MetricEntry, MetricKind, MetricReport, Protocol, Resizers, REPORT_SCHEMA, TOOLKIT_VERSION,
};
pub use rng::{sample_indices, Sampling, SeededRng};

use crate::features::FeatureError;
use crate::metrics::MetricError;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid fraction grid: {0}")]
    InvalidFractions(String),
    #[error("fraction {fraction} yields {count} sample(s); at least 2 are needed")]
    FractionTooSmall { fraction: f64, count: usize },
    #[error("reference FD is zero (up to round-off), so a relative curve is undefined")]
    ZeroReferenceFd,
    #[error("no reports to rank")]
    NoReports,
    #[error("reports cannot be ranked together: {0}")]
    HeterogeneousReports(String),
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}
