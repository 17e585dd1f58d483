//! Evaluation toolkit for generative image models.
//!
//! - [`pixel`]: PIL-compatible antialiased resampling, 8-bit quantization,
//!   PNG/JPEG codecs and backbone input preparation.
//! - [`features`]: feature and posterior sets, Gaussian summaries, the GMF1
//!   binary format and the backbone registry.
//! - [`metrics`]: Fréchet distance, classifier score, precision, recall,
//!   density, coverage, intra-class FD and top-k accuracy.
//! - [`analysis`]: sample-efficiency curves, metric reports and ranking.
//!
//! Heavy loops run on rayon when the default `parallel` feature is enabled.
//! Results never depend on the number of worker threads.

pub mod analysis;
pub mod features;
pub mod linalg;
pub mod metrics;
mod par;
pub mod pixel;
