use serde::{Deserialize, Serialize};

use super::rng::{sample_indices, Sampling, SeededRng, GENERATOR_NAME};
use super::AnalysisError;
use crate::features::{summarize, FeatureSet, GaussianSummary};
use crate::metrics::frechet_distance;
use crate::par::map_indices;

pub const DEFAULT_FRACTIONS: [f64; 7] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];

/// A reference FD at or below this fraction of the combined covariance trace
/// is round-off, and the relative curve is undefined.
pub const ZERO_FD_RELATIVE: f64 = 1e-9;

fn trace(s: &GaussianSummary) -> f64 {
    (0..s.dim()).map(|i| s.cov()[i * s.dim() + i]).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    /// FD of a target subsample divided by the full-target FD.
    RelativeToGenerated,
    /// FD between the full source and a subsample of itself.
    RealToReal,
}

/// FD as a function of the sampled fraction of a feature set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyCurve {
    pub mode: CurveMode,
    pub backbone: String,
    pub seed: u64,
    pub sampling: Sampling,
    pub generator: String,
    /// Denominator of the relative mode; `None` for real-to-real.
    pub reference_fd: Option<f64>,
    pub fractions: Vec<f64>,
    /// Rows drawn at each fraction.
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl EfficiencyCurve {
    pub fn with_backbone(mut self, backbone: impl Into<String>) -> Self {
        self.backbone = backbone.into();
        self
    }

    /// `fraction,value` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,count,value\n");
        for ((f, c), v) in self.fractions.iter().zip(&self.counts).zip(&self.values) {
            out.push_str(&format!("{f},{c},{v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }
}

fn check_fractions(fractions: &[f64]) -> Result<(), AnalysisError> {
    let Some(&last) = fractions.last() else {
        return Err(AnalysisError::InvalidFractions("empty fraction list".into()));
    };
    if last != 1.0 {
        return Err(AnalysisError::InvalidFractions(format!("last fraction must be 1.0, got {last}")));
    }
    if let Some(&f) = fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        return Err(AnalysisError::InvalidFractions(format!("fraction {f} is outside (0, 1]")));
    }
    if fractions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::InvalidFractions("fractions must be strictly increasing".into()));
    }
    Ok(())
}

fn counts_for(fractions: &[f64], population: usize) -> Result<Vec<usize>, AnalysisError> {
    fractions
        .iter()
        .map(|&f| {
            let count = (f * population as f64).floor() as usize;
            if count < 2 {
                Err(AnalysisError::FractionTooSmall { fraction: f, count })
            } else {
                Ok(count)
            }
        })
        .collect()
}

/// Summary of `count` rows drawn with the point's own stream; the full set
/// (in original order) when `count` covers it.
fn subsample_summary(
    fs: &FeatureSet,
    count: usize,
    seed: u64,
    stream: u64,
    sampling: Sampling,
) -> Result<GaussianSummary, AnalysisError> {
    if count == fs.count() {
        return Ok(summarize(fs)?);
    }
    let mut rng = SeededRng::new(seed, stream);
    let idx = sample_indices(fs.count(), count, &mut rng, sampling);
    Ok(summarize(&fs.select_rows(&idx))?)
}

/// Relative FD of growing target subsamples against fixed source moments.
///
/// The terminal value is exactly 1.0: the last point reuses the full target
/// and divides its FD by itself.
pub fn relative_fd_curve(
    source: &GaussianSummary,
    target: &FeatureSet,
    fractions: &[f64],
    seed: u64,
    sampling: Sampling,
) -> Result<EfficiencyCurve, AnalysisError> {
    check_fractions(fractions)?;
    let counts = counts_for(fractions, target.count())?;
    let full = summarize(target)?;
    let reference_fd = frechet_distance(source, &full)?;
    if reference_fd <= ZERO_FD_RELATIVE * (trace(source) + trace(&full)).max(1.0) {
        return Err(AnalysisError::ZeroReferenceFd);
    }
    let values = map_indices(counts.len(), |p| -> Result<f64, AnalysisError> {
        let sub = subsample_summary(target, counts[p], seed, p as u64, sampling)?;
        Ok(frechet_distance(source, &sub)? / reference_fd)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(EfficiencyCurve {
        mode: CurveMode::RelativeToGenerated,
        backbone: String::new(),
        seed,
        sampling,
        generator: GENERATOR_NAME.into(),
        reference_fd: Some(reference_fd),
        fractions: fractions.to_vec(),
        counts,
        values,
    })
}

/// FD between a set and subsamples of itself; zero at fraction 1.0.
pub fn real_to_real_curve(
    source: &FeatureSet,
    fractions: &[f64],
    seed: u64,
    sampling: Sampling,
) -> Result<EfficiencyCurve, AnalysisError> {
    check_fractions(fractions)?;
    let counts = counts_for(fractions, source.count())?;
    let full = summarize(source)?;
    let values = map_indices(counts.len(), |p| -> Result<f64, AnalysisError> {
        let sub = subsample_summary(source, counts[p], seed, p as u64, sampling)?;
        Ok(frechet_distance(&full, &sub)?)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(EfficiencyCurve {
        mode: CurveMode::RealToReal,
        backbone: String::new(),
        seed,
        sampling,
        generator: GENERATOR_NAME.into(),
        reference_fd: None,
        fractions: fractions.to_vec(),
        counts,
        values,
    })
}
