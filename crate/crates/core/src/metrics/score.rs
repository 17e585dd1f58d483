use serde::{Deserialize, Serialize};

use super::MetricError;
use crate::features::PosteriorSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreResult {
    pub mean: f64,
    /// Population standard deviation over splits; zero for a single split.
    pub std: f64,
}

/// Row ranges of `n` rows cut into `splits` contiguous chunks whose sizes
/// differ by at most one (earlier chunks take the remainder).
pub fn split_ranges(n: usize, splits: usize) -> Vec<std::ops::Range<usize>> {
    let (q, r) = (n / splits, n % splits);
    let mut start = 0;
    (0..splits)
        .map(|s| {
            let len = q + usize::from(s < r);
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

/// Exponentiated mean KL divergence from each posterior to the chunk marginal.
///
/// The result is the classifier score (IS/SS/TS depending on backbone),
/// averaged over `splits` contiguous chunks.
pub fn classifier_score(post: &PosteriorSet, splits: usize) -> Result<ScoreResult, MetricError> {
    if splits == 0 || splits > post.count() {
        return Err(MetricError::EmptyChunk { rows: post.count(), splits });
    }
    let k = post.classes();
    let scores: Vec<f64> = split_ranges(post.count(), splits)
        .into_iter()
        .map(|range| {
            let m = range.len() as f64;
            let mut marginal = vec![0.0f64; k];
            for i in range.clone() {
                for (acc, &p) in marginal.iter_mut().zip(post.row(i)) {
                    *acc += p;
                }
            }
            marginal.iter_mut().for_each(|v| *v /= m);
            let kl_sum: f64 = range
                .map(|i| {
                    post.row(i)
                        .iter()
                        .zip(&marginal)
                        .filter(|(&p, _)| p > 0.0)
                        .map(|(&p, &q)| p * (p.ln() - q.ln()))
                        .sum::<f64>()
                })
                .sum();
            // exp(mutual information) lies in [1, K]; clamp rounding noise.
            (kl_sum / m).exp().clamp(1.0, k as f64)
        })
        .collect();
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    Ok(ScoreResult { mean, std: if splits == 1 { 0.0 } else { var.sqrt() } })
}
