use super::MetricError;
use crate::features::PosteriorSet;

/// Fraction of rows whose true label is among the `k` largest posteriors.
///
/// A class outranks the label if its probability is larger, or equal with a
/// smaller class index.
pub fn top_k_accuracy(post: &PosteriorSet, labels: &[u32], k: usize) -> Result<f64, MetricError> {
    let classes = post.classes();
    if labels.len() != post.count() {
        return Err(MetricError::CountMismatch { expected: post.count(), actual: labels.len() });
    }
    if k == 0 || k > classes {
        return Err(MetricError::KTooLarge { k, n: classes });
    }
    let mut hits = 0usize;
    for (row, &label) in post.rows().zip(labels) {
        let l = label as usize;
        if l >= classes {
            return Err(MetricError::LabelOutOfRange { label, classes });
        }
        let p = row[l];
        let ahead = row.iter().enumerate().filter(|&(c, &q)| q > p || (q == p && c < l)).count();
        hits += usize::from(ahead < k);
    }
    Ok(hits as f64 / labels.len() as f64)
}
