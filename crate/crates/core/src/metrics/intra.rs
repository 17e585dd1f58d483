use serde::{Deserialize, Serialize};

use super::{frechet_distance, MetricError};
use crate::features::{summarize, FeatureSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntraClassFd {
    /// Unweighted mean over classes.
    pub mean: f64,
    /// `(class id, FD)` in ascending class order.
    pub per_class: Vec<(u32, f64)>,
}

/// Mean of per-class Fréchet distances between two labelled sets.
///
/// Both sets must contain exactly the same classes, each with at least two
/// samples on either side.
pub fn intra_class_fd(src: &FeatureSet, tgt: &FeatureSet) -> Result<IntraClassFd, MetricError> {
    if src.dim() != tgt.dim() {
        return Err(MetricError::DimensionMismatch { left: src.dim(), right: tgt.dim() });
    }
    let (Some(ls), Some(lt)) = (src.labels(), tgt.labels()) else {
        return Err(MetricError::MissingLabels);
    };
    let classes = ls.present_classes();
    if classes != lt.present_classes() {
        return Err(MetricError::LabelMismatch);
    }
    let mut per_class = Vec::with_capacity(classes.len());
    for &c in &classes {
        let s = src.class_subset(c).expect("labelled");
        let t = tgt.class_subset(c).expect("labelled");
        let smallest = s.count().min(t.count());
        if smallest < 2 {
            return Err(MetricError::ClassTooSmall { class: c, count: smallest });
        }
        let fd = frechet_distance(&summarize(&s)?, &summarize(&t)?)?;
        per_class.push((c, fd));
    }
    let mean = per_class.iter().map(|(_, v)| v).sum::<f64>() / per_class.len() as f64;
    Ok(IntraClassFd { mean, per_class })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Labels;

    fn labelled(points: &[(f64, u32)]) -> FeatureSet {
        let rows: Vec<[f64; 1]> = points.iter().map(|&(p, _)| [p]).collect();
        let ids = points.iter().map(|&(_, c)| c).collect();
        FeatureSet::from_rows(&rows).unwrap().with_labels(Labels::new(ids, None).unwrap()).unwrap()
    }

    #[test]
    fn single_class_equals_plain_fd() {
        let a = labelled(&[(0.0, 0), (1.0, 0), (3.0, 0)]);
        let b = labelled(&[(2.0, 0), (5.0, 0), (4.0, 0), (9.0, 0)]);
        let ifd = intra_class_fd(&a, &b).unwrap();
        let plain = frechet_distance(&summarize(&a).unwrap(), &summarize(&b).unwrap()).unwrap();
        assert_eq!(ifd.mean, plain);
    }

    #[test]
    fn two_classes_average() {
        // Class 0: samples {-1, 1} (μ 0, σ² 2) vs {2, 6} (μ 4, σ² 8): 16 + (2 + 8 - 2·4) = 18.
        // Class 1: {0, 2} (μ 1, σ² 2) vs {1, 3} (μ 2, σ² 2): 1 + 0 = 1.
        let a = labelled(&[(-1.0, 0), (0.0, 1), (1.0, 0), (2.0, 1)]);
        let b = labelled(&[(2.0, 0), (1.0, 1), (6.0, 0), (3.0, 1)]);
        let ifd = intra_class_fd(&a, &b).unwrap();
        assert!((ifd.per_class[0].1 - 18.0).abs() < 1e-9);
        assert!((ifd.per_class[1].1 - 1.0).abs() < 1e-9);
        assert!((ifd.mean - 9.5).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let a = labelled(&[(0.0, 0), (1.0, 0), (2.0, 1), (3.0, 1)]);
        let b = labelled(&[(0.0, 0), (1.0, 0), (2.0, 2), (3.0, 2)]);
        assert!(matches!(intra_class_fd(&a, &b), Err(MetricError::LabelMismatch)));
        let c = labelled(&[(0.0, 0), (1.0, 0), (2.0, 1)]);
        assert!(matches!(intra_class_fd(&a, &c), Err(MetricError::ClassTooSmall { class: 1, count: 1 })));
        let plain = FeatureSet::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(matches!(intra_class_fd(&plain, &a), Err(MetricError::MissingLabels)));
    }
}
