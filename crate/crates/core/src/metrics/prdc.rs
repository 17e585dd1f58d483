use serde::{Deserialize, Serialize};

use super::knn::{knn_squared_radii_multi, map_indices, squared_distance};
use super::MetricError;
use crate::features::FeatureSet;

/// Neighbour counts for the kNN manifold estimates. Distance is Euclidean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldParams {
    /// `k` for Precision and Recall.
    pub k_pr: usize,
    /// `k` for Density and Coverage.
    pub k_dc: usize,
}

impl Default for ManifoldParams {
    fn default() -> Self {
        ManifoldParams { k_pr: 3, k_dc: 5 }
    }
}

impl ManifoldParams {
    /// Both `k` must be at least one and below the smaller set size.
    pub fn validate(&self, n: usize, m: usize) -> Result<(), MetricError> {
        let limit = n.min(m);
        for k in [self.k_pr, self.k_dc] {
            if k == 0 || k >= limit {
                return Err(MetricError::KTooLarge { k, n: limit });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrdcResult {
    pub precision: f64,
    pub recall: f64,
    pub density: f64,
    pub coverage: f64,
}

/// Target rows handled per work item.
const TARGET_BLOCK: usize = 64;

struct BlockTally {
    precise: usize,
    density_hits: usize,
    covered: Vec<bool>,
    recalled: Vec<bool>,
}

/// Precision, Recall, Density and Coverage of `tgt` (generated) against
/// `src` (real) using closed kNN balls.
///
/// One pass over the `N × M` distance matrix in blocks of target rows; each
/// block returns integer counts and membership flags, which are merged with
/// `+` and `||`, so the result is bit-identical for any worker count.
pub fn prdc(src: &FeatureSet, tgt: &FeatureSet, params: ManifoldParams) -> Result<PrdcResult, MetricError> {
    if src.dim() != tgt.dim() {
        return Err(MetricError::DimensionMismatch { left: src.dim(), right: tgt.dim() });
    }
    let (n, m) = (src.count(), tgt.count());
    params.validate(n, m)?;

    let src_radii = knn_squared_radii_multi(src, &[params.k_pr, params.k_dc])?;
    let (src_pr, src_dc) = (&src_radii[0], &src_radii[1]);
    let tgt_pr = knn_squared_radii_multi(tgt, &[params.k_pr])?.pop().expect("one k requested");

    let blocks = m.div_ceil(TARGET_BLOCK);
    let tallies = map_indices(blocks, |b| {
        let mut t = BlockTally { precise: 0, density_hits: 0, covered: vec![false; n], recalled: vec![false; n] };
        let first = b * TARGET_BLOCK;
        for (j, &radius) in tgt_pr.iter().enumerate().take((first + TARGET_BLOCK).min(m)).skip(first) {
            let tj = tgt.row(j);
            let mut inside_real = false;
            for i in 0..n {
                let d = squared_distance(tj, src.row(i));
                inside_real |= d <= src_pr[i];
                if d <= src_dc[i] {
                    t.density_hits += 1;
                    t.covered[i] = true;
                }
                if d <= radius {
                    t.recalled[i] = true;
                }
            }
            t.precise += usize::from(inside_real);
        }
        t
    });

    let mut precise = 0;
    let mut density_hits = 0;
    let mut covered = vec![false; n];
    let mut recalled = vec![false; n];
    for t in tallies {
        precise += t.precise;
        density_hits += t.density_hits;
        covered.iter_mut().zip(&t.covered).for_each(|(c, &x)| *c |= x);
        recalled.iter_mut().zip(&t.recalled).for_each(|(r, &x)| *r |= x);
    }
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count();
    Ok(PrdcResult {
        precision: precise as f64 / m as f64,
        recall: count(&recalled) as f64 / n as f64,
        density: density_hits as f64 / (params.k_dc as f64 * m as f64),
        coverage: count(&covered) as f64 / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> FeatureSet {
        FeatureSet::from_rows(&points.iter().map(|&p| [p]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hand_enumerated_case() {
        let r = prdc(&line(&[0.0, 1.0, 4.0]), &line(&[0.5, 10.0]), ManifoldParams { k_pr: 1, k_dc: 1 }).unwrap();
        assert_eq!(r.precision, 0.5);
        assert_eq!(r.recall, 1.0);
        assert_eq!(r.density, 1.0);
        assert_eq!(r.coverage, 2.0 / 3.0);
    }

    #[test]
    fn identical_sets_are_perfect() {
        let pts: Vec<f64> = (0..20).map(|i| (i * i) as f64 * 0.1).collect();
        let r = prdc(&line(&pts), &line(&pts), ManifoldParams { k_pr: 3, k_dc: 5 }).unwrap();
        assert_eq!((r.precision, r.recall, r.coverage), (1.0, 1.0, 1.0));
        assert!(r.density >= 1.0 / 5.0);
    }

    #[test]
    fn guards() {
        let a = line(&[0.0, 1.0, 2.0]);
        let b = FeatureSet::from_rows(&[[0.0, 1.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert!(matches!(prdc(&a, &b, ManifoldParams::default()), Err(MetricError::DimensionMismatch { .. })));
        assert!(matches!(
            prdc(&a, &a, ManifoldParams { k_pr: 3, k_dc: 1 }),
            Err(MetricError::KTooLarge { k: 3, n: 3 })
        ));
    }

    #[test]
    fn density_can_exceed_one() {
        // A tight generated cluster sitting inside many real balls.
        let real = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let fake = line(&[2.0, 2.0, 2.0, 2.0]);
        let r = prdc(&real, &fake, ManifoldParams { k_pr: 1, k_dc: 2 }).unwrap();
        assert!(r.density > 1.0, "{r:?}");
        assert_eq!(r.precision, 1.0);
    }
}
