//! Exact k-nearest-neighbour radii under the Euclidean metric.
//!
//! Features are high dimensional (hundreds to thousands of dims), where tree
//! indices degrade to a linear scan, so this is a blocked brute-force search.
//! Rows are independent and may be processed by parallel workers; each
//! worker's output lands at its row index, so results never depend on the
//! worker count.

use super::MetricError;
use crate::features::FeatureSet;
pub(crate) use crate::par::map_indices;

/// Squared Euclidean distance accumulated in `f64`, coordinates in order.
///
/// Every distance in this crate goes through this function so that the same
/// pair always yields the same bits.
#[inline]
pub fn squared_distance(a: &[f32], b: &[f32]) -> f64 {
    let mut acc = 0.0f64;
    for (&x, &y) in a.iter().zip(b) {
        let d = x as f64 - y as f64;
        acc += d * d;
    }
    acc
}

/// Squared distance from every row to its `k`-th nearest other row, for each
/// `k` in `ks` (one output vector per entry of `ks`).
///
/// The row itself is excluded. Which of several equidistant neighbours counts
/// as "k-th" does not change the distance, so the result is unique.
pub fn knn_squared_radii_multi(fs: &FeatureSet, ks: &[usize]) -> Result<Vec<Vec<f64>>, MetricError> {
    let n = fs.count();
    for &k in ks {
        if k == 0 || k >= n {
            return Err(MetricError::KTooLarge { k, n });
        }
    }
    let per_row: Vec<Vec<f64>> = map_indices(n, |i| {
        let me = fs.row(i);
        let mut d: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| squared_distance(me, fs.row(j))).collect();
        ks.iter()
            .map(|&k| {
                let (_, kth, _) = d.select_nth_unstable_by(k - 1, f64::total_cmp);
                *kth
            })
            .collect()
    });
    Ok((0..ks.len()).map(|q| per_row.iter().map(|r| r[q]).collect()).collect())
}

/// Distance from each row to its `k`-th nearest other row.
pub fn knn_radii(fs: &FeatureSet, k: usize) -> Result<Vec<f64>, MetricError> {
    let sq = knn_squared_radii_multi(fs, &[k])?.pop().expect("one k requested");
    Ok(sq.into_iter().map(f64::sqrt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_on_a_line() {
        let fs = FeatureSet::from_rows(&[[0.0], [1.0], [4.0]]).unwrap();
        assert_eq!(knn_radii(&fs, 1).unwrap(), vec![1.0, 1.0, 3.0]);
        assert_eq!(knn_radii(&fs, 2).unwrap(), vec![4.0, 3.0, 4.0]);
    }

    #[test]
    fn duplicates_have_zero_radius() {
        let fs = FeatureSet::from_rows(&[[1.0, 2.0], [5.0, 5.0], [1.0, 2.0]]).unwrap();
        let r = knn_radii(&fs, 1).unwrap();
        assert_eq!(r[0], 0.0);
        assert_eq!(r[2], 0.0);
        assert_eq!(r[1], 5.0);
    }

    #[test]
    fn k_must_be_below_n() {
        let fs = FeatureSet::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(matches!(knn_radii(&fs, 2), Err(MetricError::KTooLarge { k: 2, n: 2 })));
        assert!(knn_radii(&fs, 0).is_err());
        assert_eq!(knn_radii(&fs, 1).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn multi_matches_single() {
        let rows: Vec<[f64; 3]> = (0..40)
            .map(|i| {
                let t = i as f64;
                [(t * 0.37).sin(), (t * 1.1).cos(), t * 0.05]
            })
            .collect();
        let fs = FeatureSet::from_rows(&rows).unwrap();
        let multi = knn_squared_radii_multi(&fs, &[3, 5]).unwrap();
        for (q, k) in [3, 5].into_iter().enumerate() {
            let single: Vec<f64> = knn_radii(&fs, k).unwrap();
            let from_multi: Vec<f64> = multi[q].iter().map(|v| v.sqrt()).collect();
            assert_eq!(single, from_multi);
        }
    }
}
