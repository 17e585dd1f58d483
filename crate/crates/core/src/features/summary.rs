use super::set::FeatureSet;
use super::FeatureError;
use crate::linalg;

/// Relative tolerance for the covariance symmetry check.
const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// First and second moments `(μ, Σ)` of a feature set.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSummary {
    dim: usize,
    mean: Vec<f64>,
    cov: Vec<f64>,
    sample_count: usize,
}

impl GaussianSummary {
    /// `cov` is row-major `dim × dim` and must be symmetric.
    pub fn new(mean: Vec<f64>, cov: Vec<f64>, sample_count: usize) -> Result<Self, FeatureError> {
        let dim = mean.len();
        if dim == 0 {
            return Err(FeatureError::Empty);
        }
        if cov.len() != dim * dim {
            return Err(FeatureError::RaggedMatrix { len: cov.len(), dim });
        }
        if let Some(i) = mean.iter().chain(&cov).position(|v| !v.is_finite()) {
            return Err(FeatureError::NonFiniteValue { row: i / dim, col: i % dim });
        }
        let scale = cov.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (cov[i * dim + j] - cov[j * dim + i]).abs() > SYMMETRY_TOLERANCE * scale {
                    return Err(FeatureError::AsymmetricCovariance { row: i, col: j });
                }
            }
        }
        Ok(Self { dim, mean, cov, sample_count })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Row-major covariance.
    pub fn cov(&self) -> &[f64] {
        &self.cov
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }
}

/// Sample mean and unbiased covariance (divisor `N - 1`) of a feature set.
pub fn summarize(fs: &FeatureSet) -> Result<GaussianSummary, FeatureError> {
    let n = fs.count();
    if n < 2 {
        return Err(FeatureError::TooFewSamples { count: n, required: 2 });
    }
    let (mean, cov) = linalg::sample_moments(fs.values(), n, fs.dim());
    Ok(GaussianSummary { dim: fs.dim(), mean, cov, sample_count: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_samples_in_one_dim() {
        let s = summarize(&FeatureSet::from_rows(&[[0.0], [2.0]]).unwrap()).unwrap();
        assert_eq!(s.mean(), &[1.0]);
        assert_eq!(s.cov(), &[2.0]);
        assert_eq!(s.sample_count(), 2);
    }

    #[test]
    fn repeated_vector_has_zero_covariance() {
        let rows = vec![[1.5, -2.0, 7.25]; 9];
        let s = summarize(&FeatureSet::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(s.mean(), &[1.5, -2.0, 7.25]);
        assert!(s.cov().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn too_few_samples() {
        let fs = FeatureSet::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(matches!(summarize(&fs), Err(FeatureError::TooFewSamples { count: 1, .. })));
    }

    #[test]
    fn new_checks_symmetry() {
        assert!(GaussianSummary::new(vec![0.0, 0.0], vec![1.0, 0.5, 0.4, 1.0], 10).is_err());
        assert!(GaussianSummary::new(vec![0.0, 0.0], vec![1.0, 0.5, 0.5, 1.0], 10).is_ok());
        assert!(GaussianSummary::new(vec![0.0], vec![1.0, 0.0], 10).is_err());
    }

    #[test]
    fn covariance_is_exactly_symmetric() {
        let rows: Vec<[f64; 4]> = (0..50)
            .map(|i| {
                let t = i as f64;
                [t.sin(), (t * 0.7).cos(), t * 0.01, (t * 1.3).sin() * t.cos()]
            })
            .collect();
        let s = summarize(&FeatureSet::from_rows(&rows).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(s.cov()[i * 4 + j], s.cov()[j * 4 + i]);
            }
        }
    }
}
