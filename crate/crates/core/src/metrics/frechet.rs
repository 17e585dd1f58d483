use super::MetricError;
use crate::features::GaussianSummary;
use crate::linalg;

/// Relative size of a negative eigenvalue of `Σa^{1/2} Σb Σa^{1/2}` that is
/// reported as numerically significant.
pub const NEGATIVE_EIGEN_WARN: f64 = 1e-6;

/// Fréchet distance with the intermediate terms kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetBreakdown {
    /// `‖μa − μb‖²`
    pub mean_term: f64,
    /// `Tr(Σa) + Tr(Σb)`
    pub trace_term: f64,
    /// `Tr((Σa Σb)^{1/2})`
    pub trace_sqrt: f64,
    /// Most negative eigenvalue of the symmetrized product, if any went below zero.
    pub clamped_eigenvalue: Option<f64>,
    pub distance: f64,
}

/// `‖μa − μb‖² + Tr(Σa + Σb − 2 (Σa Σb)^{1/2})`, clamped at zero.
pub fn frechet_distance(a: &GaussianSummary, b: &GaussianSummary) -> Result<f64, MetricError> {
    Ok(frechet_breakdown(a, b)?.distance)
}

pub fn frechet_breakdown(a: &GaussianSummary, b: &GaussianSummary) -> Result<FrechetBreakdown, MetricError> {
    if a.dim() != b.dim() {
        return Err(MetricError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let d = a.dim();
    let mean_term: f64 = a.mean().iter().zip(b.mean()).map(|(x, y)| (x - y) * (x - y)).sum();
    let trace = |c: &[f64]| (0..d).map(|i| c[i * d + i]).sum::<f64>();
    let trace_term = trace(a.cov()) + trace(b.cov());

    let ts = linalg::trace_sqrt_product(a.cov(), b.cov(), d).map_err(|_| MetricError::NonConvergentEigensolve)?;
    let clamped_eigenvalue = (ts.min_eigenvalue < 0.0).then_some(ts.min_eigenvalue);
    if ts.min_eigenvalue < -NEGATIVE_EIGEN_WARN * ts.max_eigenvalue.abs() {
        log::warn!(
            "covariance product has a significantly negative eigenvalue {:.3e} (largest {:.3e}); clamped to zero",
            ts.min_eigenvalue,
            ts.max_eigenvalue
        );
    }
    let raw = mean_term + trace_term - 2.0 * ts.trace;
    Ok(FrechetBreakdown { mean_term, trace_term, trace_sqrt: ts.trace, clamped_eigenvalue, distance: raw.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(mu: f64, var: f64) -> GaussianSummary {
        GaussianSummary::new(vec![mu], vec![var], 100).unwrap()
    }

    #[test]
    fn one_dimensional_closed_form() {
        let fd = frechet_distance(&g1(0.0, 1.0), &g1(3.0, 4.0)).unwrap();
        assert!((fd - 10.0).abs() <= 1e-9 * 10.0, "{fd}");
    }

    #[test]
    fn identical_summaries_are_zero() {
        let a = GaussianSummary::new(vec![1.0, -2.0], vec![2.0, 0.3, 0.3, 1.0], 10).unwrap();
        assert!(frechet_distance(&a, &a).unwrap() < 1e-6);
    }

    #[test]
    fn dimension_mismatch() {
        let a = g1(0.0, 1.0);
        let b = GaussianSummary::new(vec![0.0, 0.0], vec![1.0, 0.0, 0.0, 1.0], 3).unwrap();
        assert!(matches!(frechet_distance(&a, &b), Err(MetricError::DimensionMismatch { left: 1, right: 2 })));
    }

    #[test]
    fn breakdown_terms() {
        let b = frechet_breakdown(&g1(0.0, 1.0), &g1(3.0, 4.0)).unwrap();
        assert_eq!(b.mean_term, 9.0);
        assert_eq!(b.trace_term, 5.0);
        assert!((b.trace_sqrt - 2.0).abs() < 1e-12);
        assert!(b.clamped_eigenvalue.is_none());
    }

    #[test]
    fn singular_covariances_are_handled() {
        // Rank-one covariances: sqrt of a PSD product with zero eigenvalues.
        let a = GaussianSummary::new(vec![0.0, 0.0], vec![1.0, 1.0, 1.0, 1.0], 2).unwrap();
        let b = GaussianSummary::new(vec![0.0, 0.0], vec![1.0, -1.0, -1.0, 1.0], 2).unwrap();
        // Orthogonal supports: Tr term is 2 + 2 - 0.
        let fd = frechet_distance(&a, &b).unwrap();
        assert!((fd - 4.0).abs() < 1e-9, "{fd}");
        assert!(frechet_distance(&a, &a).unwrap() < 1e-9);
    }
}
