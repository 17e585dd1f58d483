//! Dense symmetric linear algebra on row-major `f64` buffers, backed by faer.

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par, Side};

/// Symmetric eigensolver failed to converge.
#[derive(Debug, Clone, thiserror::Error)]
#[error("symmetric eigendecomposition did not converge")]
pub struct EigenError;

fn mat_from_rowmajor(values: &[f64], d: usize) -> Mat<f64> {
    Mat::from_fn(d, d, |i, j| values[i * d + j])
}

fn mat_to_rowmajor(m: MatRef<'_, f64>) -> Vec<f64> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)]);
        }
    }
    out
}

fn symmetrize(m: &mut Mat<f64>) {
    let d = m.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Two-pass sample moments of an `n × d` row-major `f32` matrix.
///
/// Returns the mean and the unbiased (divisor `n - 1`) covariance, row-major
/// and exactly symmetric. Requires `n >= 2`.
pub fn sample_moments(values: &[f32], n: usize, d: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(n >= 2 && values.len() == n * d);
    let mut mean = vec![0.0f64; d];
    for row in values.chunks_exact(d) {
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v as f64;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let centered = Mat::<f64>::from_fn(n, d, |i, j| values[i * d + j] as f64 - mean[j]);
    let mut cov = Mat::<f64>::zeros(d, d);
    matmul(cov.as_mut(), Accum::Replace, centered.transpose(), centered.as_ref(), 1.0 / (n - 1) as f64, Par::Seq);
    symmetrize(&mut cov);
    (mean, mat_to_rowmajor(cov.as_ref()))
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix.
pub fn symmetric_eigen(values: &[f64], d: usize) -> Result<(Vec<f64>, Mat<f64>), EigenError> {
    let m = mat_from_rowmajor(values, d);
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| EigenError)?;
    let s = evd.S().column_vector();
    let eig: Vec<f64> = (0..d).map(|i| s[i]).collect();
    if eig.iter().any(|v| !v.is_finite()) {
        return Err(EigenError);
    }
    Ok((eig, evd.U().to_owned()))
}

/// Principal square root of a symmetric PSD matrix, clamping negative
/// eigenvalues to zero.
pub fn psd_sqrt(values: &[f64], d: usize) -> Result<Vec<f64>, EigenError> {
    let (eig, u) = symmetric_eigen(values, d)?;
    let scaled = Mat::<f64>::from_fn(d, d, |i, j| u[(i, j)] * eig[j].max(0.0).sqrt());
    let mut out = Mat::<f64>::zeros(d, d);
    matmul(out.as_mut(), Accum::Replace, scaled.as_ref(), u.transpose(), 1.0, Par::Seq);
    symmetrize(&mut out);
    Ok(mat_to_rowmajor(out.as_ref()))
}

/// Spectrum diagnostics of the symmetrized product used by [`trace_sqrt_product`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSqrt {
    /// `Tr((A B)^{1/2})` with negative eigenvalues clamped at zero.
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// `Tr((A B)^{1/2})` for symmetric PSD `A`, `B`, computed from the eigenvalues
/// of the similar symmetric matrix `A^{1/2} B A^{1/2}`.
pub fn trace_sqrt_product(a: &[f64], b: &[f64], d: usize) -> Result<TraceSqrt, EigenError> {
    let root_a = mat_from_rowmajor(&psd_sqrt(a, d)?, d);
    let mb = mat_from_rowmajor(b, d);
    let mut tmp = Mat::<f64>::zeros(d, d);
    matmul(tmp.as_mut(), Accum::Replace, root_a.as_ref(), mb.as_ref(), 1.0, Par::Seq);
    let mut prod = Mat::<f64>::zeros(d, d);
    matmul(prod.as_mut(), Accum::Replace, tmp.as_ref(), root_a.as_ref(), 1.0, Par::Seq);
    symmetrize(&mut prod);
    let eig = prod.self_adjoint_eigenvalues(Side::Lower).map_err(|_| EigenError)?;
    if eig.iter().any(|v| !v.is_finite()) {
        return Err(EigenError);
    }
    let min_eigenvalue = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eigenvalue = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let trace = eig.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok(TraceSqrt { trace, min_eigenvalue, max_eigenvalue })
}
