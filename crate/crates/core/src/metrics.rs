use nalgebra::{DMatrix, DVector};

use crate::CoreError;

/// Euclidean distance between an estimate and the truth.
pub fn l2_error(estimate: &DVector<f64>, truth: &DVector<f64>) -> Result<f64, CoreError> {
    if estimate.len() != truth.len() {
        return Err(CoreError::DimensionMismatch {
            expected: truth.len(),
            got: estimate.len(),
        });
    }
    Ok((estimate - truth).norm())
}

/// Mahalanobis covariance error `‖Σ^{-1/2} Σ̂ Σ^{-1/2} − I‖_F`.
///
/// Computed through the Cholesky factor of the truth: for Σ = LLᵀ the matrix
/// L⁻¹Σ̂L⁻ᵀ is orthogonally congruent to Σ^{-1/2}Σ̂Σ^{-1/2}, so the Frobenius
/// norm is unchanged and no symmetric square root is needed.
pub fn mahalanobis_error(estimate: &DMatrix<f64>, truth: &DMatrix<f64>) -> Result<f64, CoreError> {
    if estimate.nrows() != truth.nrows() || estimate.ncols() != truth.ncols() {
        return Err(CoreError::DimensionMismatch {
            expected: truth.nrows(),
            got: estimate.nrows(),
        });
    }
    let chol = truth
        .clone()
        .cholesky()
        .ok_or_else(|| CoreError::NotPositiveDefinite {
            detail: "truth covariance is not positive definite".into(),
        })?;
    let l = chol.l();
    // B = L⁻¹ Σ̂ L⁻ᵀ via two triangular solves.
    let mut b = estimate.clone();
    l.solve_lower_triangular_mut(&mut b);
    let mut bt = b.transpose();
    l.solve_lower_triangular_mut(&mut bt);
    let d = truth.nrows();
    Ok((bt.transpose() - DMatrix::<f64>::identity(d, d)).norm())
}
