use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::CoreError;

/// Mean vector and PSD covariance matrix, the hypothesis returned by
/// covariance estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
}

impl GaussianParams {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Self {
        Self { mean, covariance }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Checks symmetry and positive semi-definiteness to within `tol`
    /// (absolute, on eigenvalues of the symmetrized matrix).
    pub fn validate(&self, tol: f64) -> Result<(), CoreError> {
        let c = &self.covariance;
        if c.nrows() != self.mean.len() || c.ncols() != self.mean.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.mean.len(),
                got: c.nrows(),
            });
        }
        let asym = (c - c.transpose()).norm();
        if asym > tol * c.norm().max(1.0) {
            return Err(CoreError::NotPositiveDefinite {
                detail: format!("asymmetry {asym:.3e} exceeds tolerance"),
            });
        }
        let (vals, _) = robust_spectral::jacobi_eigen(c)?;
        if vals[0] < -tol {
            return Err(CoreError::NotPositiveDefinite {
                detail: format!("eigenvalue {:.3e} below -{tol:.1e}", vals[0]),
            });
        }
        Ok(())
    }
}

/// One benchmark measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub dimension: usize,
    pub method: String,
    /// Estimator error minus the inlier-only oracle error; may be slightly
    /// negative, always finite.
    pub excess_error: f64,
    /// Seconds.
    pub wall_time: f64,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_psd_and_rejects_indefinite() {
        let good = GaussianParams::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]),
        );
        assert!(good.validate(1e-9).is_ok());

        let bad = GaussianParams::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]),
        );
        assert!(bad.validate(1e-9).is_err());
    }
}
