use nalgebra::{DMatrix, DVector};

use crate::{jacobi_eigen, SpectralError};

/// Relative eigenvalue floor below which a matrix is treated as singular.
const SINGULARITY_FLOOR: f64 = 1e-10;

/// Inverse square root of a symmetric PSD matrix.
///
/// Returns the symmetric `R` with `R·M·R = I`. Fails if the smallest
/// eigenvalue of the symmetrized input is below `1e-10·‖M‖₂`, naming the
/// offending eigenvalue.
pub fn inverse_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>, SpectralError> {
    let (vals, vecs) = jacobi_eigen(m)?;
    let spectral_norm = vals.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let floor = SINGULARITY_FLOOR * spectral_norm.max(f64::MIN_POSITIVE);
    let min = vals[0];
    if min < floor {
        return Err(SpectralError::Singular {
            eigenvalue: min,
            floor,
        });
    }
    let inv_sqrt = DVector::from_iterator(vals.len(), vals.iter().map(|&l| 1.0 / l.sqrt()));
    Ok(&vecs * DMatrix::from_diagonal(&inv_sqrt) * vecs.transpose())
}

/// Row-major flattening of a d×d matrix into a d²-vector.
pub fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    let d = m.nrows();
    debug_assert_eq!(d, m.ncols(), "flatten expects a square matrix");
    DVector::from_fn(d * d, |k, _| m[(k / d, k % d)])
}

/// Inverse of [`flatten`]: reshapes a d²-vector into a d×d matrix.
pub fn sharpen(w: &DVector<f64>) -> Result<DMatrix<f64>, SpectralError> {
    let len = w.len();
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len {
        return Err(SpectralError::LengthNotSquare { len });
    }
    Ok(DMatrix::from_fn(d, d, |i, j| w[i * d + j]))
}

/// Variance of the centered quadratic form `(yᵀMy − tr M)/√2` under
/// `y ~ N(0, I)`, in closed form: `‖(M + Mᵀ)/2‖_F²`.
pub fn variance_of_quadratic(m: &DMatrix<f64>) -> f64 {
    let sym = 0.5 * (m + m.transpose());
    sym.norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn inverse_sqrt_of_identity_is_identity() {
        let m = DMatrix::<f64>::identity(5, 5);
        let r = inverse_sqrt(&m).unwrap();
        assert!((r - DMatrix::<f64>::identity(5, 5)).norm() <= 1e-12);
    }

    #[test]
    fn inverse_sqrt_of_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]));
        let r = inverse_sqrt(&m).unwrap();
        assert_relative_eq!(r[(0, 0)], 0.5, epsilon = 1e-12);
        assert_relative_eq!(r[(1, 1)], 1.0 / 3.0, epsilon = 1e-12);
        assert!(r[(0, 1)].abs() <= 1e-14);
    }

    #[test]
    fn inverse_sqrt_residual_and_commutation_on_random_pd() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let b = DMatrix::from_fn(8, 8, |_, _| rng.sample::<f64, _>(StandardNormal));
            let m = &b * b.transpose() + 0.1 * DMatrix::<f64>::identity(8, 8);
            let r = inverse_sqrt(&m).unwrap();
            let resid = (&r * &m * &r - DMatrix::<f64>::identity(8, 8)).norm();
            assert!(resid <= 1e-8, "residual {resid}");
            let comm = (&r * &m - &m * &r).norm();
            assert!(comm <= 1e-8 * m.norm(), "commutator {comm}");
            // R is symmetric.
            assert!((&r - r.transpose()).norm() <= 1e-10 * r.norm());
        }
    }

    #[test]
    fn inverse_sqrt_reports_singular_eigenvalue() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0]));
        match inverse_sqrt(&m) {
            Err(SpectralError::Singular { eigenvalue, .. }) => {
                assert!(eigenvalue.abs() <= 1e-15);
            }
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn flatten_identity_two() {
        let m = DMatrix::<f64>::identity(2, 2);
        let w = flatten(&m);
        assert_eq!(w.as_slice(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn sharpen_inverts_flatten() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let m = DMatrix::from_fn(5, 5, |_, _| rng.sample::<f64, _>(StandardNormal));
        let back = sharpen(&flatten(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn flatten_inner_product_is_trace_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let a = DMatrix::from_fn(4, 4, |_, _| rng.sample::<f64, _>(StandardNormal));
        let b = DMatrix::from_fn(4, 4, |_, _| rng.sample::<f64, _>(StandardNormal));
        let lhs = flatten(&a).dot(&flatten(&b));
        let rhs = (a.transpose() * &b).trace();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-10);
    }

    #[test]
    fn sharpen_rejects_non_square_length() {
        let w = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            sharpen(&w),
            Err(SpectralError::LengthNotSquare { len: 3 })
        ));
    }

    #[test]
    fn variance_of_quadratic_closed_form_cases() {
        let mut e11 = DMatrix::<f64>::zeros(4, 4);
        e11[(0, 0)] = 1.0;
        assert_relative_eq!(variance_of_quadratic(&e11), 1.0, epsilon = 1e-14);
        let id = DMatrix::<f64>::identity(7, 7);
        assert_relative_eq!(variance_of_quadratic(&id), 7.0, epsilon = 1e-12);
    }

    #[test]
    fn variance_of_quadratic_is_transpose_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        let m = DMatrix::from_fn(6, 6, |_, _| rng.sample::<f64, _>(StandardNormal));
        assert_eq!(
            variance_of_quadratic(&m),
            variance_of_quadratic(&m.transpose())
        );
    }

    #[test]
    fn variance_of_quadratic_matches_monte_carlo() {
        let mut rng = ChaCha12Rng::seed_from_u64(15);
        let m = DMatrix::from_fn(6, 6, |_, _| rng.sample::<f64, _>(StandardNormal));
        let closed = variance_of_quadratic(&m);
        let trace = m.trace();
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let y = DVector::from_fn(6, |_, _| {
                rng.sample::<f64, _>(StandardNormal)
            });
            let p = std::f64::consts::FRAC_1_SQRT_2 * (y.dot(&(&m * &y)) - trace);
            sum += p;
            sum_sq += p * p;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(
            (var - closed).abs() <= 0.01 * closed,
            "monte carlo {var} vs closed form {closed}"
        );
    }
}
