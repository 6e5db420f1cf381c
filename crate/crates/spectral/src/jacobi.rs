use nalgebra::{DMatrix, DVector};

use crate::SpectralError;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a real symmetric matrix by the cyclic Jacobi method.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues sorted ascending and
/// eigenvectors as the corresponding columns, so that `m ≈ V diag(λ) Vᵀ`.
/// The input is symmetrized as `(M + Mᵀ)/2` before the sweeps, so a slightly
/// asymmetric matrix (roundoff from an outer-product accumulation) is fine.
///
/// Each rotation annihilates one off-diagonal entry; sweeps repeat until the
/// total off-diagonal mass falls below machine-level tolerance relative to
/// the Frobenius norm.
pub fn jacobi_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>), SpectralError> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(SpectralError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }

    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let mut v = DMatrix::identity(n, n);

    if n == 1 {
        return Ok((DVector::from_element(1, a[(0, 0)]), v));
    }

    let scale = a.norm().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[(p, q)].abs();
            }
        }
        if off <= tol {
            converged = true;
            break;
        }

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = 0.5 * (a[(q, q)] - a[(p, p)]) / apq;
                // Smaller-angle root of t² + 2tθ − 1 = 0.
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let h = t * apq;
                a[(p, p)] -= h;
                a[(q, q)] += h;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let g = a[(j, p)];
                    let h = a[(j, q)];
                    a[(j, p)] = g - s * (h + g * tau);
                    a[(j, q)] = h + s * (g - h * tau);
                    a[(p, j)] = a[(j, p)];
                    a[(q, j)] = a[(j, q)];
                }
                for j in 0..n {
                    let g = v[(j, p)];
                    let h = v[(j, q)];
                    v[(j, p)] = g - s * (h + g * tau);
                    v[(j, q)] = h + s * (g - h * tau);
                }
            }
        }
    }

    if !converged {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[(p, q)].abs();
            }
        }
        if off > tol {
            return Err(SpectralError::JacobiNoConvergence { off_diagonal: off });
        }
    }

    // Sort eigenpairs ascending by eigenvalue.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());

    let values = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random_symmetric(n: usize, rng: &mut ChaCha12Rng) -> DMatrix<f64> {
        let b = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        0.5 * (&b + b.transpose())
    }

    #[test]
    fn diagonal_matrix_is_its_own_decomposition() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let (vals, vecs) = jacobi_eigen(&m).unwrap();
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(vals[2], 3.0, epsilon = 1e-12);
        // Columns are signed standard basis vectors.
        for j in 0..3 {
            let col = vecs.column(j);
            assert_relative_eq!(col.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn reconstructs_random_symmetric_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 8, 16, 33] {
            let m = random_symmetric(n, &mut rng);
            let (vals, vecs) = jacobi_eigen(&m).unwrap();
            let recon = &vecs * DMatrix::from_diagonal(&vals) * vecs.transpose();
            assert!((&recon - &m).norm() <= 1e-10 * m.norm().max(1.0));
            let gram = vecs.transpose() * &vecs;
            assert!((gram - DMatrix::identity(n, n)).norm() <= 1e-10);
            for j in 0..n.saturating_sub(1) {
                assert!(vals[j] <= vals[j + 1]);
            }
        }
    }

    #[test]
    fn rejects_non_square_input() {
        let m = DMatrix::zeros(2, 3);
        assert!(matches!(
            jacobi_eigen(&m),
            Err(SpectralError::NotSquare { .. })
        ));
    }
}
