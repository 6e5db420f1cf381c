use nalgebra::{DMatrix, DVector};

use crate::{flatten, sharpen};

/// Matrix-free fourth-moment operator over whitened samples.
///
/// For whitened rows `y_i` and `z_i = y_i ⊗ y_i` (flattened outer products),
/// this represents the d²×d² operator
///
/// ```text
/// T = −I♭ I♭ᵀ + (1/n) Σ_i z_i z_iᵀ
/// ```
///
/// applied to a d²-vector `w` in O(n·d²) time: `z_iᵀw = y_iᵀ W y_i` with
/// `W = sharpen(w)`, so the sum collapses to `Yᵀ diag(q) Y` for the per-sample
/// quadratic forms `q`. No d²×d² matrix is ever materialized.
#[derive(Debug, Clone)]
pub struct FourthMomentOperator {
    whitened: DMatrix<f64>,
    identity_flat: DVector<f64>,
}

impl FourthMomentOperator {
    /// `whitened` holds one sample per row.
    pub fn new(whitened: DMatrix<f64>) -> Self {
        let d = whitened.ncols();
        assert!(whitened.nrows() > 0, "operator needs at least one sample");
        let identity_flat = flatten(&DMatrix::identity(d, d));
        Self {
            whitened,
            identity_flat,
        }
    }

    /// Sample dimension d.
    pub fn dim(&self) -> usize {
        self.whitened.ncols()
    }

    /// Operator dimension d².
    pub fn dim_sq(&self) -> usize {
        let d = self.dim();
        d * d
    }

    pub fn sample_count(&self) -> usize {
        self.whitened.nrows()
    }

    /// Applies `T` to `w`.
    pub fn apply(&self, w: &DVector<f64>) -> DVector<f64> {
        let n = self.whitened.nrows();
        let big_w = sharpen(w).expect("operator input must have length d²");
        debug_assert_eq!(big_w.nrows(), self.dim());

        // q_i = y_iᵀ W y_i, computed for all rows at once.
        let yw = &self.whitened * &big_w;
        let q = DVector::from_fn(n, |i, _| yw.row(i).dot(&self.whitened.row(i)));

        // (1/n) Σ q_i y_i y_iᵀ = (1/n) Yᵀ diag(q) Y.
        let mut scaled = self.whitened.clone();
        for i in 0..n {
            scaled.row_mut(i).scale_mut(q[i]);
        }
        let sum = self.whitened.transpose() * scaled / n as f64;

        flatten(&sum) - self.identity_flat.dot(w) * &self.identity_flat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Dense construction of the same operator, used only as a test oracle.
    fn dense_fourth_moment(y: &DMatrix<f64>) -> DMatrix<f64> {
        let n = y.nrows();
        let d = y.ncols();
        let ident = flatten(&DMatrix::identity(d, d));
        let mut t = -&ident * ident.transpose();
        for i in 0..n {
            let yi = y.row(i).transpose();
            let z = flatten(&(&yi * yi.transpose()));
            t += &z * z.transpose() / n as f64;
        }
        t
    }

    #[test]
    fn single_basis_sample_hand_computation() {
        // n=1, y = e1, w = flatten(I): z1ᵀw = 1 and I♭ᵀw = d,
        // so T w = −d·I♭ + z1.
        let d = 3;
        let mut y = DMatrix::zeros(1, d);
        y[(0, 0)] = 1.0;
        let op = FourthMomentOperator::new(y.clone());
        let w = flatten(&DMatrix::identity(d, d));
        let out = op.apply(&w);

        let z1 = {
            let e1 = y.row(0).transpose();
            flatten(&(&e1 * e1.transpose()))
        };
        let expected = -(d as f64) * flatten(&DMatrix::identity(d, d)) + z1;
        assert!((out - expected).norm() <= 1e-14);
    }

    #[test]
    fn matches_dense_oracle_small_dimensions() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for d in 2..=4usize {
            for n in [1usize, 5, 20, 30] {
                let y = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
                let op = FourthMomentOperator::new(y.clone());
                let dense = dense_fourth_moment(&y);
                for _ in 0..3 {
                    let w = DVector::from_fn(d * d, |_, _| {
                        rng.sample::<f64, _>(StandardNormal)
                    });
                    let fast = op.apply(&w);
                    let slow = &dense * &w;
                    assert!(
                        (&fast - &slow).norm() <= 1e-10 * slow.norm().max(1.0),
                        "d={d} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn operator_is_symmetric_under_random_probes() {
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        let y = DMatrix::from_fn(25, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        let op = FourthMomentOperator::new(y);
        for _ in 0..10 {
            let u = DVector::from_fn(9, |_, _| rng.sample::<f64, _>(StandardNormal));
            let w = DVector::from_fn(9, |_, _| rng.sample::<f64, _>(StandardNormal));
            let lhs = u.dot(&op.apply(&w));
            let rhs = w.dot(&op.apply(&u));
            assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
        }
    }
}
