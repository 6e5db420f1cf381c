//! Linear-algebra kernels for spectral outlier filtering.
//!
//! Everything here operates on real symmetric matrices or on matrix-free
//! symmetric operators:
//!
//! - [`jacobi_eigen`] — dense symmetric eigendecomposition (cyclic Jacobi),
//!   the reference solver used wherever a full decomposition is needed and
//!   as the oracle for the iterative paths.
//! - [`top_eigenpair`] — power iteration for the largest-magnitude eigenpair
//!   of a matrix-free symmetric operator, with a spectral shift so that a
//!   dominant negative eigenvalue is found with its sign intact.
//! - [`inverse_sqrt`] — PSD inverse square root via the dense decomposition.
//! - [`flatten`] / [`sharpen`] — the row-major bijection between d×d matrices
//!   and d²-vectors.
//! - [`FourthMomentOperator`] — the d²×d² second moment of flattened outer
//!   products, applied without ever materializing a d²×d² matrix.
//! - [`variance_of_quadratic`] — closed-form Gaussian variance of a centered
//!   quadratic form.

mod error;
mod fourth_moment;
mod jacobi;
mod ops;
mod power;

pub use error::SpectralError;
pub use fourth_moment::FourthMomentOperator;
pub use jacobi::jacobi_eigen;
pub use ops::{flatten, inverse_sqrt, sharpen, variance_of_quadratic};
pub use power::{top_eigenpair, EigenPair};

/// Default residual tolerance for power iteration.
pub const DEFAULT_POWER_TOL: f64 = 1e-7;
/// Default iteration cap for power iteration.
pub const DEFAULT_POWER_MAX_ITER: usize = 1000;
