use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("vector length {len} is not a perfect square")]
    LengthNotSquare { len: usize },

    #[error(
        "matrix is singular to working precision: eigenvalue {eigenvalue:.6e} \
         below floor {floor:.6e}"
    )]
    Singular { eigenvalue: f64, floor: f64 },

    #[error(
        "power iteration did not converge in {iterations} iterations \
         (best residual {residual:.3e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("Jacobi sweep limit reached with off-diagonal mass {off_diagonal:.3e}")]
    JacobiNoConvergence { off_diagonal: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
