use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("sample set must have at least one row and one column")]
    EmptySampleSet,

    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("label vector has {labels} entries for {rows} rows")]
    LabelCountMismatch { labels: usize, rows: usize },

    #[error("operation requires provenance labels but the sample set has none")]
    LabelsRequired,

    #[error("good-set check requires an uncorrupted set, found {outliers} outlier labels")]
    OutliersPresent { outliers: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive definite within tolerance: {detail}")]
    NotPositiveDefinite { detail: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Spectral(#[from] robust_spectral::SpectralError),
}
