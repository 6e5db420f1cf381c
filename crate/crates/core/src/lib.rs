//! Shared domain types for robust high-dimensional estimation: sample sets
//! with optional inlier/outlier provenance, estimator error metrics, the
//! regularity ("good set") oracles that the filtering guarantees assume, and
//! the deterministic randomness contract every other crate draws from.

mod config;
mod error;
mod goodset;
mod metrics;
mod rng;
mod sample;
mod types;

pub use config::{Centering, FilterConfig};
pub use error::CoreError;
pub use goodset::{
    check_good_set_mean, check_good_set_second_moment, default_directions, ConditionCheck,
    GoodSetReport,
};
pub use metrics::{l2_error, mahalanobis_error};
pub use rng::{derive_seed, RngStream};
pub use sample::{format_float, Label, SampleSet};
pub use types::{ExperimentRow, GaussianParams};

/// Absolute eigenvalue tolerance for symmetry / PSD checks.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-9;
