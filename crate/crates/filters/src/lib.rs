//! Filtering estimators for robust high-dimensional estimation.
//!
//! The filters share one recipe: compute a spectral summary of the current
//! sample, terminate with the empirical estimate when it is small, and
//! otherwise project onto the offending direction and remove every point
//! violating a univariate tail bound. Three instantiations are provided:
//!
//! - [`filter_mean_subgaussian`] — identity-covariance sub-gaussian mean;
//!   deviations of the sample covariance from `I` drive the test, and points
//!   beyond a violating threshold along the top eigendirection are dropped.
//! - [`filter_mean_second_moment`] — mean under a bounded-second-moment
//!   assumption; the cut threshold is drawn at random, biased high, so that
//!   corrupted mass is removed in expectation.
//! - [`filter_covariance`] — zero-mean Gaussian covariance; the test runs on
//!   a matrix-free fourth-moment operator over whitened samples and filters
//!   along the worst degree-2 polynomial.
//!
//! [`adaptive_filter`] wraps any step with the binary search on the tail
//! sharpness constant C₂ that keeps the per-step removed fraction near ε.

mod adaptive;
mod moments;
mod covariance;
mod diagnostics;
mod mean_subgaussian;
mod prune;
mod second_moment;
mod univariate;

pub use adaptive::{adaptive_filter, MAX_ADAPTIVE_PROBES};
pub use covariance::{filter_covariance, filter_covariance_step};
pub use diagnostics::{
    AdaptiveInvocation, AdaptiveProbe, FilterDiagnostics, FilterError, FilterStepOutcome,
    ThresholdRecord,
};
pub use mean_subgaussian::{filter_mean_subgaussian, filter_mean_subgaussian_step};
pub use prune::naive_prune;
pub use second_moment::{filter_mean_second_moment, filter_mean_second_moment_step};
pub use univariate::{
    find_violation_threshold, find_violation_threshold_above, robust_center, tail_covariance,
    tail_subgaussian, TailFunction,
};

/// Stream ids so each filter family draws from its own deterministic stream.
pub mod streams {
    pub const MEAN_FILTER: u64 = 1;
    pub const SECOND_MOMENT_FILTER: u64 = 2;
    pub const COVARIANCE_FILTER: u64 = 3;
}
