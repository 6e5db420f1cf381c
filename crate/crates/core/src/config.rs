use serde::{Deserialize, Serialize};

use crate::CoreError;

/// How a filter centers projected values before thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centering {
    Mean,
    Median,
}

/// All tunable parameters of a filter run.
///
/// The constants mirror the algorithm definitions: `thres_constant` scales
/// the `ε·log(1/ε)` spectral termination threshold of the mean filter,
/// `cov_radius_constant` scales the `d·log(n/τ)` Mahalanobis-radius cut of
/// the covariance filter, and `cov_gap_constant` scales its fourth-moment
/// termination gap. `c2_*` drive adaptive tail bounding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Corruption fraction, in (0, 1/2).
    pub epsilon: f64,
    /// Failure probability, in (0, 1).
    pub tau: f64,
    /// Sub-gaussian parameter.
    pub nu: f64,
    pub centering: Centering,
    /// Enables adaptive tail bounding (binary search on C₂).
    pub adaptive: bool,
    pub c2_initial: f64,
    pub c2_min: f64,
    pub c2_max: f64,
    pub max_iterations: usize,
    /// Absolute eigenvalue tolerance for symmetry / PSD checks.
    pub spectral_tol: f64,
    pub seed: u64,
    /// C_thres in Thres(ε) = C_thres·ε·log(1/ε).
    pub thres_constant: f64,
    /// C in the covariance filter's radius cut x'Σ⁻¹x ≥ C·d·log(n/τ).
    pub cov_radius_constant: f64,
    /// C_gap in the covariance filter's termination gap 1 + C_gap·ε·log²(1/ε).
    pub cov_gap_constant: f64,
}

impl FilterConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            tau: 0.1,
            nu: 1.0,
            centering: Centering::Median,
            adaptive: false,
            c2_initial: 1.0,
            c2_min: 1.0 / 64.0,
            c2_max: 1024.0,
            max_iterations: 500,
            spectral_tol: crate::DEFAULT_SPECTRAL_TOL,
            seed: 0,
            thres_constant: 10.0,
            cov_radius_constant: 10.0,
            cov_gap_constant: 2.0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_centering(mut self, centering: Centering) -> Self {
        self.centering = centering;
        self
    }

    pub fn with_adaptive(mut self, adaptive: bool) -> Self {
        self.adaptive = adaptive;
        self
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(CoreError::InvalidConfig(format!(
                "epsilon must be in (0, 1/2), got {}",
                self.epsilon
            )));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(CoreError::InvalidConfig(format!(
                "tau must be in (0, 1), got {}",
                self.tau
            )));
        }
        if !(self.nu > 0.0) {
            return Err(CoreError::InvalidConfig("nu must be positive".into()));
        }
        if !(self.c2_min <= self.c2_initial && self.c2_initial <= self.c2_max) {
            return Err(CoreError::InvalidConfig(format!(
                "need c2_min <= c2_initial <= c2_max, got {} / {} / {}",
                self.c2_min, self.c2_initial, self.c2_max
            )));
        }
        if self.max_iterations == 0 {
            return Err(CoreError::InvalidConfig(
                "max_iterations must be positive".into(),
            ));
        }
        if !(self.spectral_tol > 0.0) {
            return Err(CoreError::InvalidConfig(
                "spectral_tol must be positive".into(),
            ));
        }
        for (name, v) in [
            ("thres_constant", self.thres_constant),
            ("cov_radius_constant", self.cov_radius_constant),
            ("cov_gap_constant", self.cov_gap_constant),
        ] {
            if !(v > 0.0) {
                return Err(CoreError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Spectral termination threshold Thres(ε) for the sub-gaussian mean filter.
    pub fn thres(&self) -> f64 {
        self.thres_constant * self.epsilon * (1.0 / self.epsilon).ln()
    }
}
