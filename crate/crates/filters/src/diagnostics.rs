use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FilterError {
    /// Spectral deviation exceeds the termination threshold but no
    /// univariate threshold is violated. Theory rules this out for good
    /// inputs; it is surfaced rather than silently ignored.
    #[error(
        "filter stuck: spectral deviation {spectral_norm:.6e} above threshold \
         but no violating tail threshold exists"
    )]
    Stuck { spectral_norm: f64 },

    #[error(transparent)]
    Core(#[from] robust_core::CoreError),

    #[error(transparent)]
    Spectral(#[from] robust_spectral::SpectralError),
}

/// Two-way result of one filter iteration: a final estimate, or a strictly
/// smaller retained index set (relative to the step's input rows).
#[derive(Debug, Clone)]
pub enum FilterStepOutcome<T> {
    Estimate(T),
    Retained(Vec<usize>),
}

/// One recorded cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub t: f64,
    pub delta: f64,
    /// Tail sharpness constant, when the step's tail exposes one.
    pub c2: Option<f64>,
}

/// One adaptive probe: the step was run with `c2` and removed `removed` of
/// `total` points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptiveProbe {
    pub c2: f64,
    pub removed: usize,
    pub total: usize,
}

/// Probe history of one adaptive step invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptiveInvocation {
    pub probes: Vec<AdaptiveProbe>,
    pub accepted_removed: usize,
    pub total: usize,
    /// True when the probe budget ran out before the removed fraction
    /// landed in the target band.
    pub capped: bool,
}

/// Run log of a filter: how many iterations ran, what each removed, which
/// thresholds were used, and provenance tallies when labels are available.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FilterDiagnostics {
    pub iterations: usize,
    /// Points removed by each pass, the initial prune included when one ran.
    pub removed_per_iteration: Vec<usize>,
    pub removed_inliers: Option<usize>,
    pub removed_outliers: Option<usize>,
    pub final_spectral_norm: f64,
    pub thresholds_used: Vec<ThresholdRecord>,
    pub adaptive_invocations: Vec<AdaptiveInvocation>,
    pub warnings: Vec<String>,
    pub initial_n: usize,
    pub final_n: usize,
}

impl FilterDiagnostics {
    pub fn new(initial_n: usize) -> Self {
        Self {
            initial_n,
            final_n: initial_n,
            ..Self::default()
        }
    }

    /// Fold the per-probe records of an accepted step into this log.
    pub(crate) fn absorb(&mut self, scratch: FilterDiagnostics) {
        self.thresholds_used.extend(scratch.thresholds_used);
        self.warnings.extend(scratch.warnings);
        if scratch.final_spectral_norm != 0.0 {
            self.final_spectral_norm = scratch.final_spectral_norm;
        }
    }

    pub fn stuck(&self) -> bool {
        self.warnings.iter().any(|w| w.contains("filter stuck"))
    }

    pub fn total_removed(&self) -> usize {
        self.removed_per_iteration.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removed_tally_matches_counts() {
        let mut d = FilterDiagnostics::new(100);
        d.removed_per_iteration.extend([3, 0, 7]);
        d.final_n = 90;
        assert_eq!(d.total_removed(), d.initial_n - d.final_n);
    }
}
