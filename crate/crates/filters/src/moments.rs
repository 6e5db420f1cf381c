use nalgebra::{DMatrix, DVector};
use robust_core::{Label, SampleSet};

use crate::FilterDiagnostics;

pub(crate) fn sample_mean(s: &SampleSet) -> DVector<f64> {
    s.data().row_mean().transpose()
}

/// Covariance about the given center, normalized by n.
pub(crate) fn covariance_about(s: &SampleSet, center: &DVector<f64>) -> DMatrix<f64> {
    let n = s.n();
    let mut centered = s.data().clone();
    for i in 0..n {
        for j in 0..s.dim() {
            centered[(i, j)] -= center[j];
        }
    }
    centered.transpose() * &centered / n as f64
}

/// Second moment E[xxᵀ], normalized by n.
pub(crate) fn second_moment(s: &SampleSet) -> DMatrix<f64> {
    s.data().transpose() * s.data() / s.n() as f64
}

pub(crate) fn finalize_labels(s: &SampleSet, current: &[usize], diag: &mut FilterDiagnostics) {
    diag.final_n = current.len();
    if let Some(labels) = s.labels() {
        let total_out = labels.iter().filter(|&&l| l == Label::Outlier).count();
        let kept_out = current
            .iter()
            .filter(|&&i| labels[i] == Label::Outlier)
            .count();
        let total_in = labels.len() - total_out;
        let kept_in = current.len() - kept_out;
        diag.removed_outliers = Some(total_out - kept_out);
        diag.removed_inliers = Some(total_in - kept_in);
    }
}
