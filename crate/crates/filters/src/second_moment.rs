use nalgebra::DVector;
use robust_core::{CoreError, FilterConfig, RngStream, SampleSet};
use robust_spectral::jacobi_eigen;

use crate::moments::{covariance_about, finalize_labels, sample_mean};
use crate::{streams, FilterDiagnostics, FilterError, FilterStepOutcome, ThresholdRecord};

/// Spectral termination threshold of the bounded-second-moment filter.
const SPECTRAL_THRESHOLD: f64 = 9.0;

/// One pass of the bounded-second-moment mean filter.
///
/// When the top eigenvalue of the sample covariance is at most 9 the
/// empirical mean is returned. Otherwise the cut threshold is randomized:
/// `T = Z·max_x |v*·(x − μ)|` with `Z = √U` (density 2z on [0,1]), which
/// biases cuts toward the far tail so corrupted mass is removed in
/// expectation while at least the maximizer always goes.
pub fn filter_mean_second_moment_step(
    s: &SampleSet,
    rng: &mut RngStream,
    diag: &mut FilterDiagnostics,
) -> Result<FilterStepOutcome<DVector<f64>>, FilterError> {
    let n = s.n();
    let mean = sample_mean(s);
    let sigma = covariance_about(s, &mean);
    let (vals, vecs) = jacobi_eigen(&sigma)?;
    let d = s.dim();
    let lambda = vals[d - 1];
    diag.final_spectral_norm = lambda;

    if lambda <= SPECTRAL_THRESHOLD {
        return Ok(FilterStepOutcome::Estimate(mean));
    }

    let v = vecs.column(d - 1).into_owned();
    let center = v.dot(&mean);
    let devs: Vec<f64> = (s.data() * &v).iter().map(|p| (p - center).abs()).collect();
    let max_dev = devs.iter().cloned().fold(0.0f64, f64::max);

    let z = rng.uniform().sqrt();
    let t = z * max_dev;
    diag.thresholds_used.push(ThresholdRecord {
        t,
        delta: 0.0,
        c2: None,
    });

    // Strict comparison: the maximizer is removed for every draw of Z.
    let retained: Vec<usize> = (0..n).filter(|&i| devs[i] < t).collect();
    Ok(FilterStepOutcome::Retained(retained))
}

/// Iterated bounded-second-moment mean filter with the `σ` reduction:
/// samples are scaled by `1/σ`, filtered, and the estimate scaled back.
///
/// Each pass removes at least one point, so the loop terminates within `n`
/// passes; the configured iteration budget is a second cap.
pub fn filter_mean_second_moment(
    s: &SampleSet,
    sigma: f64,
    cfg: &FilterConfig,
) -> Result<(DVector<f64>, FilterDiagnostics), FilterError> {
    cfg.validate().map_err(FilterError::Core)?;
    if !(sigma > 0.0) {
        return Err(FilterError::Core(CoreError::InvalidConfig(format!(
            "sigma must be positive, got {sigma}"
        ))));
    }
    let scaled = {
        let data = s.data() / sigma;
        match s.labels() {
            Some(labels) => SampleSet::with_labels(data, labels.to_vec()),
            None => SampleSet::new(data),
        }
        .map_err(FilterError::Core)?
    };

    let mut diag = FilterDiagnostics::new(s.n());
    let mut rng = RngStream::new(cfg.seed, streams::SECOND_MOMENT_FILTER);
    let mut current: Vec<usize> = (0..s.n()).collect();

    for _ in 0..cfg.max_iterations.min(s.n()) {
        let subset = scaled.subset(&current);
        diag.iterations += 1;
        match filter_mean_second_moment_step(&subset, &mut rng, &mut diag)? {
            FilterStepOutcome::Estimate(mu) => {
                diag.removed_per_iteration.push(0);
                finalize_labels(s, &current, &mut diag);
                return Ok((sigma * mu, diag));
            }
            FilterStepOutcome::Retained(local) => {
                assert!(
                    local.len() < subset.n(),
                    "filter pass must strictly shrink the sample"
                );
                if local.is_empty() {
                    diag.warnings.push(
                        "filter removed every remaining point; returning the estimate before the final cut"
                            .into(),
                    );
                    finalize_labels(s, &current, &mut diag);
                    return Ok((sigma * sample_mean(&subset), diag));
                }
                diag.removed_per_iteration.push(subset.n() - local.len());
                current = local.into_iter().map(|i| current[i]).collect();
            }
        }
    }

    diag.warnings
        .push("iteration budget exhausted; returning current empirical mean".into());
    let subset = scaled.subset(&current);
    finalize_labels(s, &current, &mut diag);
    Ok((sigma * sample_mean(&subset), diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use robust_core::Label;

    #[test]
    fn identical_points_return_that_point() {
        let s = SampleSet::new(DMatrix::from_element(20, 4, -3.25)).unwrap();
        let cfg = FilterConfig::new(0.1);
        let (mu, diag) = filter_mean_second_moment(&s, 1.0, &cfg).unwrap();
        assert_eq!(diag.iterations, 1);
        for j in 0..4 {
            assert!((mu[j] + 3.25).abs() <= 1e-12);
        }
    }

    #[test]
    fn planted_cluster_pushes_top_eigenvalue_past_threshold() {
        // 9000 standard normals plus 1000 points at 10·e1: the top eigenvalue
        // of the covariance is ≈ 9.9 > 9, so the first pass must filter.
        let mut rng = RngStream::new(21, 0);
        let d = 10;
        let mut data = DMatrix::from_fn(10_000, d, |_, _| rng.standard_normal());
        for i in 0..1000 {
            for j in 0..d {
                data[(i, j)] = if j == 0 { 10.0 } else { 0.0 };
            }
        }
        let s = SampleSet::new(data).unwrap();

        // Dense-oracle check of the planted eigenvalue.
        let mean = sample_mean(&s);
        let (vals, _) = jacobi_eigen(&covariance_about(&s, &mean)).unwrap();
        let top = vals[d - 1];
        assert!(
            (top - 9.9).abs() < 0.5,
            "planted top eigenvalue {top} far from 9.9"
        );
        assert!(top > SPECTRAL_THRESHOLD);

        let mut diag = FilterDiagnostics::new(s.n());
        let mut step_rng = RngStream::new(22, 0);
        match filter_mean_second_moment_step(&s, &mut step_rng, &mut diag).unwrap() {
            FilterStepOutcome::Retained(idx) => assert!(idx.len() < s.n()),
            _ => panic!("expected a filtering pass"),
        }
    }

    #[test]
    fn z_draw_has_mean_two_thirds() {
        let mut rng = RngStream::new(23, 0);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += rng.uniform().sqrt();
        }
        let mean = sum / n as f64;
        assert!((mean - 2.0 / 3.0).abs() <= 0.005, "mean of Z = {mean}");
    }

    #[test]
    fn far_point_mass_is_removed_and_mean_recovers() {
        let mut rng = RngStream::new(24, 0);
        let d = 10;
        let n = 10_000;
        let mut data = DMatrix::from_fn(n, d, |_, _| rng.standard_normal());
        let mut labels = vec![Label::Inlier; n];
        for i in 0..n / 10 {
            for j in 0..d {
                data[(i, j)] = if j == 0 { 10.0 } else { 0.0 };
            }
            labels[i] = Label::Outlier;
        }
        let s = SampleSet::with_labels(data, labels).unwrap();
        let cfg = FilterConfig::new(0.1).with_seed(77);
        let (mu, diag) = filter_mean_second_moment(&s, 1.0, &cfg).unwrap();
        assert!(diag.total_removed() > 0);
        assert!(mu.norm() <= 1.0, "estimate norm {}", mu.norm());
    }
}
