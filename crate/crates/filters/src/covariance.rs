use nalgebra::DVector;
use robust_core::{Centering, FilterConfig, GaussianParams, RngStream, SampleSet};
use robust_spectral::{inverse_sqrt, sharpen, variance_of_quadratic, FourthMomentOperator};

use crate::moments::{finalize_labels, second_moment};
use crate::{
    adaptive_filter, find_violation_threshold_above, robust_center, streams, FilterDiagnostics,
    FilterError, FilterStepOutcome, TailFunction, ThresholdRecord,
};

/// Leading constant of the exponential tail used under adaptive bounding.
const COV_TAIL_C1: f64 = 12.0;
/// Slack between the detection threshold and the cut.
const COV_SLACK: f64 = 4.0 / 3.0;

const POWER_TOL: f64 = 1e-7;
const POWER_MAX_ITER: usize = 4000;

/// One pass of the unknown-covariance filter on zero-mean data.
///
/// The pass first removes any point whose Mahalanobis norm under the current
/// second moment `Σ'` is enormous (`xᵀΣ'⁻¹x ≥ C·d·log(n/τ)`). Otherwise the
/// samples are whitened by `Σ'^{-1/2}`, the top eigenpair `(λ*, v*)` of the
/// fourth-moment operator is found matrix-free, and the degree-2 polynomial
/// `p*(x) = ((Σ'^{-1/2}x)ᵀ v*♯ (Σ'^{-1/2}x) − tr v*♯)/√2` is the univariate
/// test statistic. A small `λ*` relative to the Gaussian baseline certifies
/// `N(0, Σ')`; a large one forces a cut of `|p* − median|` beyond a
/// violating threshold.
///
/// Under adaptive tail bounding the bound is `C₁·e^{−C₂T}` plus the
/// polynomial term with no detection floor; the theoretical bound keeps its
/// floor `T ≥ max(10·log(1/ε), 1.01e)`.
pub fn filter_covariance_step(
    s: &SampleSet,
    cfg: &FilterConfig,
    c2: f64,
    rng: &mut RngStream,
    diag: &mut FilterDiagnostics,
) -> Result<FilterStepOutcome<GaussianParams>, FilterError> {
    let n = s.n();
    let d = s.dim();
    let sigma = second_moment(s);
    let whitener = inverse_sqrt(&sigma)?;

    // Whitened rows y_i = Σ'^{-1/2} x_i (the whitener is symmetric).
    let y = s.data() * &whitener;

    // Radius cut: xᵀΣ'⁻¹x = ‖y‖².
    let radius = cfg.cov_radius_constant * d as f64 * (n as f64 / cfg.tau).ln();
    let sq_norms: Vec<f64> = (0..n).map(|i| y.row(i).norm_squared()).collect();
    if sq_norms.iter().any(|&q| q >= radius) {
        let retained: Vec<usize> = (0..n).filter(|&i| sq_norms[i] < radius).collect();
        return Ok(FilterStepOutcome::Retained(retained));
    }

    let op = FourthMomentOperator::new(y.clone());
    let pair = robust_spectral::top_eigenpair(
        |w| op.apply(w),
        d * d,
        POWER_TOL,
        POWER_MAX_ITER,
        rng,
    )?;
    let lambda = pair.value;
    diag.final_spectral_norm = lambda;

    let a = sharpen(&pair.vector)?;
    // Gaussian baseline for the polynomial λ* measures: for y ~ N(0, I) the
    // operator's quadratic form at v* equals E[(yᵀAy − tr A)²], i.e. twice
    // the variance of p*.
    let baseline = 2.0 * variance_of_quadratic(&a);
    let gap = 1.0 + cfg.cov_gap_constant * cfg.epsilon * (1.0 / cfg.epsilon).ln().powi(2);
    if lambda <= gap * baseline {
        return Ok(FilterStepOutcome::Estimate(GaussianParams::new(
            DVector::zeros(d),
            sigma,
        )));
    }

    // p*(x) over the current set.
    let trace_a = a.trace();
    let ya = &y * &a;
    let pvals: Vec<f64> = (0..n)
        .map(|i| (ya.row(i).dot(&y.row(i)) - trace_a) * std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    let median = robust_center(&pvals, Centering::Median);

    let (tail, floor) = if cfg.adaptive {
        (
            TailFunction::CovarianceExponential {
                epsilon: cfg.epsilon,
                c1: COV_TAIL_C1,
                c2,
            },
            1.01 * std::f64::consts::E,
        )
    } else {
        (
            TailFunction::CovarianceWeakened {
                epsilon: cfg.epsilon,
            },
            (10.0 * (1.0 / cfg.epsilon).ln()).max(1.01 * std::f64::consts::E),
        )
    };

    match find_violation_threshold_above(&pvals, median, COV_SLACK, &tail, floor) {
        Some(t) => {
            diag.thresholds_used.push(ThresholdRecord {
                t,
                delta: COV_SLACK,
                c2: cfg.adaptive.then_some(c2),
            });
            let retained: Vec<usize> = (0..n)
                .filter(|&i| (pvals[i] - median).abs() < t)
                .collect();
            Ok(FilterStepOutcome::Retained(retained))
        }
        None => Err(FilterError::Stuck {
            spectral_norm: lambda,
        }),
    }
}

/// Iterated unknown-covariance filter for zero-mean data.
///
/// Terminates with `N(0, Σ')` of the retained set; a stuck filter or an
/// exhausted budget returns the current second moment with a warning.
pub fn filter_covariance(
    s: &SampleSet,
    cfg: &FilterConfig,
) -> Result<(GaussianParams, FilterDiagnostics), FilterError> {
    cfg.validate().map_err(FilterError::Core)?;
    let mut diag = FilterDiagnostics::new(s.n());
    if s.n() <= s.dim() {
        diag.warnings
            .push("sample count does not exceed dimension; estimates may be unstable".into());
    }
    let mut rng = RngStream::new(cfg.seed, streams::COVARIANCE_FILTER);
    let mut current: Vec<usize> = (0..s.n()).collect();

    for _ in 0..cfg.max_iterations {
        let subset = s.subset(&current);
        diag.iterations += 1;

        let outcome = if cfg.adaptive {
            adaptive_filter(subset.n(), cfg, &mut rng, &mut diag, |c2, probe_rng, scratch| {
                filter_covariance_step(&subset, cfg, c2, probe_rng, scratch)
            })
        } else {
            filter_covariance_step(&subset, cfg, cfg.c2_initial, &mut rng, &mut diag)
        };

        match outcome {
            Ok(FilterStepOutcome::Estimate(params)) => {
                diag.removed_per_iteration.push(0);
                finalize_labels(s, &current, &mut diag);
                return Ok((params, diag));
            }
            Ok(FilterStepOutcome::Retained(local)) => {
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
                    return Ok((
                        GaussianParams::new(DVector::zeros(s.dim()), second_moment(&subset)),
                        diag,
                    ));
                }
                diag.removed_per_iteration.push(subset.n() - local.len());
                current = local.into_iter().map(|i| current[i]).collect();
            }
            Err(FilterError::Stuck { spectral_norm }) => {
                diag.warnings.push(format!(
                    "filter stuck: fourth-moment eigenvalue {spectral_norm:.6e} above threshold \
                     but no violating tail threshold; returning current second moment"
                ));
                finalize_labels(s, &current, &mut diag);
                return Ok((
                    GaussianParams::new(DVector::zeros(s.dim()), second_moment(&subset)),
                    diag,
                ));
            }
            Err(e) => return Err(e),
        }
    }

    diag.warnings
        .push("iteration budget exhausted; returning current second moment".into());
    let subset = s.subset(&current);
    finalize_labels(s, &current, &mut diag);
    Ok((
        GaussianParams::new(DVector::zeros(s.dim()), second_moment(&subset)),
        diag,
    ))
}
