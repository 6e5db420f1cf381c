use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::{CoreError, Label, RngStream, SampleSet};

/// Outcome of one regularity condition.
#[derive(Debug, Clone)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Measured quantity (worst case over the condition's scope).
    pub observed: f64,
    /// The bound it is compared against.
    pub bound: f64,
}

impl ConditionCheck {
    fn new(name: &'static str, observed: f64, bound: f64) -> Self {
        Self {
            name,
            passed: observed <= bound,
            observed,
            bound,
        }
    }

    /// Slack to the bound; positive when the condition passes.
    pub fn slack(&self) -> f64 {
        self.bound - self.observed
    }
}

/// Per-condition report of a good-set check.
#[derive(Debug, Clone)]
pub struct GoodSetReport {
    pub conditions: Vec<ConditionCheck>,
}

impl GoodSetReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn require_uncorrupted(s: &SampleSet) -> Result<(), CoreError> {
    if let Some(labels) = s.labels() {
        let outliers = labels.iter().filter(|&&l| l == Label::Outlier).count();
        if outliers > 0 {
            return Err(CoreError::OutliersPresent { outliers });
        }
    }
    Ok(())
}

/// Guarded denominator log(d·log(d/ετ)), clamped at 1.
///
/// For tiny d/ετ the inner logarithm can go nonpositive; the clamp keeps the
/// bound finite and matches the regime where the tail term is vacuous anyway.
pub(crate) fn tail_denominator(d: usize, epsilon: f64, tau: f64) -> f64 {
    let inner = (d as f64 / (epsilon * tau)).ln();
    let arg = d as f64 * inner;
    if arg > 1.0 {
        arg.ln().max(1.0)
    } else {
        1.0
    }
}

/// Default direction set for the halfspace condition: the top `10`
/// eigenvectors of the empirical second-moment matrix about `mu_g`, plus
/// `n_random` seeded random unit vectors.
pub fn default_directions(
    s: &SampleSet,
    mu_g: &DVector<f64>,
    n_random: usize,
    rng: &mut RngStream,
) -> Result<Vec<DVector<f64>>, CoreError> {
    let d = s.dim();
    let m_s = second_moment_about(s, mu_g);
    let (_, vecs) = robust_spectral::jacobi_eigen(&m_s)?;
    let mut dirs = Vec::new();
    for k in 0..10.min(d) {
        // Columns are sorted ascending; take from the top.
        dirs.push(vecs.column(d - 1 - k).into_owned());
    }
    for _ in 0..n_random {
        let mut v = DVector::from_fn(d, |_, _| {
            rng.sample::<f64, _>(rand_distr::StandardNormal)
        });
        let n = v.norm();
        if n > 0.0 {
            v /= n;
        } else {
            v[0] = 1.0;
        }
        dirs.push(v);
    }
    Ok(dirs)
}

fn second_moment_about(s: &SampleSet, center: &DVector<f64>) -> DMatrix<f64> {
    let n = s.n();
    let mut centered = s.data().clone();
    for i in 0..n {
        for j in 0..s.dim() {
            centered[(i, j)] -= center[j];
        }
    }
    centered.transpose() * &centered / n as f64
}

/// Checks the four regularity conditions of the sub-gaussian mean setting
/// against a hypothesized true mean `mu_g` with identity covariance:
///
/// (i) every point within radius `√(2·d·log(3nd/τ))` of `mu_g`;
/// (ii) halfspace tails along the supplied directions agree with the
///      Gaussian reference within `ε/(T²·log(d·log(d/ετ)))` on a geometric
///      grid of thresholds;
/// (iii) `‖μ_S − μ_G‖₂ ≤ ε`;
/// (iv) `‖M_S − I‖₂ ≤ ε` for the second moment about `mu_g`.
///
/// The set must be uncorrupted (unlabeled or all-inlier).
pub fn check_good_set_mean(
    s: &SampleSet,
    mu_g: &DVector<f64>,
    epsilon: f64,
    tau: f64,
    directions: &[DVector<f64>],
) -> Result<GoodSetReport, CoreError> {
    require_uncorrupted(s)?;
    if mu_g.len() != s.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: s.dim(),
            got: mu_g.len(),
        });
    }
    let n = s.n();
    let d = s.dim();
    let nf = n as f64;

    // (i) radius condition.
    let radius = (2.0 * d as f64 * (3.0 * nf * d as f64 / tau).ln()).sqrt();
    let mut max_dist: f64 = 0.0;
    for i in 0..n {
        max_dist = max_dist.max((s.row(i) - mu_g).norm());
    }
    let cond_i = ConditionCheck::new("radius", max_dist, radius);

    // (ii) halfspace tail agreement along the supplied directions.
    let denom = tail_denominator(d, epsilon, tau);
    let grid: Vec<f64> = geometric_grid(0.5, radius.max(1.0), 32);
    let mut worst_ratio: f64 = 0.0;
    for v in directions {
        let proj: Vec<f64> = (0..n).map(|i| v.dot(&s.row(i)) - v.dot(mu_g)).collect();
        for &t in &grid {
            let bound = epsilon / (t * t * denom);
            let gauss = 0.5 * libm::erfc(t / std::f64::consts::SQRT_2);
            let upper = proj.iter().filter(|&&p| p >= t).count() as f64 / nf;
            let lower = proj.iter().filter(|&&p| -p >= t).count() as f64 / nf;
            for emp in [upper, lower] {
                let ratio = (emp - gauss).abs() / bound;
                worst_ratio = worst_ratio.max(ratio);
            }
        }
    }
    let cond_ii = ConditionCheck::new("halfspace-tails", worst_ratio, 1.0);

    // (iii) mean agreement.
    let mu_s = s.data().row_mean().transpose();
    let cond_iii = ConditionCheck::new("mean-gap", (&mu_s - mu_g).norm(), epsilon);

    // (iv) second-moment agreement.
    let m_s = second_moment_about(s, mu_g);
    let (vals, _) = robust_spectral::jacobi_eigen(&m_s)?;
    let spectral_dev = vals
        .iter()
        .fold(0.0f64, |acc, &l| acc.max((l - 1.0).abs()));
    let cond_iv = ConditionCheck::new("second-moment", spectral_dev, epsilon);

    Ok(GoodSetReport {
        conditions: vec![cond_i, cond_ii, cond_iii, cond_iv],
    })
}

/// Checks the bounded-second-moment regularity conditions against a
/// hypothesized mean `mu_p`: `‖μ_S − μ_P‖₂ ≤ √ε` and `‖Σ_S‖₂ ≤ 2`.
pub fn check_good_set_second_moment(
    s: &SampleSet,
    mu_p: &DVector<f64>,
    epsilon: f64,
) -> Result<GoodSetReport, CoreError> {
    require_uncorrupted(s)?;
    if mu_p.len() != s.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: s.dim(),
            got: mu_p.len(),
        });
    }
    let mu_s = s.data().row_mean().transpose();
    let cond_mean = ConditionCheck::new("mean-gap", (&mu_s - mu_p).norm(), epsilon.sqrt());

    let cov = second_moment_about(s, &mu_s);
    let (vals, _) = robust_spectral::jacobi_eigen(&cov)?;
    let top = vals.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let cond_cov = ConditionCheck::new("covariance-norm", top, 2.0);

    Ok(GoodSetReport {
        conditions: vec![cond_mean, cond_cov],
    })
}

fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (count.saturating_sub(1)).max(1) as f64);
    (0..count).map(|k| lo * ratio.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_set(mu: &DVector<f64>, n: usize) -> SampleSet {
        let d = mu.len();
        SampleSet::new(DMatrix::from_fn(n, d, |_, j| mu[j])).unwrap()
    }

    #[test]
    fn degenerate_set_passes_mean_gap_but_fails_second_moment() {
        let mu = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let s = constant_set(&mu, 50);
        let report = check_good_set_mean(&s, &mu, 0.1, 0.1, &[]).unwrap();
        let mean_gap = report.condition("mean-gap").unwrap();
        assert!(mean_gap.passed);
        assert!((mean_gap.slack() - 0.1).abs() <= 1e-12);
        // M_S = 0 so ‖M_S − I‖₂ = 1 > ε.
        let second = report.condition("second-moment").unwrap();
        assert!(!second.passed);
        assert!((second.observed - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn far_point_fails_radius() {
        let d = 4;
        let mu = DVector::zeros(d);
        let n = 100;
        let mut data = DMatrix::zeros(n, d);
        let far = 10.0 * (d as f64 * (n as f64 / 0.1).ln()).sqrt();
        data[(0, 0)] = far;
        let s = SampleSet::new(data).unwrap();
        let report = check_good_set_mean(&s, &mu, 0.1, 0.1, &[]).unwrap();
        assert!(!report.condition("radius").unwrap().passed);
    }

    #[test]
    fn labeled_outliers_are_rejected() {
        let data = DMatrix::zeros(2, 2);
        let s = SampleSet::with_labels(data, vec![Label::Inlier, Label::Outlier]).unwrap();
        assert!(matches!(
            check_good_set_mean(&s, &DVector::zeros(2), 0.1, 0.1, &[]),
            Err(CoreError::OutliersPresent { outliers: 1 })
        ));
    }

    #[test]
    fn second_moment_check_passes_point_mass_and_fails_spread() {
        let mu = DVector::from_vec(vec![0.5, -0.5]);
        let s = constant_set(&mu, 20);
        let report = check_good_set_second_moment(&s, &mu, 0.05).unwrap();
        assert!(report.all_passed());

        // Points at ±√3·e1 about the origin: top covariance eigenvalue 3 > 2.
        let mut data = DMatrix::zeros(10, 2);
        for i in 0..10 {
            data[(i, 0)] = if i % 2 == 0 { 3.0f64.sqrt() } else { -(3.0f64.sqrt()) };
        }
        let s2 = SampleSet::new(data).unwrap();
        let report2 = check_good_set_second_moment(&s2, &DVector::zeros(2), 0.05).unwrap();
        let cov = report2.condition("covariance-norm").unwrap();
        assert!(!cov.passed);
        assert!((cov.observed - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn tail_denominator_clamps_at_one() {
        // Huge ε·τ relative to d drives the inner log negative.
        assert_eq!(tail_denominator(1, 0.45, 0.99), 1.0);
        assert!(tail_denominator(100, 0.1, 0.1) > 1.0);
    }
}
