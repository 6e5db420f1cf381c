use std::sync::Arc;

use robust_core::Centering;

/// Guarded denominator `log(d·log(d/ετ))`, clamped at 1 so the bound stays
/// finite when d/ετ is tiny.
fn subgaussian_denominator(d: usize, epsilon: f64, tau: f64) -> f64 {
    let inner = (d as f64 / (epsilon * tau)).ln();
    let arg = d as f64 * inner;
    if arg > 1.0 {
        arg.ln().max(1.0)
    } else {
        1.0
    }
}

/// Sub-gaussian tail bound
/// `8·exp(−C₂·T²/2ν) + 8ε/(T²·log(d·log(d/ετ)))`; `C₂ = 1` is the
/// theoretical bound, larger values sharpen it.
pub fn tail_subgaussian(t: f64, d: usize, epsilon: f64, tau: f64, nu: f64, c2: f64) -> f64 {
    debug_assert!(t > 0.0, "tail bounds are defined for T > 0");
    let exp_term = 8.0 * (-c2 * t * t / (2.0 * nu)).exp();
    let poly_term = if epsilon > 0.0 {
        8.0 * epsilon / (t * t * subgaussian_denominator(d, epsilon, tau))
    } else {
        0.0
    };
    exp_term + poly_term
}

/// Weakened covariance tail bound: `1` for `T ≤ 10·log(1/ε)`, otherwise
/// `ε/(T²·log²T)` (natural log).
pub fn tail_covariance(t: f64, epsilon: f64) -> f64 {
    debug_assert!(t > 0.0, "tail bounds are defined for T > 0");
    if t <= 10.0 * (1.0 / epsilon).ln() {
        1.0
    } else {
        let log_t = t.ln();
        epsilon / (t * t * log_t * log_t)
    }
}

/// Second term of the covariance tail with the log kept away from zero, used
/// by the adaptive exponential form which has no hard floor.
fn tail_covariance_poly(t: f64, epsilon: f64) -> f64 {
    let log_t = t.max(1.01 * std::f64::consts::E).ln();
    epsilon / (t * t * log_t * log_t)
}

/// A univariate tail bound: the maximum fraction of points allowed beyond
/// deviation T. Nonincreasing in T; exceeding it triggers removal.
#[derive(Clone)]
pub enum TailFunction {
    SubGaussian {
        nu: f64,
        epsilon: f64,
        tau: f64,
        dim: usize,
        c2: f64,
    },
    /// The theoretical covariance bound, identically 1 below its T-floor.
    CovarianceWeakened { epsilon: f64 },
    /// The practical covariance bound `C₁·exp(−C₂T)` plus the weakened
    /// polynomial term, used under adaptive tail bounding.
    CovarianceExponential { epsilon: f64, c1: f64, c2: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SubGaussian {
                nu,
                epsilon,
                tau,
                dim,
                c2,
            } => write!(
                f,
                "SubGaussian(nu={nu}, eps={epsilon}, tau={tau}, d={dim}, c2={c2})"
            ),
            Self::CovarianceWeakened { epsilon } => write!(f, "CovarianceWeakened(eps={epsilon})"),
            Self::CovarianceExponential { epsilon, c1, c2 } => {
                write!(f, "CovarianceExponential(eps={epsilon}, c1={c1}, c2={c2})")
            }
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl TailFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::SubGaussian {
                nu,
                epsilon,
                tau,
                dim,
                c2,
            } => tail_subgaussian(t, *dim, *epsilon, *tau, *nu, *c2),
            Self::CovarianceWeakened { epsilon } => tail_covariance(t, *epsilon),
            Self::CovarianceExponential { epsilon, c1, c2 } => {
                c1 * (-c2 * t).exp() + tail_covariance_poly(t, *epsilon)
            }
            Self::Custom(f) => f(t),
        }
    }

    /// The sharpness constant, when this tail exposes one.
    pub fn c2(&self) -> Option<f64> {
        match self {
            Self::SubGaussian { c2, .. } | Self::CovarianceExponential { c2, .. } => Some(*c2),
            _ => None,
        }
    }

    /// Same tail with the sharpness constant replaced; identity for tails
    /// without one.
    pub fn with_c2(&self, new_c2: f64) -> TailFunction {
        match self {
            Self::SubGaussian {
                nu,
                epsilon,
                tau,
                dim,
                ..
            } => Self::SubGaussian {
                nu: *nu,
                epsilon: *epsilon,
                tau: *tau,
                dim: *dim,
                c2: new_c2,
            },
            Self::CovarianceExponential { epsilon, c1, .. } => Self::CovarianceExponential {
                epsilon: *epsilon,
                c1: *c1,
                c2: new_c2,
            },
            other => other.clone(),
        }
    }
}

/// Arithmetic mean or median (even count: mean of the two middle order
/// statistics) of a nonempty slice.
pub fn robust_center(values: &[f64], mode: Centering) -> f64 {
    assert!(!values.is_empty(), "robust_center needs at least one value");
    match mode {
        Centering::Mean => values.iter().sum::<f64>() / values.len() as f64,
        Centering::Median => {
            let mut sorted = values.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = sorted.len();
            if n % 2 == 1 {
                sorted[n / 2]
            } else {
                0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
            }
        }
    }
}

/// A violating threshold together with the order statistic anchoring it.
///
/// `t` satisfies the violation condition below; `anchor = t + δ` exactly (it
/// is the deviation the candidate was derived from, so cutting at
/// `deviation < anchor` removes the detected tail without any floating-point
/// straddling of tied values).
#[derive(Debug, Clone, Copy)]
pub struct ViolationCut {
    pub t: f64,
    pub anchor: f64,
}

/// Smallest candidate `T > 0` at which the empirical exceedance strictly
/// beats the tail bound:
///
/// ```text
/// #{ x : |x − center| > T + δ } / n  >  Tail(T)
/// ```
///
/// Candidates are the left limits of the distinct values of
/// `|x − center| − δ`, so the exceedance at a candidate counts the anchoring
/// order statistic and its ties (for `T` infinitesimally below `a − δ` the
/// event `|x − center| > T + δ` includes the points at `a` itself). Without
/// this, a tied point mass — the extreme case the filters exist for — could
/// never be detected at its own location. Returns `None` when no candidate
/// violates; in particular whenever the tail is ≥ 1 everywhere, since an
/// empirical probability cannot exceed 1.
pub fn find_violation_threshold(
    values: &[f64],
    center: f64,
    delta: f64,
    tail: &TailFunction,
) -> Option<f64> {
    find_violation_cut_above(values, center, delta, tail, 0.0).map(|c| c.t)
}

/// [`find_violation_threshold`] restricted to candidates `T ≥ t_floor`.
pub fn find_violation_threshold_above(
    values: &[f64],
    center: f64,
    delta: f64,
    tail: &TailFunction,
    t_floor: f64,
) -> Option<f64> {
    find_violation_cut_above(values, center, delta, tail, t_floor).map(|c| c.t)
}

/// Threshold search returning the anchoring deviation alongside `T`.
pub fn find_violation_cut_above(
    values: &[f64],
    center: f64,
    delta: f64,
    tail: &TailFunction,
    t_floor: f64,
) -> Option<ViolationCut> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mut devs: Vec<f64> = values.iter().map(|v| (v - center).abs()).collect();
    devs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let nf = n as f64;
    let mut i = 0;
    while i < n {
        let a = devs[i];
        let mut j = i + 1;
        while j < n && devs[j] == a {
            j += 1;
        }
        let t = a - delta;
        if t > 0.0 && t >= t_floor {
            // Left-limit exceedance: the anchor and its ties count.
            let exceedance = (n - i) as f64 / nf;
            if exceedance > tail.eval(t) {
                return Some(ViolationCut { t, anchor: a });
            }
        }
        i = j;
    }
    None
}
