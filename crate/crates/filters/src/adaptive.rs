use robust_core::{FilterConfig, RngStream};

use crate::{AdaptiveInvocation, AdaptiveProbe, FilterDiagnostics, FilterError, FilterStepOutcome};

/// Probe budget of the binary search on C₂.
pub const MAX_ADAPTIVE_PROBES: usize = 20;

/// Adaptive tail bounding: reruns a filter step, binary searching the tail
/// sharpness constant C₂ until the removed fraction lands in
/// `[ε/2, 3ε/2]`.
///
/// Larger C₂ means a stricter (pointwise smaller) tail bound, which can only
/// move the violating threshold down and so remove more points: too many
/// removals halve C₂ toward `c2_min`, too few double it toward `c2_max`.
/// Every probe runs on a clone of the rng stream so probes see identical
/// randomness; the accepted probe's stream state is adopted. The full probe
/// history lands in the diagnostics so the realized direction of the search
/// can be audited.
///
/// A probe on which the step finds no violating threshold at all counts as
/// removing zero points (too few). After [`MAX_ADAPTIVE_PROBES`] probes the
/// last outcome is returned with the cap recorded.
pub fn adaptive_filter<T, F>(
    input_n: usize,
    cfg: &FilterConfig,
    rng: &mut RngStream,
    diag: &mut FilterDiagnostics,
    mut step: F,
) -> Result<FilterStepOutcome<T>, FilterError>
where
    F: FnMut(f64, &mut RngStream, &mut FilterDiagnostics) -> Result<FilterStepOutcome<T>, FilterError>,
{
    let lo = cfg.epsilon / 2.0;
    let hi = 1.5 * cfg.epsilon;
    let mut c2 = cfg.c2_initial;
    let mut probes: Vec<AdaptiveProbe> = Vec::new();
    let mut last: Option<(FilterStepOutcome<T>, RngStream, FilterDiagnostics, usize)> = None;

    for probe_idx in 0..MAX_ADAPTIVE_PROBES {
        let mut probe_rng = rng.clone();
        let mut scratch = FilterDiagnostics::new(input_n);
        let result = step(c2, &mut probe_rng, &mut scratch);

        let removed = match &result {
            Ok(FilterStepOutcome::Estimate(_)) => {
                // Nothing was removed; the step terminated. Accept as-is.
                *rng = probe_rng;
                diag.absorb(scratch);
                diag.adaptive_invocations.push(AdaptiveInvocation {
                    probes,
                    accepted_removed: 0,
                    total: input_n,
                    capped: false,
                });
                return result;
            }
            Ok(FilterStepOutcome::Retained(idx)) => input_n - idx.len(),
            Err(FilterError::Stuck { .. }) => 0,
            Err(_) => return result,
        };
        probes.push(AdaptiveProbe {
            c2,
            removed,
            total: input_n,
        });

        let frac = removed as f64 / input_n as f64;
        if (lo..=hi).contains(&frac) {
            *rng = probe_rng;
            diag.absorb(scratch);
            diag.adaptive_invocations.push(AdaptiveInvocation {
                probes,
                accepted_removed: removed,
                total: input_n,
                capped: false,
            });
            return result;
        }

        let next_c2 = if frac > hi {
            (c2 / 2.0).max(cfg.c2_min)
        } else {
            (c2 * 2.0).min(cfg.c2_max)
        };
        last = Some((
            match result {
                Ok(outcome) => outcome,
                Err(e) => {
                    // A stuck probe at the C₂ cap cannot improve further.
                    if next_c2 == c2 || probe_idx + 1 == MAX_ADAPTIVE_PROBES {
                        diag.adaptive_invocations.push(AdaptiveInvocation {
                            probes,
                            accepted_removed: 0,
                            total: input_n,
                            capped: true,
                        });
                        return Err(e);
                    }
                    c2 = next_c2;
                    continue;
                }
            },
            probe_rng,
            scratch,
            removed,
        ));
        if next_c2 == c2 {
            // Pinned at a bound; no further probes can change the outcome.
            break;
        }
        c2 = next_c2;
    }

    let (outcome, probe_rng, scratch, removed) =
        last.expect("at least one probe produced an outcome");
    *rng = probe_rng;
    diag.absorb(scratch);
    diag.warnings
        .push("adaptive tail bounding hit its probe budget outside the target band".into());
    diag.adaptive_invocations.push(AdaptiveInvocation {
        probes,
        accepted_removed: removed,
        total: input_n,
        capped: true,
    });
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A synthetic step whose removals grow with C₂.
    fn removals_for(c2: f64, n: usize) -> usize {
        ((c2 * 10.0) as usize).min(n / 2)
    }

    #[test]
    fn step_already_in_band_is_returned_after_one_probe() {
        let mut cfg = FilterConfig::new(0.1);
        cfg.c2_initial = 1.0; // removes 10 of 100 = ε·n exactly
        let mut rng = RngStream::new(0, 0);
        let mut diag = FilterDiagnostics::new(100);
        let out = adaptive_filter(100, &cfg, &mut rng, &mut diag, |c2, _, _| {
            let removed = removals_for(c2, 100);
            Ok(FilterStepOutcome::<f64>::Retained(
                (0..100 - removed).collect(),
            ))
        })
        .unwrap();
        match out {
            FilterStepOutcome::Retained(idx) => assert_eq!(idx.len(), 90),
            _ => panic!("expected retained"),
        }
        let inv = &diag.adaptive_invocations[0];
        assert_eq!(inv.probes.len(), 1);
        assert!(!inv.capped);
    }

    #[test]
    fn search_raises_c2_when_removing_too_few() {
        let mut cfg = FilterConfig::new(0.4);
        cfg.c2_initial = 1.0; // 10 of 100 = 0.1 < ε/2 = 0.2 → double
        let mut rng = RngStream::new(0, 0);
        let mut diag = FilterDiagnostics::new(100);
        let out = adaptive_filter(100, &cfg, &mut rng, &mut diag, |c2, _, _| {
            let removed = removals_for(c2, 100);
            Ok(FilterStepOutcome::<f64>::Retained(
                (0..100 - removed).collect(),
            ))
        })
        .unwrap();
        match out {
            FilterStepOutcome::Retained(idx) => {
                let removed = 100 - idx.len();
                let frac = removed as f64 / 100.0;
                assert!((0.2..=0.6).contains(&frac), "fraction {frac}");
            }
            _ => panic!("expected retained"),
        }
        let inv = &diag.adaptive_invocations[0];
        assert!(inv.probes.len() > 1);
        assert!(inv.probes[1].c2 > inv.probes[0].c2);
    }

    #[test]
    fn probe_budget_is_recorded_when_band_unreachable() {
        let mut cfg = FilterConfig::new(0.1);
        cfg.c2_initial = 1.0;
        cfg.c2_min = 1.0;
        cfg.c2_max = 1024.0;
        let mut rng = RngStream::new(0, 0);
        let mut diag = FilterDiagnostics::new(100);
        // Always removes 90: far above the band, and C₂ is pinned at c2_min.
        let out = adaptive_filter(100, &cfg, &mut rng, &mut diag, |_, _, _| {
            Ok(FilterStepOutcome::<f64>::Retained((0..10).collect()))
        })
        .unwrap();
        assert!(matches!(out, FilterStepOutcome::Retained(_)));
        assert!(diag.adaptive_invocations[0].capped);
    }
}
