use robust_core::SampleSet;

/// Removes obvious outliers before filtering: a point is retained iff at
/// least half the points lie within `2·√(2ν·d·log(2nd/τ))` of it.
///
/// Membership is decided exactly. Distances to the coordinatewise median
/// certify most points in O(n·d) via the triangle inequality; only points
/// the certificates cannot decide pay the O(n·d) exact scan.
pub fn naive_prune(s: &SampleSet, tau: f64, nu: f64) -> Vec<usize> {
    let n = s.n();
    let d = s.dim();
    let radius =
        2.0 * (2.0 * nu * d as f64 * (2.0 * n as f64 * d as f64 / tau).ln()).sqrt();

    // Coordinatewise median as the reference point.
    let mut median = vec![0.0f64; d];
    let mut col = vec![0.0f64; n];
    for j in 0..d {
        for i in 0..n {
            col[i] = s.data()[(i, j)];
        }
        col.sort_by(|a, b| a.partial_cmp(b).unwrap());
        median[j] = if n % 2 == 1 {
            col[n / 2]
        } else {
            0.5 * (col[n / 2 - 1] + col[n / 2])
        };
    }

    let dist_to_median: Vec<f64> = (0..n)
        .map(|i| {
            let mut sum = 0.0;
            for j in 0..d {
                let diff = s.data()[(i, j)] - median[j];
                sum += diff * diff;
            }
            sum.sqrt()
        })
        .collect();
    let mut sorted = dist_to_median.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let count_leq = |bound: f64| -> usize { sorted.partition_point(|&x| x <= bound) };

    let mut retained = Vec::with_capacity(n);
    for i in 0..n {
        let di = dist_to_median[i];
        // Points j with d_j ≤ R − d_i are within R of i.
        let lower = if radius >= di { count_leq(radius - di) } else { 0 };
        if 2 * lower >= n {
            retained.push(i);
            continue;
        }
        // Points j with d_j < d_i − R are certainly beyond R of i.
        let upper = n - sorted.partition_point(|&x| x < di - radius);
        if 2 * upper < n {
            continue;
        }
        // Undecided: exact neighbor count.
        let mut within = 0usize;
        for k in 0..n {
            let mut sum = 0.0;
            for j in 0..d {
                let diff = s.data()[(i, j)] - s.data()[(k, j)];
                sum += diff * diff;
            }
            if sum.sqrt() <= radius {
                within += 1;
            }
        }
        if 2 * within >= n {
            retained.push(i);
        }
    }
    retained
}
