// Scratch probe: empirical top eigenvalue of the fourth-moment operator.
use nalgebra::DMatrix;
use robust_core::RngStream;
use robust_spectral::{inverse_sqrt, FourthMomentOperator};

fn lambda_star(data: &DMatrix<f64>, seed: u64) -> f64 {
    let n = data.nrows();
    let sigma = data.transpose() * data / n as f64;
    let r = inverse_sqrt(&sigma).unwrap();
    let y = data * &r;
    let op = FourthMomentOperator::new(y);
    let mut rng = RngStream::new(seed, 99);
    let d = data.ncols();
    match robust_spectral::top_eigenpair(|w| op.apply(w), d * d, 1e-6, 4000, &mut rng) {
        Ok(p) => p.value,
        Err(robust_spectral::SpectralError::NoConvergence { residual, .. }) => {
            eprintln!("  (no convergence, residual {residual:.2e})");
            f64::NAN
        }
        Err(e) => panic!("{e}"),
    }
}

fn main() {
    for &d in &[10usize, 20, 30, 50] {
        let eps = 0.05;
        let n = (0.5 * d as f64 / (eps * eps)) as usize;
        let mut clean_vals = vec![];
        let mut zero_vals = vec![];
        for seed in 0..10u64 {
            let mut rng = RngStream::new(seed, 0);
            let clean = DMatrix::from_fn(n, d, |_, _| rng.standard_normal());
            clean_vals.push(lambda_star(&clean, seed));
            let mut corrupted = clean.clone();
            let n_bad = (n as f64 * eps) as usize;
            for i in 0..n_bad {
                for j in 0..d {
                    corrupted[(i, j)] = 0.0;
                }
            }
            zero_vals.push(lambda_star(&corrupted, seed));
        }
        let fmt = |v: &Vec<f64>| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(0.0f64, f64::max);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            format!("min {lo:.3} mean {mean:.3} max {hi:.3}")
        };
        println!("d={d:3} n={n:6}  clean: {}   zeros5%: {}", fmt(&clean_vals), fmt(&zero_vals));
    }
}
