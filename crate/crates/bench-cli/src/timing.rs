//! Wall-clock comparison of the shape estimators: Tyler's fixed point, the
//! fast matrix-form one-step update, and its O(N⁴) vectorized form, on
//! identical data. Medians over reps, with one discarded warm-up rep.

use std::time::Instant;

use ces_core::estimators::{
    gen_perturbation, r_estimator_vectorized, r_estimator_with_perturbation, tyler_joint,
};
use ces_core::model::{sample_ces, toeplitz_scenario};
use ces_core::score::ScoreFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::BenchError;

/// Median timings (seconds) for one problem dimension.
#[derive(Debug, Clone)]
pub struct TimingRow {
    pub n: usize,
    pub t_tyler: f64,
    pub t_r_matrix: f64,
    pub t_r_vectorized: f64,
    pub reps: usize,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Runs the timing sweep with L = 5N per dimension.
pub fn run_timing_sweep(
    n_list: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<TimingRow>, BenchError> {
    if n_list.is_empty() || n_list.iter().any(|&n| n < 2) {
        return Err(BenchError::Config("each N must be >= 2".into()));
    }
    if reps < 1 {
        return Err(BenchError::Config("reps must be >= 1".into()));
    }
    let mut rows = Vec::new();
    for (n_idx, &n) in n_list.iter().enumerate() {
        let l = 5 * n;
        let scenario =
            toeplitz_scenario(n, 1.0, 4.0).map_err(|e| BenchError::Config(e.to_string()))?;
        let score = ScoreFunction::VanDerWaerden { n };
        let mut t_tyler = Vec::new();
        let mut t_fast = Vec::new();
        let mut t_slow = Vec::new();
        for rep in 0..=reps {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((n_idx as u64) << 32) ^ rep as u64);
            let d = sample_ces(l, &scenario, &mut rng)
                .map_err(|e| BenchError::Runtime(e.to_string()))?;

            let t0 = Instant::now();
            let prelim =
                tyler_joint(&d, 1e-8, 1000).map_err(|e| BenchError::Runtime(e.to_string()))?;
            let dt_tyler = t0.elapsed().as_secs_f64();

            let h0 = gen_perturbation(&prelim.v1_hat, l, &mut rng)
                .map_err(|e| BenchError::Runtime(e.to_string()))?;

            let t1 = Instant::now();
            let (fast, _) = r_estimator_with_perturbation(&d, &prelim, &score, &h0)
                .map_err(|e| BenchError::Runtime(e.to_string()))?;
            let dt_fast = t1.elapsed().as_secs_f64();

            let t2 = Instant::now();
            let slow = r_estimator_vectorized(&d, &prelim, &score, &h0)
                .map_err(|e| BenchError::Runtime(e.to_string()))?;
            let dt_slow = t2.elapsed().as_secs_f64();

            let rel = (fast.raw.mat() - slow.mat()).norm() / slow.mat().norm();
            if rel > 1e-8 {
                return Err(BenchError::Runtime(format!(
                    "fast/vectorized estimates disagree at N = {n}: relative error {rel:e}"
                )));
            }
            if rep == 0 {
                continue; // warm-up
            }
            t_tyler.push(dt_tyler);
            t_fast.push(dt_fast);
            t_slow.push(dt_slow);
        }
        rows.push(TimingRow {
            n,
            t_tyler: median(t_tyler),
            t_r_matrix: median(t_fast),
            t_r_vectorized: median(t_slow),
            reps,
        });
    }
    Ok(rows)
}

pub fn render_timing_csv(rows: &[TimingRow]) -> String {
    let mut out = String::from("N,estimator,median_seconds,reps\n");
    for r in rows {
        for (label, t) in [
            ("Tyler", r.t_tyler),
            ("R-matrix", r.t_r_matrix),
            ("R-vectorized", r.t_r_vectorized),
        ] {
            out.push_str(&format!("{},{},{:.16e},{}\n", r.n, label, t, r.reps));
        }
    }
    out
}
