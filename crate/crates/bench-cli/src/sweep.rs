//! The Monte Carlo sweep over the tail-parameter grid.
//!
//! Determinism contract: every trial owns an RNG substream derived from
//! (master seed, s index, trial index, attempt); trial outputs are collected
//! in trial order and reduced sequentially, so the output is a pure function
//! of the config regardless of worker count.

use ces_core::estimators::{r_estimator, scm_shape, tyler_joint, JointEstimate};
use ces_core::model::{sample_ces, toeplitz_scenario, Scenario};
use ces_core::score::ScoreFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{EstimatorKind, SweepConfig};
use crate::metrics::{bias_indices, bound_indices, mse_indices};
use crate::BenchError;

const TYLER_TOL: f64 = 1e-8;
const TYLER_MAX_ITER: usize = 1000;
const MAX_ATTEMPTS: u64 = 256;

/// One output row of the MSE sweep: one (s, estimator) cell.
#[derive(Debug, Clone)]
pub struct CellRow {
    pub s: f64,
    pub estimator: EstimatorKind,
    pub beta: f64,
    pub phi: f64,
    pub varrho: f64,
    pub varsigma: f64,
    pub eps_mu: f64,
    pub eps_v: f64,
    pub trials: usize,
    pub pd_failures: usize,
}

struct TrialOutput {
    estimates: Vec<JointEstimate>,
    pd_failures: Vec<bool>,
    resamples: u64,
}

fn trial_rng(seed: u64, s_idx: usize, trial: usize, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((s_idx as u64) << 40) ^ ((trial as u64) << 8) ^ attempt);
    rng
}

fn run_attempt(
    cfg: &SweepConfig,
    scenario: &Scenario,
    rng: &mut ChaCha8Rng,
) -> ces_core::Result<(Vec<JointEstimate>, Vec<bool>)> {
    let d = sample_ces(cfg.l, scenario, rng)?;

    let need_scm = cfg
        .estimators
        .iter()
        .any(|e| matches!(e, EstimatorKind::Sm | EstimatorKind::Scm));
    let need_tyler = cfg.estimators.iter().any(EstimatorKind::needs_tyler);

    let scm = if need_scm { Some(scm_shape(&d)?) } else { None };
    let tyler = if need_tyler {
        Some(tyler_joint(&d, TYLER_TOL, TYLER_MAX_ITER)?)
    } else {
        None
    };

    let mut estimates = Vec::with_capacity(cfg.estimators.len());
    let mut pd_failures = Vec::with_capacity(cfg.estimators.len());
    for kind in &cfg.estimators {
        match kind {
            EstimatorKind::Sm | EstimatorKind::Scm => {
                estimates.push(scm.clone().expect("SCM computed"));
                pd_failures.push(false);
            }
            EstimatorKind::Tyler => {
                estimates.push(tyler.clone().expect("Tyler computed"));
                pd_failures.push(false);
            }
            EstimatorKind::RVdw | EstimatorKind::RT5 => {
                let prelim = tyler.as_ref().expect("Tyler computed");
                let score = match kind {
                    EstimatorKind::RVdw => ScoreFunction::VanDerWaerden { n: cfg.n },
                    _ => ScoreFunction::TNu {
                        n: cfg.n,
                        nu: cfg.nu,
                    },
                };
                let (est, _) = r_estimator(&d, prelim, &score, rng)?;
                // Outside the PD cone: fall back to the preliminary, counted.
                match est.shape_matrix() {
                    Some(v1) => {
                        estimates.push(JointEstimate {
                            mu_hat: prelim.mu_hat.clone(),
                            v1_hat: v1,
                            iterations: prelim.iterations,
                            converged: prelim.converged,
                        });
                        pd_failures.push(false);
                    }
                    None => {
                        estimates.push(prelim.clone());
                        pd_failures.push(true);
                    }
                }
            }
        }
    }
    Ok((estimates, pd_failures))
}

fn run_trial(cfg: &SweepConfig, scenario: &Scenario, s_idx: usize, trial: usize) -> TrialOutput {
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = trial_rng(cfg.seed, s_idx, trial, attempt);
        if let Ok((estimates, pd_failures)) = run_attempt(cfg, scenario, &mut rng) {
            return TrialOutput {
                estimates,
                pd_failures,
                resamples: attempt,
            };
        }
    }
    TrialOutput {
        estimates: Vec::new(),
        pd_failures: Vec::new(),
        resamples: MAX_ATTEMPTS,
    }
}

/// Runs the full sweep; rows are ordered by s-grid position, then by the
/// configured estimator order.
pub fn run_mse_sweep(cfg: &SweepConfig) -> Result<Vec<CellRow>, BenchError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| BenchError::Runtime(e.to_string()))?;

    let mut rows = Vec::new();
    for (s_idx, &s) in cfg.s_grid.iter().enumerate() {
        let scenario = toeplitz_scenario(cfg.n, s, cfg.sigma_x2)
            .map_err(|e| BenchError::Config(e.to_string()))?;
        let (eps_mu, eps_v) = bound_indices(&scenario, cfg.l)
            .map_err(|e| BenchError::Runtime(e.to_string()))?;

        let outputs: Vec<TrialOutput> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|trial| run_trial(cfg, &scenario, s_idx, trial))
                .collect()
        });

        let resamples: u64 = outputs.iter().map(|o| o.resamples).sum();
        let aborted = outputs.iter().any(|o| o.estimates.is_empty());
        if aborted || resamples as f64 > 0.01 * cfg.trials as f64 {
            return Err(BenchError::Runtime(format!(
                "resample rate exceeded at s = {s}: {resamples} resamples over {} trials",
                cfg.trials
            )));
        }

        for (e_idx, &kind) in cfg.estimators.iter().enumerate() {
            let per_estimator: Vec<JointEstimate> = outputs
                .iter()
                .map(|o| o.estimates[e_idx].clone())
                .collect();
            let pd_failures = outputs.iter().filter(|o| o.pd_failures[e_idx]).count();
            let (beta, phi) = bias_indices(&per_estimator, &scenario);
            let (varrho, varsigma) = mse_indices(&per_estimator, &scenario);
            rows.push(CellRow {
                s,
                estimator: kind,
                beta,
                phi,
                varrho,
                varsigma,
                eps_mu,
                eps_v,
                trials: cfg.trials,
                pd_failures,
            });
        }
    }
    Ok(rows)
}

/// CSV rendering with 17 significant digits per floating value.
pub fn render_mse_csv(rows: &[CellRow]) -> String {
    let mut out =
        String::from("s,estimator,beta,phi,varrho,varsigma,eps_mu,eps_v,trials,pd_failures\n");
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
            r.s,
            r.estimator.label(),
            r.beta,
            r.phi,
            r.varrho,
            r.varsigma,
            r.eps_mu,
            r.eps_v,
            r.trials,
            r.pd_failures
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(estimators: Vec<EstimatorKind>, trials: usize, workers: usize) -> SweepConfig {
        SweepConfig {
            n: 4,
            l: 24,
            trials,
            s_grid: vec![1.0],
            sigma_x2: 4.0,
            estimators,
            nu: 5.0,
            seed: 77,
            workers,
        }
    }

    #[test]
    fn smoke_single_trial_sm() {
        let rows = run_mse_sweep(&small_cfg(vec![EstimatorKind::Sm], 1, 1)).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!(r.beta.is_finite() && r.beta > 0.0);
        assert!(r.varrho.is_finite() && r.varrho > 0.0);
        assert!(r.eps_mu > 0.0 && r.eps_v > 0.0);
        assert_eq!((r.trials, r.pd_failures), (1, 0));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let ests = vec![
            EstimatorKind::Sm,
            EstimatorKind::Tyler,
            EstimatorKind::RVdw,
        ];
        let a = render_mse_csv(&run_mse_sweep(&small_cfg(ests.clone(), 16, 1)).unwrap());
        let b = render_mse_csv(&run_mse_sweep(&small_cfg(ests, 16, 3)).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn csv_shape_and_header() {
        let cfg = SweepConfig {
            s_grid: vec![0.5, 1.0],
            ..small_cfg(vec![EstimatorKind::Sm, EstimatorKind::Scm], 2, 1)
        };
        let rows = run_mse_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        let csv = render_mse_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "s,estimator,beta,phi,varrho,varsigma,eps_mu,eps_v,trials,pd_failures"
        );
        assert_eq!(lines.count(), 4);
        // SM and SCM report the same joint pair, so their rows agree
        // except for the label.
        let lines: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(
            lines[0].replace("SM", "X"),
            lines[1].replace("SCM", "X")
        );
    }

    #[test]
    fn invalid_config_is_config_error() {
        let cfg = small_cfg(vec![], 1, 1);
        assert!(matches!(
            run_mse_sweep(&cfg),
            Err(BenchError::Config(_))
        ));
    }
}
