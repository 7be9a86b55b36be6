//! Bias, mean-squared-error, and bound indices aggregated over Monte Carlo
//! trials.
//!
//! Location MSE uses augmented errors (the error stacked on its conjugate)
//! so the index is comparable to the 2N×2N location bound; the shape MSE
//! uses plain ovec errors, matching the (N²−1)-dimensional shape bound.

use ces_core::estimators::JointEstimate;
use ces_core::linalg::{ovec, CMatrix, CVector};
use ces_core::model::{gg_fisher_moments, scrb_location, scrb_shape, Scenario};
use ces_core::Result;

fn location_errors(estimates: &[JointEstimate], truth: &Scenario) -> Vec<CVector> {
    estimates.iter().map(|e| &e.mu_hat - &truth.mu0).collect()
}

fn shape_errors(estimates: &[JointEstimate], truth: &Scenario) -> Vec<CVector> {
    estimates
        .iter()
        .map(|e| ovec(&(e.v1_hat.mat() - truth.v10.mat())).expect("shape dims agree"))
        .collect()
}

fn augmented(e: &CVector) -> CVector {
    let n = e.len();
    CVector::from_fn(2 * n, |i, _| if i < n { e[i] } else { e[i - n].conj() })
}

/// β = ‖E{μ̂ − μ₀}‖₂ and φ = ‖E{ovec(V̂ − V₀)}‖₂ over the trial list.
pub fn bias_indices(estimates: &[JointEstimate], truth: &Scenario) -> (f64, f64) {
    assert!(!estimates.is_empty());
    let t = estimates.len() as f64;
    let mu_mean = location_errors(estimates, truth)
        .iter()
        .fold(CVector::zeros(truth.n), |a, e| a + e)
        .unscale(t);
    let v_mean = shape_errors(estimates, truth)
        .iter()
        .fold(CVector::zeros(truth.n * truth.n - 1), |a, e| a + e)
        .unscale(t);
    (mu_mean.norm(), v_mean.norm())
}

fn mean_outer_norm(errors: &[CVector]) -> f64 {
    let dim = errors[0].len();
    let acc = errors
        .iter()
        .fold(CMatrix::zeros(dim, dim), |a, e| a + e * e.adjoint());
    acc.unscale(errors.len() as f64).norm()
}

/// ϱ = ‖E{eᵃ eᵃᴴ}‖_F with augmented location errors, and
/// ς = ‖E{e_V e_Vᴴ}‖_F with ovec shape errors.
pub fn mse_indices(estimates: &[JointEstimate], truth: &Scenario) -> (f64, f64) {
    assert!(!estimates.is_empty());
    let mu_aug: Vec<CVector> = location_errors(estimates, truth)
        .iter()
        .map(augmented)
        .collect();
    let v_err = shape_errors(estimates, truth);
    (mean_outer_norm(&mu_aug), mean_outer_norm(&v_err))
}

/// Per-observation-count bound indices: (‖SCRB(μ)‖_F / L, ‖SCRB(ovec V)‖_F / L).
pub fn bound_indices(scenario: &Scenario, l: usize) -> Result<(f64, f64)> {
    let m = gg_fisher_moments(&scenario.gg);
    let b_mu = scrb_location(&scenario.v10, &m);
    let b_v = scrb_shape(&scenario.v10, &m)?;
    let lf = l as f64;
    Ok((b_mu.frobenius_norm() / lf, b_v.frobenius_norm() / lf))
}
