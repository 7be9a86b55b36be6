//! Fast matrix form of the one-step shape update versus the explicit
//! O(N⁴) vectorized form, on simulated data with both score functions.

use ces_core::estimators::{gen_perturbation, r_estimator_vectorized, r_estimator_with_perturbation};
use ces_core::model::{sample_ces, toeplitz_scenario};
use ces_core::score::ScoreFunction;
use ces_core::tyler_joint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fast_matches_vectorized_across_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 4] {
        for s in [0.5f64, 1.0] {
            let sc = toeplitz_scenario(n, s, 4.0).unwrap();
            let d = sample_ces(15 * n, &sc, &mut rng).unwrap();
            let prelim = tyler_joint(&d, 1e-9, 1000).unwrap();
            for k in [
                ScoreFunction::VanDerWaerden { n },
                ScoreFunction::TNu { n, nu: 5.0 },
            ] {
                let h0 = gen_perturbation(&prelim.v1_hat, d.len(), &mut rng).unwrap();
                let (fast, _) = r_estimator_with_perturbation(&d, &prelim, &k, &h0).unwrap();
                let slow = r_estimator_vectorized(&d, &prelim, &k, &h0).unwrap();
                let rel = (fast.raw.mat() - slow.mat()).norm() / slow.mat().norm();
                assert!(rel < 1e-8, "N = {n}, s = {s}, {k:?}: discrepancy {rel:e}");
            }
        }
    }
}
