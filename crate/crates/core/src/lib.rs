//! Robust, semiparametric-efficient joint estimation of the location vector
//! and shape matrix of complex elliptically symmetric (CES) data.
//!
//! The crate provides:
//! - [`linalg`]: complex Hermitian primitives and the structured matrices of
//!   the vectorized estimator path,
//! - [`model`]: CES data generation under the Generalized Gaussian density
//!   generator and the closed-form semiparametric Cramér-Rao bounds,
//! - [`score`]: rank score functions and the quantile machinery behind them,
//! - [`estimators`]: the sample baseline, Tyler's joint fixed point, and the
//!   one-step rank-based shape estimator in both its fast matrix form and
//!   its O(N⁴) vectorized form (kept as a cross-check oracle).

pub mod error;
pub mod estimators;
pub mod linalg;
pub mod model;
pub mod score;
pub mod testing;

pub use error::{Error, Result};
pub use estimators::{
    alpha_hat, central_seq, gen_perturbation, r_estimator, r_estimator_vectorized,
    r_estimator_with_perturbation, r_stat_and_zeta, ranks, residuals, sample_mean, scm_shape,
    tyler_joint, JointEstimate, PerturbationMatrix, REstimateDiagnostics, RShapeEstimate,
    Residuals,
};
pub use linalg::{
    build_l, build_selector, inverse, ovec, psd_sqrt, unvec, vec, CMatrix, CVector,
    HermitianMatrix, ShapeMatrix, StructuredSelector,
};
pub use model::{
    default_scenario, gg_fisher_moments, gg_psi, gg_scale_b, sample_ces, sample_gg_q,
    sample_unit_sphere, scrb_location, scrb_shape, toeplitz_scenario, Dataset, FisherMoments,
    GGParams, Scenario,
};
pub use score::{f_quantile, gamma_quantile, ScoreFunction};
