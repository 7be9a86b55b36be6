//! Monte Carlo benchmark harness for the CES shape/location estimators:
//! seeded parallel sweeps over the tail-parameter grid, wall-clock timing
//! of the fast versus vectorized one-step update, and single-dataset
//! estimation, all emitting stable CSV/JSON.

pub mod config;
pub mod estimate;
pub mod metrics;
pub mod sweep;
pub mod timing;

/// Harness-level failures, mapped to process exit codes by the CLI.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime abort: {0}")]
    Runtime(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Runtime(_) => 3,
        }
    }
}

pub use config::{EstimatorKind, SweepConfig};
pub use estimate::{parse_dataset_csv, run_estimate, EstimateKind, EstimateOutput};
pub use metrics::{bias_indices, bound_indices, mse_indices};
pub use sweep::{render_mse_csv, run_mse_sweep, CellRow};
pub use timing::{render_timing_csv, run_timing_sweep, TimingRow};
