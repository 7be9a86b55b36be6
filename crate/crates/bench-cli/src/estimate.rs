//! Single-dataset estimation: CSV observations in, JSON estimate out.

use ces_core::estimators::{r_estimator, tyler_joint};
use ces_core::linalg::CVector;
use ces_core::model::Dataset;
use ces_core::score::ScoreFunction;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::BenchError;

/// Estimator selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateKind {
    Tyler,
    RVdw,
    RT,
}

impl EstimateKind {
    pub fn parse(s: &str) -> Result<Self, BenchError> {
        match s {
            "tyler" => Ok(Self::Tyler),
            "r-vdw" => Ok(Self::RVdw),
            "r-t" => Ok(Self::RT),
            other => Err(BenchError::Config(format!(
                "unknown estimator '{other}' (expected tyler, r-vdw, or r-t)"
            ))),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Self::Tyler => "tyler",
            Self::RVdw => "r-vdw",
            Self::RT => "r-t",
        }
    }
}

/// Parses the observation CSV: header `re_1,im_1,…,re_N,im_N`, one
/// observation per row.
pub fn parse_dataset_csv(text: &str) -> Result<Dataset, BenchError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| BenchError::Config(e.to_string()))?
        .clone();
    if headers.len() < 2 || headers.len() % 2 != 0 {
        return Err(BenchError::Config(format!(
            "expected an even number of columns (re/im pairs), got {}",
            headers.len()
        )));
    }
    let n = headers.len() / 2;
    for k in 0..n {
        let (re, im) = (&headers[2 * k], &headers[2 * k + 1]);
        if re != format!("re_{}", k + 1) || im != format!("im_{}", k + 1) {
            return Err(BenchError::Config(format!(
                "bad header columns '{re},{im}' at position {}: expected 're_{},im_{}'",
                2 * k + 1,
                k + 1,
                k + 1
            )));
        }
    }
    let mut observations = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| BenchError::Config(e.to_string()))?;
        if record.len() != 2 * n {
            return Err(BenchError::Config(format!(
                "row {} has {} fields, expected {}",
                row_idx + 1,
                record.len(),
                2 * n
            )));
        }
        let mut z = CVector::zeros(n);
        for k in 0..n {
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| BenchError::Config(format!("bad number '{s}' in row {}", row_idx + 1)))
            };
            z[k] = Complex64::new(parse(&record[2 * k])?, parse(&record[2 * k + 1])?);
        }
        observations.push(z);
    }
    Dataset::new(n, observations).map_err(|e| BenchError::Config(e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct EstimateOutput {
    pub estimator: String,
    pub n: usize,
    pub l: usize,
    pub mu_hat_re: Vec<f64>,
    pub mu_hat_im: Vec<f64>,
    pub v1_hat_re: Vec<Vec<f64>>,
    pub v1_hat_im: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pd_fallback: Option<bool>,
}

/// Runs the requested estimator on the dataset.
pub fn run_estimate(
    d: &Dataset,
    kind: EstimateKind,
    nu: f64,
    seed: u64,
) -> Result<EstimateOutput, BenchError> {
    let runtime = |e: ces_core::Error| BenchError::Runtime(e.to_string());
    let prelim = tyler_joint(d, 1e-8, 1000).map_err(runtime)?;
    let (joint, alpha, pd_fallback) = match kind {
        EstimateKind::Tyler => (prelim, None, None),
        EstimateKind::RVdw | EstimateKind::RT => {
            let score = match kind {
                EstimateKind::RVdw => ScoreFunction::VanDerWaerden { n: d.n },
                _ => ScoreFunction::TNu { n: d.n, nu },
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (est, diag) = r_estimator(d, &prelim, &score, &mut rng).map_err(runtime)?;
            match est.shape_matrix() {
                Some(v1) => (
                    ces_core::estimators::JointEstimate {
                        mu_hat: prelim.mu_hat.clone(),
                        v1_hat: v1,
                        iterations: prelim.iterations,
                        converged: prelim.converged,
                    },
                    Some(diag.alpha_hat),
                    Some(false),
                ),
                None => (prelim, Some(diag.alpha_hat), Some(true)),
            }
        }
    };
    let n = d.n;
    let v = joint.v1_hat.mat();
    Ok(EstimateOutput {
        estimator: kind.label().to_string(),
        n,
        l: d.len(),
        mu_hat_re: (0..n).map(|i| joint.mu_hat[i].re).collect(),
        mu_hat_im: (0..n).map(|i| joint.mu_hat[i].im).collect(),
        v1_hat_re: (0..n)
            .map(|i| (0..n).map(|j| v[(i, j)].re).collect())
            .collect(),
        v1_hat_im: (0..n)
            .map(|i| (0..n).map(|j| v[(i, j)].im).collect())
            .collect(),
        iterations: joint.iterations,
        converged: joint.converged,
        alpha_hat: alpha,
        pd_fallback,
    })
}
