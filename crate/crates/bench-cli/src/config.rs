//! Sweep configuration: a flat JSON file with lower_snake_case keys.

use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Estimators the harness knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    /// Sample mean location with the sample covariance shape.
    #[serde(rename = "SM")]
    Sm,
    /// Sample covariance shape (same joint pair as SM; listed separately so
    /// sweep output matches by-estimator rows).
    #[serde(rename = "SCM")]
    Scm,
    /// Tyler's joint fixed point.
    #[serde(rename = "Tyler")]
    Tyler,
    /// One-step rank estimator, van der Waerden score, Tyler preliminary.
    #[serde(rename = "R-vdW")]
    RVdw,
    /// One-step rank estimator, t-ν score, Tyler preliminary.
    #[serde(rename = "R-t5")]
    RT5,
}

impl EstimatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::Sm => "SM",
            EstimatorKind::Scm => "SCM",
            EstimatorKind::Tyler => "Tyler",
            EstimatorKind::RVdw => "R-vdW",
            EstimatorKind::RT5 => "R-t5",
        }
    }

    pub fn needs_tyler(&self) -> bool {
        matches!(
            self,
            EstimatorKind::Tyler | EstimatorKind::RVdw | EstimatorKind::RT5
        )
    }
}

fn default_nu() -> f64 {
    5.0
}

fn default_workers() -> usize {
    1
}

/// Monte Carlo sweep configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: usize,
    pub l: usize,
    pub trials: usize,
    pub s_grid: Vec<f64>,
    pub sigma_x2: f64,
    pub estimators: Vec<EstimatorKind>,
    #[serde(default = "default_nu")]
    pub nu: f64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl SweepConfig {
    pub fn from_json_str(s: &str) -> Result<Self, BenchError> {
        let cfg: SweepConfig =
            serde_json::from_str(s).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.n < 1 {
            return fail("n must be >= 1".into());
        }
        if self.l <= self.n {
            return fail(format!("l = {} must exceed n = {}", self.l, self.n));
        }
        if self.trials < 1 {
            return fail("trials must be >= 1".into());
        }
        if self.s_grid.is_empty() {
            return fail("s_grid must be nonempty".into());
        }
        if self.s_grid.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return fail("s_grid values must be finite and > 0".into());
        }
        if !(self.sigma_x2 > 0.0) || !self.sigma_x2.is_finite() {
            return fail("sigma_x2 must be finite and > 0".into());
        }
        if self.estimators.is_empty() {
            return fail("estimators must be nonempty".into());
        }
        if !(self.nu > 0.0) || !self.nu.is_finite() {
            return fail("nu must be finite and > 0".into());
        }
        if self.workers < 1 {
            return fail("workers must be >= 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "n": 8, "l": 40, "trials": 100,
        "s_grid": [0.5, 1.0],
        "sigma_x2": 4.0,
        "estimators": ["SM", "SCM", "Tyler", "R-vdW", "R-t5"],
        "seed": 42
    }"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = SweepConfig::from_json_str(BASE).unwrap();
        assert_eq!(cfg.nu, 5.0);
        assert_eq!(cfg.workers, 1);
        assert_eq!(cfg.estimators.len(), 5);
        assert_eq!(cfg.estimators[3], EstimatorKind::RVdw);
    }

    #[test]
    fn rejects_unknown_keys_and_names() {
        let with_extra = BASE.replace("\"seed\": 42", "\"seed\": 42, \"bogus\": 1");
        assert!(matches!(
            SweepConfig::from_json_str(&with_extra),
            Err(BenchError::Config(_))
        ));
        let bad_name = BASE.replace("\"Tyler\"", "\"tyler\"");
        assert!(SweepConfig::from_json_str(&bad_name).is_err());
    }

    #[test]
    fn rejects_invalid_values() {
        for (from, to) in [
            ("\"l\": 40", "\"l\": 8"),
            ("\"trials\": 100", "\"trials\": 0"),
            ("[0.5, 1.0]", "[]"),
            ("[0.5, 1.0]", "[-0.5]"),
            ("\"sigma_x2\": 4.0", "\"sigma_x2\": 0.0"),
        ] {
            let mutated = BASE.replace(from, to);
            assert!(
                SweepConfig::from_json_str(&mutated).is_err(),
                "accepted {to}"
            );
        }
    }

    #[test]
    fn labels_round_trip() {
        for k in [
            EstimatorKind::Sm,
            EstimatorKind::Scm,
            EstimatorKind::Tyler,
            EstimatorKind::RVdw,
            EstimatorKind::RT5,
        ] {
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.label()));
        }
    }
}
