//! Rank score functions on (0,1) and the Gamma/Fisher quantile machinery
//! they require.
//!
//! Quantiles are obtained by bracketed bisection on the regularized
//! incomplete gamma/beta functions, with a CDF-residual tolerance of 1e-12
//! and a hard iteration cap of 200. Bisection is deliberately boring: it is
//! robust in the extreme tails reached at r = L (u = L/(L+1)).

use statrs::function::beta::beta_reg;
use statrs::function::gamma::gamma_lr;

use crate::error::{Error, Result};

const CDF_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

fn check_unit_open(u: f64) -> Result<()> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::DomainError(format!("u = {u} outside (0,1)")));
    }
    Ok(())
}

/// Quantile of the Gamma(shape, 1) distribution: x with P(shape, x) = u.
pub fn gamma_quantile(shape: f64, u: f64) -> Result<f64> {
    if shape <= 0.0 {
        return Err(Error::DomainError(format!("shape = {shape} must be > 0")));
    }
    check_unit_open(u)?;
    let mut hi = shape + 1.0;
    while gamma_lr(shape, hi) < u {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::DomainError("gamma quantile bracket overflow".into()));
        }
    }
    let mut lo = 0.0f64;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        x = 0.5 * (lo + hi);
        let f = gamma_lr(shape, x);
        if (f - u).abs() <= CDF_TOL {
            break;
        }
        if f < u {
            lo = x;
        } else {
            hi = x;
        }
    }
    Ok(x)
}

/// Quantile of the Fisher F(d1, d2) distribution, via the regularized
/// incomplete beta relation F(x) = I_{d1 x/(d1 x + d2)}(d1/2, d2/2).
pub fn f_quantile(d1: usize, d2: f64, u: f64) -> Result<f64> {
    if d1 < 1 || d2 <= 0.0 {
        return Err(Error::DomainError(format!(
            "degrees of freedom d1 = {d1}, d2 = {d2} invalid"
        )));
    }
    check_unit_open(u)?;
    let a = d1 as f64 / 2.0;
    let b = d2 / 2.0;
    // Solve I_y(a, b) = u for y in (0,1), then map back to x.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut y = 0.5;
    for _ in 0..MAX_ITER {
        y = 0.5 * (lo + hi);
        let f = beta_reg(a, b, y);
        if (f - u).abs() <= CDF_TOL {
            break;
        }
        if f < u {
            lo = y;
        } else {
            hi = y;
        }
    }
    if y >= 1.0 {
        return Err(Error::DomainError("f quantile overflow".into()));
    }
    Ok(d2 * y / (d1 as f64 * (1.0 - y)))
}

/// Fisher F(d1, d2) CDF, exposed for round-trip checks.
pub fn f_cdf(d1: usize, d2: f64, x: f64) -> f64 {
    let d1f = d1 as f64;
    beta_reg(d1f / 2.0, d2 / 2.0, d1f * x / (d1f * x + d2))
}

/// van der Waerden score: the Gamma(N,1) quantile of u.
pub fn k_vdw(u: f64, n: usize) -> Result<f64> {
    gamma_quantile(n as f64, u)
}

/// t-ν score: N(2N+ν)F⁻¹/(ν + 2N F⁻¹) with F⁻¹ the Fisher(2N, ν) quantile.
pub fn k_tnu(u: f64, n: usize, nu: f64) -> Result<f64> {
    if nu <= 0.0 {
        return Err(Error::DomainError(format!("nu = {nu} must be > 0")));
    }
    let finv = f_quantile(2 * n, nu, u)?;
    let nf = n as f64;
    Ok(nf * (2.0 * nf + nu) * finv / (nu + 2.0 * nf * finv))
}

/// Score function K_h mapping (0,1) to the positive reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreFunction {
    /// van der Waerden (Gaussian-type) score for data dimension N.
    VanDerWaerden { n: usize },
    /// t-ν score for data dimension N and tuning parameter ν.
    TNu { n: usize, nu: f64 },
    /// Constant score, used as a diagnostic (reduces R to a plain mean of
    /// outer products).
    Constant(f64),
}

impl ScoreFunction {
    pub fn eval(&self, u: f64) -> Result<f64> {
        check_unit_open(u)?;
        match *self {
            ScoreFunction::VanDerWaerden { n } => k_vdw(u, n),
            ScoreFunction::TNu { n, nu } => k_tnu(u, n, nu),
            ScoreFunction::Constant(c) => Ok(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_quantile_exponential_closed_forms() {
        let x = gamma_quantile(1.0, 0.5).unwrap();
        assert!((x - std::f64::consts::LN_2).abs() < 1e-10);
        let x = gamma_quantile(1.0, 1.0 - (-1.0f64).exp()).unwrap();
        assert!((x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gamma_quantile_round_trip_shape8() {
        let x = gamma_quantile(8.0, 0.5).unwrap();
        assert!((gamma_lr(8.0, x) - 0.5).abs() <= 1e-12);
    }

    // Independent oracle: Simpson quadrature of the Gamma(8,1) pdf.
    #[test]
    fn gamma_quantile_vs_quadrature() {
        let shape = 8.0;
        let x = gamma_quantile(shape, 0.5).unwrap();
        let ln_gamma = statrs::function::gamma::ln_gamma(shape);
        let pdf = |t: f64| ((shape - 1.0) * t.ln() - t - ln_gamma).exp();
        let m = 20000;
        let h = x / m as f64;
        let mut acc = pdf(1e-300) + pdf(x);
        for i in 1..m {
            let t = i as f64 * h;
            acc += pdf(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let cdf = acc * h / 3.0;
        assert!((cdf - 0.5).abs() < 1e-8, "quadrature CDF {cdf}");
    }

    #[test]
    fn gamma_quantile_domain_errors() {
        assert!(gamma_quantile(1.0, 0.0).is_err());
        assert!(gamma_quantile(1.0, 1.0).is_err());
        assert!(gamma_quantile(-1.0, 0.5).is_err());
    }

    #[test]
    fn f_quantile_round_trip() {
        for &(d1, d2, u) in &[
            (16usize, 5.0, 0.5),
            (16, 5.0, 1e-6),
            (16, 5.0, 1.0 - 1e-6),
            (2, 0.7, 0.25),
            (7, 31.0, 0.9),
        ] {
            let x = f_quantile(d1, d2, u).unwrap();
            assert!(
                (f_cdf(d1, d2, x) - u).abs() < 1e-10,
                "round trip failed at ({d1},{d2},{u})"
            );
        }
    }

    #[test]
    fn f_quantile_equal_dof_median_is_one() {
        for d in [3usize, 8, 20] {
            let x = f_quantile(d, d as f64, 0.5).unwrap();
            assert!((x - 1.0).abs() < 1e-9, "median {x} for d={d}");
        }
    }

    #[test]
    fn f_quantile_small_u_monotone_to_zero() {
        let mut prev = f_quantile(16, 5.0, 1e-2).unwrap();
        for &u in &[1e-3, 1e-4, 1e-5, 1e-6] {
            let x = f_quantile(16, 5.0, u).unwrap();
            assert!(x < prev && x > 0.0);
            prev = x;
        }
    }

    #[test]
    fn k_vdw_monotone_and_mean() {
        let n = 8;
        let mut prev = 0.0;
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let v = k_vdw(u, n).unwrap();
            assert!(v > prev);
            prev = v;
        }
        // Average of quantiles at u = r/(L+1) approximates E Gamma(8,1) = 8.
        let l = 10_000;
        let mean: f64 = (1..=l)
            .map(|r| k_vdw(r as f64 / (l + 1) as f64, n).unwrap())
            .sum::<f64>()
            / l as f64;
        assert!((mean - 8.0).abs() / 8.0 < 0.01, "mean {mean}");
    }

    #[test]
    fn k_tnu_bounded_and_vanishing() {
        let (n, nu) = (8usize, 5.0);
        let bound = n as f64 * (2.0 * n as f64 + nu) / (2.0 * n as f64);
        for i in 1..200 {
            let u = i as f64 / 200.0;
            let v = k_tnu(u, n, nu).unwrap();
            assert!(v > 0.0 && v < bound);
        }
        // Vanishes as u → 0, but only polynomially (the F(2N, ν) quantile
        // behaves like u^{1/N} near zero).
        let mut prev = k_tnu(1e-2, n, nu).unwrap();
        for &u in &[1e-4, 1e-6, 1e-8, 1e-10] {
            let v = k_tnu(u, n, nu).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
        assert!(prev < 0.5, "tail value {prev}");
        // Composition check against the f_quantile value at u = 0.5.
        let finv = f_quantile(2 * n, nu, 0.5).unwrap();
        let expect = n as f64 * (2.0 * n as f64 + nu) * finv / (nu + 2.0 * n as f64 * finv);
        assert_eq!(k_tnu(0.5, n, nu).unwrap(), expect);
    }
}
