//! CES data generation under the Generalized Gaussian density generator,
//! its ψ function and Fisher-type moments, and the closed-form
//! semiparametric Cramér-Rao bounds for location and shape.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::{build_l, psd_sqrt, CMatrix, CVector, HermitianMatrix, ShapeMatrix};

/// Parameters of the Generalized Gaussian density generator
/// h(t) ∝ exp(−t^s / b) in data dimension N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGParams {
    pub s: f64,
    pub b: f64,
    pub n: usize,
}

impl GGParams {
    pub fn new(s: f64, b: f64, n: usize) -> Result<Self> {
        if s <= 0.0 || b <= 0.0 || n == 0 {
            return Err(Error::DomainError(format!(
                "GG parameters must be positive: s = {s}, b = {b}, n = {n}"
            )));
        }
        Ok(Self { s, b, n })
    }
}

/// Simulation scenario: true location, scatter/shape, and GG generator.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub n: usize,
    pub mu0: CVector,
    pub sigma0: HermitianMatrix,
    pub v10: ShapeMatrix,
    pub gg: GGParams,
    pub sigma_x2: f64,
}

/// A set of L i.i.d. observations of dimension N.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub n: usize,
    pub observations: Vec<CVector>,
}

impl Dataset {
    pub fn new(n: usize, observations: Vec<CVector>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::DegenerateData("empty dataset".into()));
        }
        for z in &observations {
            if z.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: z.len(),
                });
            }
            if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::NonFiniteEntry);
            }
        }
        Ok(Self { n, observations })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

/// Fisher-type moments of the modular variate under the GG generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherMoments {
    /// E{Q ψ(Q)²}
    pub e_q_psi2: f64,
    /// E{Q² ψ(Q)²}
    pub e_q2_psi2: f64,
}

/// Scale b such that E{Q} = N σ²_X: b = [σ²_X N Γ(N/s)/Γ((N+1)/s)]^s.
pub fn gg_scale_b(s: f64, n: usize, sigma_x2: f64) -> Result<f64> {
    if s <= 0.0 || n == 0 || sigma_x2 <= 0.0 {
        return Err(Error::DomainError(format!(
            "gg_scale_b inputs must be positive: s = {s}, n = {n}, sigma_x2 = {sigma_x2}"
        )));
    }
    let nf = n as f64;
    let ln_b = s * ((sigma_x2 * nf).ln() + ln_gamma(nf / s) - ln_gamma((nf + 1.0) / s));
    Ok(ln_b.exp())
}

/// Draws a vector uniformly distributed on the complex unit N-sphere.
pub fn sample_unit_sphere(n: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-150 {
            return v.unscale(norm);
        }
    }
}

/// Draws the 2nd-order modular variate Q via T ~ Gamma(N/s, 1),
/// Q = (bT)^{1/s}; matches the density ∝ q^{N−1} exp(−q^s/b).
pub fn sample_gg_q(gg: &GGParams, rng: &mut impl Rng) -> f64 {
    let gamma = Gamma::new(gg.n as f64 / gg.s, 1.0).expect("valid GGParams");
    let t: f64 = gamma.sample(rng);
    (gg.b * t).powf(1.0 / gg.s)
}

/// Draws L observations z_l = μ₀ + √Q_l Σ₀^{1/2} u_l.
pub fn sample_ces(l: usize, scenario: &Scenario, rng: &mut impl Rng) -> Result<Dataset> {
    let sqrt_sigma = psd_sqrt(&scenario.sigma0)?;
    let observations = (0..l)
        .map(|_| {
            let q = sample_gg_q(&scenario.gg, rng);
            let u = sample_unit_sphere(scenario.n, rng);
            &scenario.mu0 + (sqrt_sigma.mat() * u).scale(q.sqrt())
        })
        .collect();
    Dataset::new(scenario.n, observations)
}

// Test hook: degenerate draw with every Q forced to a fixed value.
#[cfg(test)]
pub(crate) fn sample_ces_fixed_q(
    l: usize,
    scenario: &Scenario,
    q: f64,
    rng: &mut impl Rng,
) -> Result<Dataset> {
    let sqrt_sigma = psd_sqrt(&scenario.sigma0)?;
    let observations = (0..l)
        .map(|_| {
            let u = sample_unit_sphere(scenario.n, rng);
            &scenario.mu0 + (sqrt_sigma.mat() * u).scale(q.sqrt())
        })
        .collect();
    Dataset::new(scenario.n, observations)
}

/// ψ(t) = d ln h(t)/dt = −(s/b) t^{s−1} for the GG generator.
pub fn gg_psi(t: f64, gg: &GGParams) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::DomainError(format!("gg_psi requires t > 0, got {t}")));
    }
    Ok(-(gg.s / gg.b) * t.powf(gg.s - 1.0))
}

/// Closed-form Fisher-type moments (from Q^s/b ~ Gamma(N/s, 1)):
/// E{Qψ²} = s² b^{−1/s} Γ((N+2s−1)/s)/Γ(N/s), E{Q²ψ²} = N(N+s).
pub fn gg_fisher_moments(gg: &GGParams) -> FisherMoments {
    let (s, b, nf) = (gg.s, gg.b, gg.n as f64);
    let e_q_psi2 =
        s * s * (-b.ln() / s + ln_gamma((nf + 2.0 * s - 1.0) / s) - ln_gamma(nf / s)).exp();
    let e_q2_psi2 = nf * (nf + s);
    FisherMoments { e_q_psi2, e_q2_psi2 }
}

/// SCRB for the location: (N / E{Qψ²}) blockdiag(V₁, V₁*), size 2N×2N.
pub fn scrb_location(v1: &ShapeMatrix, m: &FisherMoments) -> HermitianMatrix {
    let n = v1.dim();
    let scale = n as f64 / m.e_q_psi2;
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = v1.mat()[(i, j)];
            out[(i, j)] = v * scale;
            out[(n + i, n + j)] = v.conj() * scale;
        }
    }
    HermitianMatrix::new_unchecked(out)
}

/// SCRB for the shape: (N(N+1)/E{Q²ψ²}) [L_{V₁} L_{V₁}ᴴ]^{−1},
/// size (N²−1)×(N²−1). Computed via the explicit L matrix.
pub fn scrb_shape(v1: &ShapeMatrix, m: &FisherMoments) -> Result<HermitianMatrix> {
    let n = v1.dim() as f64;
    let l = build_l(v1)?;
    let gram = HermitianMatrix::new_unchecked(&l * l.adjoint());
    let inv = crate::linalg::inverse(&gram)?;
    Ok(HermitianMatrix::new_unchecked(
        inv.mat().scale(n * (n + 1.0) / m.e_q2_psi2),
    ))
}

/// Toeplitz-Hermitian scenario generalizing the N = 8 benchmark setup:
/// first column of Σ₀ is [1, ρ, …, ρ^{N−1}] with ρ = 0.8 e^{i2π/5},
/// [μ₀]_n = 0.5 e^{iπ(n−1)/7}, σ²_X fixing the scale b.
pub fn toeplitz_scenario(n: usize, s: f64, sigma_x2: f64) -> Result<Scenario> {
    let rho = Complex64::from_polar(0.8, 2.0 * std::f64::consts::PI / 5.0);
    let mut sigma = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let p = rho.powu(i.abs_diff(j) as u32);
            sigma[(i, j)] = if i >= j { p } else { p.conj() };
        }
    }
    let sigma0 = HermitianMatrix::new(sigma)?;
    let v10 = ShapeMatrix::from_scatter(&sigma0)?;
    let mu0 = CVector::from_fn(n, |k, _| {
        Complex64::from_polar(0.5, std::f64::consts::PI * k as f64 / 7.0)
    });
    let b = gg_scale_b(s, n, sigma_x2)?;
    Ok(Scenario {
        n,
        mu0,
        sigma0,
        v10,
        gg: GGParams::new(s, b, n)?,
        sigma_x2,
    })
}

/// The benchmark scenario: N = 8, σ²_X = 4.
pub fn default_scenario(s: f64) -> Result<Scenario> {
    toeplitz_scenario(8, s, 4.0)
}

/// Density of the modular variate Q (test oracle):
/// p(q) = s q^{N−1} exp(−q^s/b) / (b^{N/s} Γ(N/s)).
pub fn gg_q_pdf(q: f64, gg: &GGParams) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let (s, b, nf) = (gg.s, gg.b, gg.n as f64);
    (s.ln() + (nf - 1.0) * q.ln() - q.powf(s) / b - (nf / s) * b.ln() - ln_gamma(nf / s)).exp()
}
