//! The estimation pipeline: sample mean/SCM baseline, Tyler's joint
//! M-estimator fixed point, rank computation, and the one-step rank-based
//! shape estimator in its fast matrix form and in its O(N⁴) vectorized
//! form. The vectorized form exists only as a cross-check oracle for the
//! fast path and for the timing comparison.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    build_l, inv_sqrt, inverse, ovec, psd_sqrt, unvec, vec, CMatrix, CVector, HermitianMatrix,
    ShapeMatrix,
};
use crate::model::Dataset;
use crate::score::ScoreFunction;

/// Joint estimate of location and shape.
#[derive(Debug, Clone)]
pub struct JointEstimate {
    pub mu_hat: CVector,
    pub v1_hat: ShapeMatrix,
    pub iterations: usize,
    pub converged: bool,
}

/// Residual quadratic forms and unit-normalized residual directions.
#[derive(Debug, Clone)]
pub struct Residuals {
    pub q: Vec<f64>,
    pub u: Vec<CVector>,
}

/// Small Hermitian perturbation with zero (1,1) entry, used to estimate the
/// scalar normalizing the one-step correction.
#[derive(Debug, Clone)]
pub struct PerturbationMatrix {
    h: HermitianMatrix,
}

impl PerturbationMatrix {
    /// Validates [H]₁,₁ = 0 and Hermitian symmetry.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        if h.mat()[(0, 0)].norm() != 0.0 {
            return Err(Error::DomainError(
                "perturbation (1,1) entry must be exactly zero".into(),
            ));
        }
        Ok(Self { h })
    }

    pub fn mat(&self) -> &CMatrix {
        self.h.mat()
    }
}

/// Diagnostics of one fast-path shape update.
#[derive(Debug, Clone)]
pub struct REstimateDiagnostics {
    pub alpha_hat: f64,
    pub w: HermitianMatrix,
    pub zeta: f64,
    pub r_matrix: HermitianMatrix,
    pub z_vec: CVector,
}

/// One-step shape update. The raw update always carries (1,1) entry one;
/// `positive_definite` records whether it stayed inside the PD cone.
#[derive(Debug, Clone)]
pub struct RShapeEstimate {
    pub raw: HermitianMatrix,
    pub positive_definite: bool,
}

impl RShapeEstimate {
    pub fn shape_matrix(&self) -> Option<ShapeMatrix> {
        if self.positive_definite {
            ShapeMatrix::new(self.raw.clone()).ok()
        } else {
            None
        }
    }
}

/// Coordinatewise arithmetic mean of the observations.
pub fn sample_mean(d: &Dataset) -> CVector {
    d.observations
        .iter()
        .fold(CVector::zeros(d.n), |a, z| a + z)
        .unscale(d.len() as f64)
}

/// Sample mean plus (1,1)-normalized sample covariance shape.
pub fn scm_shape(d: &Dataset) -> Result<JointEstimate> {
    if d.len() < 2 {
        return Err(Error::DegenerateData("SCM needs at least 2 observations".into()));
    }
    let mu = sample_mean(d);
    let mut scm = CMatrix::zeros(d.n, d.n);
    for z in &d.observations {
        let e = z - &mu;
        scm += &e * e.adjoint();
    }
    scm.unscale_mut(d.len() as f64);
    let v1_hat = ShapeMatrix::from_scatter(&HermitianMatrix::new_unchecked(scm))?;
    Ok(JointEstimate {
        mu_hat: mu,
        v1_hat,
        iterations: 0,
        converged: true,
    })
}

/// Tyler's joint fixed point for location and shape.
///
/// The location update uses the quadratic forms of the previous (μ, V) pair
/// and the shape update uses the *previous* location, matching the printed
/// recursion rather than a Gauss-Seidel sweep. The shape iterate is
/// renormalized to (1,1) entry one every pass.
pub fn tyler_joint(d: &Dataset, tol: f64, max_iter: usize) -> Result<JointEstimate> {
    let (l, n) = (d.len(), d.n);
    if l <= n {
        return Err(Error::DegenerateData(format!(
            "Tyler fixed point needs L > N (got L = {l}, N = {n})"
        )));
    }
    let mut mu = sample_mean(d);
    let mut v1 = ShapeMatrix::identity(n);
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let v_inv = inverse(v1.hermitian())?;
        let mut q = Vec::with_capacity(l);
        for (i, z) in d.observations.iter().enumerate() {
            let e = z - &mu;
            let ql = (e.adjoint() * v_inv.mat() * &e)[(0, 0)].re;
            if ql < 1e-30 {
                return Err(Error::DegenerateSample { index: i });
            }
            q.push(ql);
        }
        let mut wsum = 0.0;
        let mut mu_next = CVector::zeros(n);
        let mut scatter = CMatrix::zeros(n, n);
        for (z, &ql) in d.observations.iter().zip(&q) {
            let w = ql.sqrt().recip();
            wsum += w;
            mu_next += z.scale(w);
            let e = z - &mu;
            scatter += (&e * e.adjoint()).unscale(ql);
        }
        mu_next.unscale_mut(wsum);
        scatter.scale_mut(n as f64 / l as f64);
        let v1_next = ShapeMatrix::from_scatter(&HermitianMatrix::new_unchecked(scatter))?;
        let rel_mu = (&mu_next - &mu).norm() / mu.norm().max(1e-300);
        let rel_v = (v1_next.mat() - v1.mat()).norm() / v1.mat().norm();
        mu = mu_next;
        v1 = v1_next;
        if rel_mu.max(rel_v) < tol {
            converged = true;
            break;
        }
    }
    Ok(JointEstimate {
        mu_hat: mu,
        v1_hat: v1,
        iterations,
        converged,
    })
}

/// Residual quadratic forms q_l = (z−μ)ᴴ V⁻¹ (z−μ) and unit directions
/// u_l = q_l^{−1/2} V^{−1/2} (z−μ).
pub fn residuals(d: &Dataset, mu: &CVector, v1: &ShapeMatrix) -> Result<Residuals> {
    let s = inv_sqrt(v1.hermitian())?;
    let mut q = Vec::with_capacity(d.len());
    let mut u = Vec::with_capacity(d.len());
    for (i, z) in d.observations.iter().enumerate() {
        let y = s.mat() * (z - mu);
        let ql = y.norm_squared();
        if ql < 1e-30 {
            return Err(Error::DegenerateSample { index: i });
        }
        q.push(ql);
        u.push(y.unscale(ql.sqrt()));
    }
    Ok(Residuals { q, u })
}

/// Ranks (1-based positions in the ascending sort); ties broken by
/// original index order.
pub fn ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut r = vec![0usize; values.len()];
    for (pos, &idx) in order.iter().enumerate() {
        r[idx] = pos + 1;
    }
    r
}

/// The rank-weighted outer-product matrix R = L^{−1/2} Σ K_h(r/(L+1)) u uᴴ
/// and the scalar ζ = (N√L)^{−1} Σ K_h(r/(L+1)).
pub fn r_stat_and_zeta(
    res: &Residuals,
    rk: &[usize],
    k: &ScoreFunction,
) -> Result<(HermitianMatrix, f64)> {
    let l = res.u.len();
    if rk.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: rk.len(),
        });
    }
    let n = res.u[0].len();
    let sqrt_l = (l as f64).sqrt();
    let mut r = CMatrix::zeros(n, n);
    let mut ksum = 0.0;
    for (ul, &rl) in res.u.iter().zip(rk) {
        let kh = k.eval(rl as f64 / (l + 1) as f64)?;
        ksum += kh;
        r += (ul * ul.adjoint()).scale(kh);
    }
    r.unscale_mut(sqrt_l);
    Ok((
        HermitianMatrix::new_unchecked(r),
        ksum / (n as f64 * sqrt_l),
    ))
}

/// The rank-based central sequence at shape V:
/// ovec(V^{−1/2} R V^{−1/2} − ζ V^{−1}).
pub fn central_seq(
    res: &Residuals,
    rk: &[usize],
    k: &ScoreFunction,
    v1: &ShapeMatrix,
) -> Result<CVector> {
    let (r, zeta) = r_stat_and_zeta(res, rk, k)?;
    let s = inv_sqrt(v1.hermitian())?;
    let v_inv = s.mat() * s.mat();
    let m = s.mat() * r.mat() * s.mat() - v_inv.scale(zeta);
    ovec(&m)
}

/// Random Hermitian perturbation with [H]₁,₁ = 0, scaled so
/// ‖H‖_F = 0.01 ‖V‖_F and V + L^{−1/2} H stays positive definite
/// (the scale is halved up to 50 times if needed).
pub fn gen_perturbation(
    v1: &ShapeMatrix,
    l: usize,
    rng: &mut impl Rng,
) -> Result<PerturbationMatrix> {
    let n = v1.dim();
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if i == j {
                h[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
            } else {
                let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
    }
    h[(0, 0)] = Complex64::new(0.0, 0.0);
    let norm = h.norm();
    if norm == 0.0 {
        return Err(Error::PerturbationFailure);
    }
    let mut scale = 0.01 * v1.hermitian().frobenius_norm() / norm;
    let sqrt_l = (l as f64).sqrt();
    for _ in 0..=50 {
        let candidate = h.scale(scale);
        let perturbed =
            HermitianMatrix::new_unchecked(v1.mat() + candidate.unscale(sqrt_l));
        let (vals, _) = perturbed.eig();
        if vals[0] > 0.0 {
            return PerturbationMatrix::new(HermitianMatrix::new_unchecked(candidate));
        }
        scale *= 0.5;
    }
    Err(Error::PerturbationFailure)
}

fn perturbed_shape(v1: &ShapeMatrix, h0: &PerturbationMatrix, l: usize) -> Result<ShapeMatrix> {
    let sqrt_l = (l as f64).sqrt();
    ShapeMatrix::new(HermitianMatrix::new_unchecked(
        v1.mat() + h0.mat().unscale(sqrt_l),
    ))
}

/// The finite-difference scalar normalizing the one-step correction:
/// ratio of the central-sequence shift under the perturbed shape to the
/// closed-form norm ‖ovec(V⁻¹HV⁻¹ − N⁻¹tr(V⁻¹H)V⁻¹)‖.
///
/// The numerator recomputes residuals and ranks from scratch at the
/// perturbed shape (same location).
pub fn alpha_hat(
    d: &Dataset,
    mu: &CVector,
    v1: &ShapeMatrix,
    k: &ScoreFunction,
    h0: &PerturbationMatrix,
) -> Result<f64> {
    let n = v1.dim();
    let res = residuals(d, mu, v1)?;
    let rk = ranks(&res.q);
    let z_base = central_seq(&res, &rk, k, v1)?;

    let vp = perturbed_shape(v1, h0, d.len())?;
    let res_p = residuals(d, mu, &vp)?;
    let rk_p = ranks(&res_p.q);
    let z_pert = central_seq(&res_p, &rk_p, k, &vp)?;

    let num = (&z_pert - &z_base).norm();

    let v_inv = inverse(v1.hermitian())?;
    let vh = v_inv.mat() * h0.mat();
    let tr: Complex64 = (0..n).map(|i| vh[(i, i)]).sum();
    let a = &vh * v_inv.mat() - v_inv.mat().scale(1.0 / n as f64) * tr;
    let den = ovec(&a)?.norm();
    if den < 1e-30 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

/// One-step rank-based shape estimator, fast matrix form, with a caller
/// supplied perturbation (reproducible entry point).
pub fn r_estimator_with_perturbation(
    d: &Dataset,
    prelim: &JointEstimate,
    k: &ScoreFunction,
    h0: &PerturbationMatrix,
) -> Result<(RShapeEstimate, REstimateDiagnostics)> {
    let (l, n) = (d.len(), d.n);
    if l <= n {
        return Err(Error::DegenerateData(format!(
            "one-step update needs L > N (got L = {l}, N = {n})"
        )));
    }
    let v1 = &prelim.v1_hat;
    let res = residuals(d, &prelim.mu_hat, v1)?;
    let rk = ranks(&res.q);
    let (r, zeta) = r_stat_and_zeta(&res, &rk, k)?;

    let sqrt_v = psd_sqrt(v1.hermitian())?;
    let w = HermitianMatrix::new_unchecked(
        (sqrt_v.mat() * r.mat() * sqrt_v.mat()).unscale((l as f64).sqrt()),
    );
    let alpha = alpha_hat(d, &prelim.mu_hat, v1, k, h0)?;

    let s = inv_sqrt(v1.hermitian())?;
    let v_inv = s.mat() * s.mat();
    let z_vec = ovec(&(s.mat() * r.mat() * s.mat() - v_inv.scale(zeta)))?;

    // Boxed update: the correction direction has zero (1,1) entry, so the
    // result keeps [V]₁,₁ = 1; re-pin exactly against round-off.
    let w11 = w.mat()[(0, 0)];
    let mut update = v1.mat() + (w.mat() - v1.mat() * w11).unscale(alpha);
    update[(0, 0)] = Complex64::new(1.0, 0.0);
    let raw = HermitianMatrix::new_unchecked(update);
    let (vals, _) = raw.eig();
    let estimate = RShapeEstimate {
        positive_definite: vals[0] > 0.0,
        raw,
    };
    Ok((
        estimate,
        REstimateDiagnostics {
            alpha_hat: alpha,
            w,
            zeta,
            r_matrix: r,
            z_vec,
        },
    ))
}

/// One-step rank-based shape estimator with a fresh random perturbation.
pub fn r_estimator(
    d: &Dataset,
    prelim: &JointEstimate,
    k: &ScoreFunction,
    rng: &mut impl Rng,
) -> Result<(RShapeEstimate, REstimateDiagnostics)> {
    let h0 = gen_perturbation(&prelim.v1_hat, d.len(), rng)?;
    r_estimator_with_perturbation(d, prelim, k, &h0)
}

// Central sequence through the explicit L matrix; the oracle route.
fn delta_vectorized(
    d: &Dataset,
    mu: &CVector,
    v1: &ShapeMatrix,
    k: &ScoreFunction,
) -> Result<CVector> {
    let res = residuals(d, mu, v1)?;
    let rk = ranks(&res.q);
    let l_mat = build_l(v1)?;
    let l = d.len();
    let mut svec = CVector::zeros(d.n * d.n);
    for (ul, &rl) in res.u.iter().zip(&rk) {
        let kh = k.eval(rl as f64 / (l + 1) as f64)?;
        svec += vec(&(ul * ul.adjoint())).scale(kh);
    }
    Ok((l_mat * svec).unscale((l as f64).sqrt()))
}

/// The O(N⁴) vectorized form of the one-step shape estimator, building P,
/// Π⊥ and L explicitly. This is the test oracle for the fast path; it must
/// never share intermediate quantities with it.
pub fn r_estimator_vectorized(
    d: &Dataset,
    prelim: &JointEstimate,
    k: &ScoreFunction,
    h0: &PerturbationMatrix,
) -> Result<HermitianMatrix> {
    let (l, n) = (d.len(), d.n);
    if l <= n {
        return Err(Error::DegenerateData(format!(
            "one-step update needs L > N (got L = {l}, N = {n})"
        )));
    }
    let v1 = &prelim.v1_hat;
    let l_mat = build_l(v1)?;
    let gram = HermitianMatrix::new_unchecked(&l_mat * l_mat.adjoint());
    let gram_inv = inverse(&gram)?;

    let delta_base = delta_vectorized(d, &prelim.mu_hat, v1, k)?;
    let vp = perturbed_shape(v1, h0, l)?;
    let delta_pert = delta_vectorized(d, &prelim.mu_hat, &vp, k)?;
    let num = (&delta_pert - &delta_base).norm();
    let den = (gram.mat() * ovec(h0.mat())?).norm();
    if den < 1e-30 {
        return Err(Error::ZeroDenominator);
    }
    let alpha = num / den;

    // ovec(V_R) = ovec(V*) + (1/(L α)) [LLᴴ]⁻¹ L Σ K vec(u uᴴ)
    //           = ovec(V*) + (1/(√L α)) [LLᴴ]⁻¹ Δ̃.
    let correction = (gram_inv.mat() * delta_base).unscale((l as f64).sqrt() * alpha);
    let ov = ovec(v1.mat())? + correction;
    let mut full = CVector::zeros(n * n);
    full[0] = Complex64::new(1.0, 0.0);
    for i in 0..n * n - 1 {
        full[i + 1] = ov[i];
    }
    Ok(HermitianMatrix::new_unchecked(unvec(&full, n)?))
}
