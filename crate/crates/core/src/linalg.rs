//! Complex dense linear-algebra primitives: Hermitian square roots and
//! inverses via eigendecomposition, column-major vectorization, and the
//! structured selector/projector matrices used by the vectorized estimator
//! path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Hermitian matrix with validated symmetry and finite entries.
///
/// Construction symmetrizes against round-off, so `mat()` is exactly equal
/// to its own adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry (relative Frobenius asymmetry <= 1e-12)
    /// and finiteness, then symmetrizes exactly.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let asym = (&m - m.adjoint()).norm() / m.norm().max(1.0);
        if asym > 1e-12 {
            return Err(Error::NotHermitian { asym });
        }
        Ok(Self::new_unchecked(m))
    }

    /// Symmetrizes without the asymmetry check. For internal use where the
    /// input is Hermitian by construction up to round-off.
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        let mut mat = (&m + m.adjoint()).scale(0.5);
        for i in 0..mat.nrows() {
            mat[(i, i)] = Complex64::new(mat[(i, i)].re, 0.0);
        }
        Self { mat }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    /// Eigendecomposition; eigenvalues ascending with matching eigenvectors.
    pub fn eig(&self) -> (DVector<f64>, CMatrix) {
        let se = nalgebra::SymmetricEigen::new(self.mat.clone());
        let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let vals = DVector::from_iterator(idx.len(), idx.iter().map(|&i| se.eigenvalues[i]));
        let vecs = CMatrix::from_columns(
            &idx.iter()
                .map(|&i| se.eigenvectors.column(i).into_owned())
                .collect::<Vec<_>>(),
        );
        (vals, vecs)
    }

    /// Applies `f` to every eigenvalue and reconstructs U f(Λ) Uᴴ.
    fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Self {
        let (vals, vecs) = self.eig();
        let scaled = CMatrix::from_columns(
            &(0..vals.len())
                .map(|i| vecs.column(i).map(|z| z * f(vals[i])))
                .collect::<Vec<_>>(),
        );
        Self::new_unchecked(scaled * vecs.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }
}

/// Hermitian PSD square root. Eigenvalues in `[-1e-10*spec_norm, 0)` are
/// clamped to zero so Monte Carlo round-off does not abort runs.
pub fn psd_sqrt(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (vals, _) = h.eig();
    let spec = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let min_eig = vals[0];
    if min_eig < -1e-10 * spec {
        return Err(Error::NotPositiveSemidefinite { min_eig });
    }
    Ok(h.map_eigenvalues(|v| v.max(0.0).sqrt()))
}

/// Inverse of a Hermitian positive definite matrix.
pub fn inverse(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (vals, _) = h.eig();
    let spec = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let min_eig = vals[0];
    if min_eig <= 1e-14 * spec {
        return Err(Error::SingularMatrix { min_eig });
    }
    Ok(h.map_eigenvalues(|v| 1.0 / v))
}

/// Inverse Hermitian PD square root, from a single eigendecomposition.
pub fn inv_sqrt(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (vals, _) = h.eig();
    let spec = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let min_eig = vals[0];
    if min_eig <= 1e-14 * spec {
        return Err(Error::SingularMatrix { min_eig });
    }
    Ok(h.map_eigenvalues(|v| 1.0 / v.sqrt()))
}

/// Hermitian positive definite matrix with its (1,1) entry pinned to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeMatrix {
    inner: HermitianMatrix,
}

impl ShapeMatrix {
    /// Accepts a Hermitian PD matrix whose (1,1) entry is already ~1 and
    /// pins it to exactly one.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let (vals, _) = h.eig();
        if vals[0] <= 0.0 {
            return Err(Error::NotPositiveSemidefinite { min_eig: vals[0] });
        }
        let top = h.mat()[(0, 0)];
        if (top - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(Error::DomainError(format!(
                "(1,1) entry {top} is not close to one; use from_scatter to normalize"
            )));
        }
        let mut m = h.into_mat();
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            inner: HermitianMatrix::new_unchecked(m),
        })
    }

    /// Normalizes a scatter matrix by its (1,1) entry.
    pub fn from_scatter(h: &HermitianMatrix) -> Result<Self> {
        let top = h.mat()[(0, 0)].re;
        if top <= 1e-14 {
            return Err(Error::DegenerateData(format!(
                "scatter (1,1) entry {top:e} too small to normalize"
            )));
        }
        let mut m = h.mat().unscale(top);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        let (vals, _) = HermitianMatrix::new_unchecked(m.clone()).eig();
        if vals[0] <= 0.0 {
            return Err(Error::NotPositiveSemidefinite { min_eig: vals[0] });
        }
        Ok(Self {
            inner: HermitianMatrix::new_unchecked(m),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: HermitianMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.inner
    }

    pub fn mat(&self) -> &CMatrix {
        self.inner.mat()
    }
}

/// Column-major vectorization (matches vec(AXB) = (Bᵀ⊗A)vec(X)).
pub fn vec(a: &CMatrix) -> CVector {
    CVector::from_column_slice(a.as_slice())
}

/// vec with its first element removed; length N²−1 for an N×N input.
pub fn ovec(a: &CMatrix) -> Result<CVector> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let v = a.as_slice();
    Ok(CVector::from_column_slice(&v[1..]))
}

/// Inverse of `vec`: reshapes a length-N² vector into an N×N matrix.
pub fn unvec(v: &CVector, n: usize) -> Result<CMatrix> {
    if v.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: v.len(),
        });
    }
    Ok(CMatrix::from_column_slice(n, n, v.as_slice()))
}

/// The selector P (rows e₂..e_{N²} of I_{N²}) and projector
/// Π⊥ = I − N⁻¹ vec(I)vec(I)ᵀ, both real.
#[derive(Debug, Clone)]
pub struct StructuredSelector {
    pub n: usize,
    pub p: DMatrix<f64>,
    pub projector: DMatrix<f64>,
}

/// Builds P and Π⊥ for dimension N.
pub fn build_selector(n: usize) -> StructuredSelector {
    let n2 = n * n;
    let mut p = DMatrix::<f64>::zeros(n2 - 1, n2);
    for i in 0..n2 - 1 {
        p[(i, i + 1)] = 1.0;
    }
    let mut vec_i = DVector::<f64>::zeros(n2);
    for i in 0..n {
        vec_i[i * n + i] = 1.0;
    }
    let projector = DMatrix::<f64>::identity(n2, n2) - (&vec_i * vec_i.transpose()).unscale(n as f64);
    StructuredSelector { n, p, projector }
}

fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// L_{V₁} = P (V₁^{−⊤/2} ⊗ V₁^{−1/2}) Π⊥, the (N²−1)×N² matrix of the
/// vectorized oracle path. Never used by the fast estimator.
pub fn build_l(v1: &ShapeMatrix) -> Result<CMatrix> {
    let n = v1.dim();
    let sel = build_selector(n);
    let vis = inv_sqrt(v1.hermitian())?;
    let kron = vis.mat().transpose().kronecker(vis.mat());
    Ok(complexify(&sel.p) * kron * complexify(&sel.projector))
}
