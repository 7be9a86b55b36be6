//! Random matrix generators shared by unit, integration, and acceptance
//! tests. Not part of the estimation API.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{CMatrix, HermitianMatrix, ShapeMatrix};

pub fn random_complex_matrix(n: usize, m: usize, rng: &mut impl Rng) -> CMatrix {
    DMatrix::from_fn(n, m, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    })
}

/// Random Hermitian PD matrix A Aᴴ + 0.1 I.
pub fn random_pd(n: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let a = random_complex_matrix(n, n, rng);
    HermitianMatrix::new(&a * a.adjoint() + CMatrix::identity(n, n).scale(0.1)).unwrap()
}

/// Random shape matrix: PD with (1,1) entry pinned to one.
pub fn random_shape(n: usize, rng: &mut impl Rng) -> ShapeMatrix {
    ShapeMatrix::from_scatter(&random_pd(n, rng)).unwrap()
}
