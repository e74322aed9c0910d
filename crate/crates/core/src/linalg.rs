//! Small dense helpers shared by the transform modules.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise distance between two matrices of equal shape.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Rank threshold `1e-9 · n · max|entry|` used throughout.
pub fn default_rank_tol(m: &CMatrix) -> f64 {
    1e-9 * m.nrows().max(m.ncols()) as f64 * max_abs(m)
}

/// Number of singular values above `tol`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// Real matrix promoted to complex.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `‖P·Q − I‖_max`.
pub fn identity_residual(p: &CMatrix, q: &CMatrix) -> f64 {
    let prod = p * q;
    max_abs_diff(&prod, &CMatrix::identity(prod.nrows(), prod.ncols()))
}
