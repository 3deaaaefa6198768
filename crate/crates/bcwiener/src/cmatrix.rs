//! Dense complex matrices and the small set of factorization helpers the
//! rest of the crate leans on.
//!
//! Everything is desk scale (dimensions in the tens), so exact dense
//! routines (LU, SVD, Hermitian eigensolves) are used throughout instead of
//! iterative methods.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row/column indexed as `m[(r, c)]`.
pub type CMatrix = DMatrix<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Frobenius norm.
pub fn frob_norm(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && frob_norm(&(m - m.adjoint())) <= tol * (1.0 + frob_norm(m))
}

/// Smallest eigenvalue of the Hermitian part `(m + m*)/2`.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Hermitian PSD test: Hermitian within `herm_tol` (relative) and smallest
/// eigenvalue at least `-eig_tol`.
pub fn is_hermitian_psd(m: &CMatrix, herm_tol: f64, eig_tol: f64) -> bool {
    is_hermitian(m, herm_tol) && min_hermitian_eigenvalue(m) >= -eig_tol
}

/// LU solve of `a x = b`; `None` when `a` is singular to working precision.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    a.clone().lu().solve(b)
}

pub fn try_inverse(a: &CMatrix) -> Option<CMatrix> {
    a.clone().try_inverse()
}

/// Eigenvalues of a general square complex matrix (Schur diagonal).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = a
        .clone()
        .try_schur(1e-14, 100_000)
        .ok_or(Error::SchurFailed)?;
    let (_, t) = schur.unpack();
    Ok((0..a.nrows()).map(|i| t[(i, i)]).collect())
}

pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .into_iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max))
}

/// Hermitian PD square root via eigendecomposition.
///
/// Input is symmetrized first; eigenvalues are clamped at zero so a PSD
/// matrix with tiny negative rounding noise still has a root.
pub fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    let n = m.nrows();
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex64::new(eig.eigenvalues[i].max(0.0).sqrt(), 0.0);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Right polar correction of an invertible matrix `w`: returns the unitary
/// `u` for which `w·u` is Hermitian positive definite.
///
/// With `h = (w w*)^{1/2}` and `w = h v`, the correction is `u = v*`.
pub fn right_polar_correction(w: &CMatrix) -> Result<CMatrix> {
    let h = hermitian_sqrt(&(w * w.adjoint()));
    let v = solve(&h, w).ok_or_else(|| {
        Error::InvalidParameter("polar correction of a singular matrix".into())
    })?;
    Ok(v.adjoint())
}

/// Unitarity defect `‖u u* - I‖_F`.
pub fn unitary_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    frob_norm(&(u * u.adjoint() - CMatrix::identity(n, n)))
}

/// `y m y⁻¹`; fails with [`Error::SingularY`] when `y` has no inverse.
pub fn similarity_conjugate(m: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    if !y.is_square() || y.nrows() != m.nrows() || !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "similarity conjugation needs square matrices of equal size, got {}x{} and {}x{}",
            m.nrows(),
            m.ncols(),
            y.nrows(),
            y.ncols()
        )));
    }
    let y_inv = try_inverse(y).ok_or(Error::SingularY)?;
    Ok(y * m * y_inv)
}
