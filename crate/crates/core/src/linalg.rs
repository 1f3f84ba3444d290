//! Small Hermitian-matrix helpers shared by the state, energetics and
//! distinguishability code.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

pub fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn is_hermitian(m: &DMatrix<Complex64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending;
/// returns (eigenvalues, eigenvectors as columns in the same order).
/// Ties inside degenerate blocks are broken by the solver's output order,
/// which is deterministic for a given input.
pub fn hermitian_eigen_ascending(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Check the density-matrix axioms: square, Hermitian, unit trace,
/// eigenvalues above the negativity floor.
pub fn validate_density_matrix(rho: &DMatrix<Complex64>) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::InvalidState(format!(
            "density matrix must be square, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if !is_hermitian(rho, HERMITICITY_TOL) {
        return Err(Error::InvalidState("density matrix is not Hermitian".into()));
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidState(format!(
            "density matrix trace must be 1, got {tr}"
        )));
    }
    let min_eig = hermitian_eigenvalues(rho)
        .first()
        .copied()
        .unwrap_or(f64::NAN);
    if !(min_eig >= EIGENVALUE_FLOOR) {
        return Err(Error::InvalidState(format!(
            "density matrix has negative eigenvalue {min_eig}"
        )));
    }
    Ok(())
}
