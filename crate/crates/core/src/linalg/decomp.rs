//! Bridges to faer's dense decompositions. Everything here converts to and
//! from `ComplexMatrix`; callers never see faer types.

use faer::{Mat, MatRef, Side};
use num_complex::Complex64 as C64;

use super::{ops, ComplexMatrix, Tolerance};
use crate::{Error, Result};

fn to_faer(m: &ComplexMatrix) -> Mat<C64> {
    Mat::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigen-decomposition of the hermitian part `(m + m^dagger)/2`.
/// Eigenvalues ascend; eigenvectors are the matching columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    assert!(m.is_square(), "hermitian_eigen of a non-square matrix");
    let h = (m + &m.adjoint()).scale_real(0.5);
    let eig = to_faer(&h)
        .self_adjoint_eigen(Side::Lower)
        .expect("hermitian eigensolver converges on finite input");
    let s = eig.S().column_vector();
    let values = (0..m.rows()).map(|i| s[i].re).collect();
    (values, from_faer(eig.U()))
}

/// Eigenvalues of a unitary matrix. Order is unspecified.
pub fn unitary_eigenvalues(u: &ComplexMatrix) -> Result<Vec<C64>> {
    if !ops::is_unitary(u, Tolerance::default()) {
        return Err(Error::Precondition(format!(
            "unitary_eigenvalues: matrix is not unitary (defect {:.3e})",
            if u.is_square() {
                ops::unitarity_defect(u)
            } else {
                f64::INFINITY
            }
        )));
    }
    to_faer(u)
        .eigenvalues()
        .map_err(|e| Error::Internal(format!("eigensolver failed: {e:?}")))
}

/// Thin singular value decomposition with singular values sorted descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_adjoint: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let dec = to_faer(m)
        .thin_svd()
        .expect("svd converges on finite input");
    let s = dec.S().column_vector();
    Svd {
        u: from_faer(dec.U()),
        singular_values: (0..s.nrows()).map(|i| s[i].re).collect(),
        v_adjoint: from_faer(dec.V()).adjoint(),
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s = to_faer(m)
        .singular_values()
        .expect("svd converges on finite input");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Householder QR of a square matrix, returned as `(Q, R)`.
pub fn qr(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let dec = to_faer(m).qr();
    (from_faer(dec.compute_Q().as_ref()), from_faer(dec.R()))
}
