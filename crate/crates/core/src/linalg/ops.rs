use num_complex::Complex64 as C64;

use super::{decomp, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Hilbert–Schmidt inner product `Tr{a^dagger b}`, antilinear in `a`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::Dimension(format!(
            "hs_inner needs equal square shapes, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    // Tr{a^dagger b} = sum_ij conj(a_ij) b_ij
    Ok(a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Kronecker product; entry `((ia, ib), (ja, jb))` is `a[ia, ja] * b[ib, jb]`
/// with `a` on the leading index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Trace over the trailing `n - n_a` qubits of a `2^n x 2^n` operator.
pub fn partial_trace(m: &ComplexMatrix, n: usize, n_a: usize) -> Result<ComplexMatrix> {
    if n_a == 0 || n_a > n {
        return Err(Error::Dimension(format!(
            "subsystem size {n_a} outside 1..={n}"
        )));
    }
    let dim = 1usize << n;
    if m.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "{}x{} matrix is not an operator on {n} qubits",
            m.rows(),
            m.cols()
        )));
    }
    let da = 1usize << n_a;
    let db = dim / da;
    Ok(ComplexMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
    }))
}

pub fn is_hermitian(m: &ComplexMatrix, tol: Tolerance) -> bool {
    if !m.is_square() {
        return false;
    }
    let bound = tol.bound(m.max_abs());
    let d = m.rows();
    (0..d).all(|i| (i..d).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= bound))
}

pub fn is_unitary(m: &ComplexMatrix, tol: Tolerance) -> bool {
    m.is_square() && unitarity_defect(m) <= tol.bound(1.0)
}

/// `max |m^dagger m - I|`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    m.adjoint()
        .matmul(m)
        .max_abs_diff(&ComplexMatrix::identity(m.rows()))
}

/// Smallest eigenvalue of the hermitian part of `m`.
pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    let (values, _) = decomp::hermitian_eigen(m);
    values.first().copied().unwrap_or(0.0)
}

/// Hermitian, unit trace and positive semidefinite, each within `tol`.
pub fn is_density(m: &ComplexMatrix, tol: Tolerance) -> bool {
    if !is_hermitian(m, tol) {
        return false;
    }
    let tr = m.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > tol.bound(1.0) {
        return false;
    }
    min_eigenvalue(m) >= -tol.atol
}
