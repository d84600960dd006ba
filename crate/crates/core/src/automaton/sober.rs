use crate::linalg::{self, kron, leading_phase, svd, ComplexMatrix, Tolerance};
use crate::{Error, QuantumAutomaton, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Normalization {
    /// Both factors unit trace.
    Density,
    /// Both factors unitary, `a`'s first nonzero entry real positive.
    Unitary,
    /// Equal Frobenius norms.
    Balanced,
}

/// Splits `x` on `n` qubits as `a ⊗ b` with `a` on the leading `n_a` qubits,
/// when such a split exists.
///
/// The test is rank one of the rearranged matrix
/// `R[(i1 j1), (i2 j2)] = x[(i1 i2), (j1 j2)]`: the ratio of its second to
/// first singular value must not exceed `tol.atol`. Density inputs come back
/// with unit-trace factors and unitary inputs with unitary factors.
pub fn factor_product(
    x: &ComplexMatrix,
    n: usize,
    n_a: usize,
    tol: Tolerance,
) -> Result<Option<(ComplexMatrix, ComplexMatrix)>> {
    let mode = if linalg::is_density(x, tol) {
        Normalization::Density
    } else if linalg::is_unitary(x, tol) {
        Normalization::Unitary
    } else {
        Normalization::Balanced
    };
    factor_with(x, n, n_a, tol, mode)
}

fn factor_with(
    x: &ComplexMatrix,
    n: usize,
    n_a: usize,
    tol: Tolerance,
    mode: Normalization,
) -> Result<Option<(ComplexMatrix, ComplexMatrix)>> {
    if n_a == 0 || n_a >= n {
        return Err(Error::Dimension(format!("cut {n_a} must lie in 1..{n}")));
    }
    let dim = 1usize << n;
    if x.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "{:?} matrix is not an operator on {n} qubits",
            x.shape()
        )));
    }
    let da = 1usize << n_a;
    let db = dim / da;
    let rearranged = ComplexMatrix::from_fn(da * da, db * db, |r, c| {
        let (i1, j1) = (r / da, r % da);
        let (i2, j2) = (c / db, c % db);
        x[(i1 * db + i2, j1 * db + j2)]
    });
    let dec = svd(&rearranged);
    let s = &dec.singular_values;
    if s[0] <= 0.0 {
        return Ok(None);
    }
    if s.get(1).is_some_and(|&s1| s1 / s[0] > tol.atol) {
        return Ok(None);
    }
    let root = s[0].sqrt();
    let mut a = ComplexMatrix::from_fn(da, da, |i, j| dec.u[(i * da + j, 0)] * root);
    let mut b = ComplexMatrix::from_fn(db, db, |i, j| dec.v_adjoint[(0, i * db + j)] * root);

    match mode {
        Normalization::Density => {
            let tr = a.trace();
            if tr.norm() <= f64::EPSILON {
                return Ok(None);
            }
            a = a.scale(tr.inv());
            b = b.scale(tr);
        }
        Normalization::Unitary => {
            let c = (da as f64).sqrt() / a.frobenius_norm();
            a = a.scale_real(c);
            b = b.scale_real(1.0 / c);
            let phase = leading_phase(&a);
            a = a.scale(phase.conj());
            b = b.scale(phase);
        }
        Normalization::Balanced => {
            let c = (b.frobenius_norm() / a.frobenius_norm()).sqrt();
            a = a.scale_real(c);
            b = b.scale_real(1.0 / c);
        }
    }
    let residual = (x - &kron(&a, &b)).frobenius_norm();
    if residual > tol.bound(1.0) * x.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Ok(None);
    }
    Ok(Some((a, b)))
}

/// Restriction to the leading `n_a` qubits when the initial state and every
/// letter factor across that cut. Returns `None` when some factorization
/// fails.
pub fn sober_reduce(
    m: &QuantumAutomaton,
    n_a: usize,
    tol: Tolerance,
) -> Result<Option<QuantumAutomaton>> {
    if n_a < m.n1() || n_a >= m.n() {
        return Err(Error::Precondition(format!(
            "sober reduction needs n1 <= n_A < n (n1={}, n_A={n_a}, n={})",
            m.n1(),
            m.n()
        )));
    }
    let Some((rho_a, _)) = factor_with(m.rho0(), m.n(), n_a, tol, Normalization::Density)? else {
        return Ok(None);
    };
    let mut letters = Vec::with_capacity(m.alphabet().len());
    for (symbol, u) in m.letters() {
        match factor_with(u, m.n(), n_a, tol, Normalization::Unitary)? {
            Some((u_a, _)) => letters.push((symbol.to_string(), u_a)),
            None => return Ok(None),
        }
    }
    QuantumAutomaton::new(n_a, m.n1(), rho_a, letters, m.observable().clone())
        .map(Some)
        .map_err(|e| Error::Internal(format!("sober factors failed validation: {e}")))
}
