//! Matrices of conjugation superoperators `X -> U X U^dagger`.
//!
//! Entries follow `s[i][j] = <B_i, U B_j U^dagger>`: column `j` holds the
//! coordinates of the image of basis vector `j`.

use crate::cost;
use crate::linalg::{self, fix_global_phase, hermitian_eigen, kron, ComplexMatrix, Tolerance};
use crate::opbasis::{BasisLabel, BasisSplit, OperatorBasis};
use crate::par::Strategy;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    /// Matrix units on `n` qubits.
    Computational { n: usize },
    /// Q vectors then K vectors for the cut after `n_a` of `n` qubits.
    QkSplit { n: usize, n_a: usize },
    /// Some other orthonormal family on `n` qubits.
    Other { n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperOp {
    pub matrix: ComplexMatrix,
    pub tag: BasisTag,
}

impl SuperOp {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn identity(tag: BasisTag) -> Self {
        let n = match tag {
            BasisTag::Computational { n } | BasisTag::QkSplit { n, .. } | BasisTag::Other { n } => {
                n
            }
        };
        Self {
            matrix: ComplexMatrix::identity(1 << (2 * n)),
            tag,
        }
    }
}

pub fn conj_superop(u: &ComplexMatrix, basis: &OperatorBasis) -> Result<SuperOp> {
    conj_superop_with(u, basis, Strategy::default())
}

/// Superoperator of conjugation by `u` in an orthonormal `basis`.
///
/// In the computational basis the matrix is `u ⊗ conj(u)`; in any other
/// basis with coordinate matrix `B` it is `B^dagger (u ⊗ conj(u)) B`.
pub fn conj_superop_with(
    u: &ComplexMatrix,
    basis: &OperatorBasis,
    strategy: Strategy,
) -> Result<SuperOp> {
    let d = basis.dim();
    if u.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "unitary is {:?}, basis lives on {d}x{d} operators",
            u.shape()
        )));
    }
    if !linalg::is_unitary(u, Tolerance::default()) {
        return Err(Error::Precondition(format!(
            "conjugation needs a unitary (defect {:.3e})",
            linalg::unitarity_defect(u)
        )));
    }
    let liouville = kron(u, &u.conj());
    let (matrix, tag) = match basis.label {
        BasisLabel::Computational | BasisLabel::Image => {
            (liouville, BasisTag::Computational { n: basis.n })
        }
        label => {
            if basis.orthonormality_defect() > 1e-9 {
                return Err(Error::Precondition("basis is not orthonormal".into()));
            }
            let b = basis.coordinate_matrix();
            let m = b
                .adjoint()
                .matmul_with(&liouville, strategy)
                .matmul_with(&b, strategy);
            let tag = match label {
                BasisLabel::QkUnion { n_a } => BasisTag::QkSplit { n: basis.n, n_a },
                _ => BasisTag::Other { n: basis.n },
            };
            (m, tag)
        }
    };
    Ok(SuperOp { matrix, tag })
}

/// `C^dagger X C` for a sparse-ish unitary `C`, exploiting zeros in `C^dagger`
/// on both products: `(C^dagger (C^dagger X)^dagger)^dagger = C^dagger X C`.
fn sandwich(c_adj: &ComplexMatrix, x: &ComplexMatrix, strategy: Strategy) -> ComplexMatrix {
    let left = c_adj.matmul_with(x, strategy);
    c_adj.matmul_with(&left.adjoint(), strategy).adjoint()
}

pub fn change_basis(s: &SuperOp, split: &BasisSplit) -> Result<SuperOp> {
    change_basis_with(s, split, Strategy::default())
}

/// Re-expresses a computational-basis superoperator in the Q ⊕ K basis of
/// `split`: `C^dagger s C`.
pub fn change_basis_with(s: &SuperOp, split: &BasisSplit, strategy: Strategy) -> Result<SuperOp> {
    if s.tag != (BasisTag::Computational { n: split.n }) {
        return Err(Error::Dimension(format!(
            "expected a computational-basis superoperator on {} qubits, got {:?}",
            split.n, s.tag
        )));
    }
    let matrix = sandwich(&split.transition.adjoint(), &s.matrix, strategy);
    Ok(SuperOp {
        matrix,
        tag: BasisTag::QkSplit {
            n: split.n,
            n_a: split.n_a,
        },
    })
}

/// Inverse of [`change_basis`]: `C s C^dagger`.
pub fn to_computational(s: &SuperOp, split: &BasisSplit) -> Result<SuperOp> {
    if s.tag
        != (BasisTag::QkSplit {
            n: split.n,
            n_a: split.n_a,
        })
    {
        return Err(Error::Dimension(format!(
            "superoperator tag {:?} does not match split",
            s.tag
        )));
    }
    Ok(SuperOp {
        matrix: sandwich(&split.transition, &s.matrix, Strategy::default()),
        tag: BasisTag::Computational { n: split.n },
    })
}

pub(crate) fn change_basis_cost(split: &BasisSplit) -> u64 {
    let nnz = split
        .transition
        .data()
        .iter()
        .filter(|z| z.norm() != 0.0)
        .count() as u64;
    2 * nnz * split.transition.rows() as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub qq: ComplexMatrix,
    /// K components of images of Q vectors (`k x q`).
    pub qk: ComplexMatrix,
    /// Q components of images of K vectors (`q x k`).
    pub kq: ComplexMatrix,
    pub kk: ComplexMatrix,
    pub max_qk: f64,
    pub max_kq: f64,
}

impl BlockDecomposition {
    pub fn max_offdiag(&self) -> f64 {
        self.max_qk.max(self.max_kq)
    }
}

pub fn blocks(s: &SuperOp, q: usize) -> Result<BlockDecomposition> {
    if !matches!(s.tag, BasisTag::QkSplit { .. }) {
        return Err(Error::Usage(format!(
            "blocks need a Q ⊕ K superoperator, got {:?}",
            s.tag
        )));
    }
    let dim = s.dim();
    if q == 0 || q >= dim {
        return Err(Error::Dimension(format!("block size {q} outside 1..{dim}")));
    }
    let qk = s.matrix.submatrix(q..dim, 0..q);
    let kq = s.matrix.submatrix(0..q, q..dim);
    Ok(BlockDecomposition {
        qq: s.matrix.submatrix(0..q, 0..q),
        kk: s.matrix.submatrix(q..dim, q..dim),
        max_qk: qk.max_abs(),
        max_kq: kq.max_abs(),
        qk,
        kq,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvarianceCheck {
    pub invariant: bool,
    pub max_qk: f64,
    pub max_kq: f64,
    pub threshold: f64,
}

/// Whether the kernel (and with it Q) is invariant: both off-diagonal blocks
/// below `tol.atol` times the largest entry of `s`.
pub fn invariant_under(s: &SuperOp, q: usize, tol: Tolerance) -> Result<InvarianceCheck> {
    let b = blocks(s, q)?;
    Ok(check_blocks(&b, s.matrix.max_abs(), tol))
}

pub(crate) fn check_blocks(b: &BlockDecomposition, scale: f64, tol: Tolerance) -> InvarianceCheck {
    let threshold = tol.atol * scale.max(f64::MIN_POSITIVE);
    InvarianceCheck {
        invariant: b.max_qk <= threshold && b.max_kq <= threshold,
        max_qk: b.max_qk,
        max_kq: b.max_kq,
        threshold,
    }
}

/// `s1 * s2`, i.e. apply `s2` first.
pub fn compose(s1: &SuperOp, s2: &SuperOp) -> Result<SuperOp> {
    if s1.tag != s2.tag || s1.dim() != s2.dim() {
        return Err(Error::Dimension(format!(
            "cannot compose {:?} ({}) with {:?} ({})",
            s1.tag,
            s1.dim(),
            s2.tag,
            s2.dim()
        )));
    }
    Ok(SuperOp {
        matrix: s1.matrix.matmul(&s2.matrix),
        tag: s1.tag,
    })
}

/// Recovers `V` on `n_a` qubits from the computational-basis superoperator
/// `qq = V ⊗ conj(V)`.
///
/// The Choi rearrangement `J[(a l), (b l')] = qq[(a b), (l l')]` equals
/// `vec(V) vec(V)^dagger`; it must be rank one within `tol`, and `V` is read
/// from its top eigenvector with the global phase fixed so the first nonzero
/// entry is real positive. Returns `None` when the rank-one test or the
/// reconstruction check fails.
pub fn extract_unitary(
    qq: &ComplexMatrix,
    n_a: usize,
    tol: Tolerance,
) -> Result<Option<ComplexMatrix>> {
    let d = 1usize << n_a;
    if qq.shape() != (d * d, d * d) {
        return Err(Error::Dimension(format!(
            "QQ block is {:?}, expected {1}x{1}",
            qq.shape(),
            d * d
        )));
    }
    let choi = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (a, l) = (r / d, r % d);
        let (b, lp) = (c / d, c % d);
        qq[(a * d + b, l * d + lp)]
    });
    let (values, vectors) = hermitian_eigen(&choi);
    let top = *values.last().expect("non-empty spectrum");
    if top <= 0.0 {
        return Ok(None);
    }
    let rest = values[..values.len() - 1]
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    if rest > tol.atol * top {
        return Ok(None);
    }
    let v = vectors.col(values.len() - 1);
    let root = top.sqrt();
    let w = fix_global_phase(&ComplexMatrix::from_fn(d, d, |a, l| v[a * d + l] * root));
    if !linalg::is_unitary(&w, tol) || kron(&w, &w.conj()).max_abs_diff(qq) > tol.bound(1.0) {
        return Ok(None);
    }
    Ok(Some(w))
}

pub(crate) fn extraction_cost(n_a: usize) -> u64 {
    let dd = 1usize << (2 * n_a);
    cost::decomposition(dd, dd) + cost::matmul(dd, 1, dd)
}
