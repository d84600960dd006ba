use crate::linalg::{self, hermitian_eigen, kron, qubits_of, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Eigenvalues closer than this are merged when an observable is built from a
/// hermitian matrix.
pub const EIGENVALUE_GAP: f64 = 1e-8;

/// Spectral form of an observable on the leading `qubits` qubits: distinct
/// eigenvalues in increasing order with their eigenprojectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    qubits: usize,
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
}

impl Observable {
    /// Accepts eigenvalue/projector pairs in any order and sorts them.
    /// Only shapes and distinctness are checked here; the projector algebra
    /// is checked by [`Observable::violations`].
    pub fn from_spectral(eigenvalues: Vec<f64>, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.len() != projectors.len() {
            return Err(Error::Dimension(format!(
                "observable needs one projector per eigenvalue ({} eigenvalues, {} projectors)",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        let dim = projectors[0].rows();
        let qubits = qubits_of(dim).filter(|&q| q >= 1).ok_or_else(|| {
            Error::Dimension(format!("projector dimension {dim} is not 2^k, k >= 1"))
        })?;
        if let Some(k) = projectors.iter().position(|p| p.shape() != (dim, dim)) {
            return Err(Error::Dimension(format!(
                "projector {k} is {:?}, expected {dim}x{dim}",
                projectors[k].shape()
            )));
        }
        if eigenvalues.iter().any(|a| !a.is_finite()) {
            return Err(Error::Dimension("non-finite observable eigenvalue".into()));
        }
        let mut pairs: Vec<(f64, ComplexMatrix)> =
            eigenvalues.into_iter().zip(projectors).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Usage(
                "observable eigenvalues must be distinct".into(),
            ));
        }
        let (eigenvalues, projectors) = pairs.into_iter().unzip();
        Ok(Self {
            qubits,
            eigenvalues,
            projectors,
        })
    }

    /// Diagonalizes a hermitian matrix and groups eigenvectors whose
    /// eigenvalues lie within [`EIGENVALUE_GAP`] of the previous one.
    pub fn from_hermitian(a: &ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let dim = a.rows();
        if !a.is_square() || qubits_of(dim).is_none_or(|q| q == 0) {
            return Err(Error::Dimension(format!(
                "observable matrix is {:?}, expected 2^k x 2^k",
                a.shape()
            )));
        }
        if !linalg::is_hermitian(a, tol) {
            return Err(Error::Precondition(
                "observable matrix is not hermitian".into(),
            ));
        }
        let (values, vectors) = hermitian_eigen(a);
        let mut groups: Vec<(Vec<f64>, ComplexMatrix)> = Vec::new();
        for (k, &lambda) in values.iter().enumerate() {
            let v = vectors.col(k);
            let proj = ComplexMatrix::outer(&v);
            match groups.last_mut() {
                Some((vals, p))
                    if lambda - vals.last().copied().unwrap_or(lambda) <= EIGENVALUE_GAP =>
                {
                    vals.push(lambda);
                    *p = &*p + &proj;
                }
                _ => groups.push((vec![lambda], proj)),
            }
        }
        let (eigenvalues, projectors) = groups
            .into_iter()
            .map(|(vals, p)| (vals.iter().sum::<f64>() / vals.len() as f64, p))
            .unzip();
        Self::from_spectral(eigenvalues, projectors)
    }

    /// Pauli Z on qubit 1, identity on qubits 2..=qubits.
    pub fn z_on_first(qubits: usize) -> Self {
        assert!(qubits >= 1);
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        if qubits == 1 {
            return Self::from_spectral(
                vec![-1.0, 1.0],
                vec![
                    ComplexMatrix::unit(2, 2, 1, 1),
                    ComplexMatrix::unit(2, 2, 0, 0),
                ],
            )
            .expect("static observable");
        }
        let a = kron(&z, &ComplexMatrix::identity(1 << (qubits - 1)));
        Self::from_hermitian(&a, Tolerance::default()).expect("Z is hermitian")
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Multiplicities `Tr{P_k}`, rounded.
    pub fn degeneracies(&self) -> Vec<usize> {
        self.projectors
            .iter()
            .map(|p| p.trace().re.round().max(0.0) as usize)
            .collect()
    }

    /// `P_k ⊗ I` on `total_qubits` qubits.
    pub fn extended_projector(&self, k: usize, total_qubits: usize) -> ComplexMatrix {
        kron(
            &self.projectors[k],
            &ComplexMatrix::identity(1 << (total_qubits - self.qubits)),
        )
    }

    /// The hermitian matrix `sum_k a_k P_k`.
    pub fn matrix(&self) -> ComplexMatrix {
        let dim = 1 << self.qubits;
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(ComplexMatrix::zeros(dim, dim), |acc, (&a, p)| {
                &acc + &p.scale_real(a)
            })
    }

    /// Entrywise comparison of two spectral forms.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.qubits == other.qubits
            && self.eigenvalues.len() == other.eigenvalues.len()
            && self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .all(|(a, b)| tol.accepts((a - b).abs(), a.abs()))
            && self
                .projectors
                .iter()
                .zip(&other.projectors)
                .all(|(p, q)| p.max_abs_diff(q) <= tol.bound(1.0))
    }

    /// Algebraic violations as `(what, magnitude)` pairs.
    pub(crate) fn violations(&self, tol: Tolerance) -> Vec<(String, f64)> {
        let dim = 1 << self.qubits;
        let bound = tol.bound(1.0);
        let mut out = Vec::new();
        for (k, p) in self.projectors.iter().enumerate() {
            let herm = p.max_abs_diff(&p.adjoint());
            if herm > bound {
                out.push((format!("projector {k} is not hermitian"), herm));
            }
            let idem = p.matmul(p).max_abs_diff(p);
            if idem > bound {
                out.push((format!("projector {k} is not idempotent"), idem));
            }
            for (l, q) in self.projectors.iter().enumerate().skip(k + 1) {
                let overlap = p.matmul(q).max_abs();
                if overlap > bound {
                    out.push((
                        format!("projectors {k} and {l} are not orthogonal"),
                        overlap,
                    ));
                }
            }
        }
        let sum = self
            .projectors
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, p| &acc + p);
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if completeness > bound {
            out.push(("projectors do not sum to the identity".into(), completeness));
        }
        out
    }
}
