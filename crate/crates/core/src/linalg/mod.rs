//! Dense complex linear algebra on row-major matrices.
//!
//! Qubit 1 is the most significant bit of a composite index, so a subsystem
//! made of the leading qubits occupies contiguous blocks of rows and columns.

mod decomp;
mod gram_schmidt;
mod matrix;
mod ops;

pub use decomp::{hermitian_eigen, qr, singular_values, svd, unitary_eigenvalues, Svd};
pub use gram_schmidt::gram_schmidt;
pub use matrix::ComplexMatrix;
pub use ops::{
    hs_inner, is_density, is_hermitian, is_unitary, kron, min_eigenvalue, partial_trace,
    unitarity_defect,
};

pub use num_complex::Complex64 as C64;

/// Absolute plus relative tolerance: a quantity `x` compared against a scale
/// `s` passes when `|x| <= atol + rtol * s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-9,
            rtol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> crate::Result<Self> {
        if !(atol >= 0.0 && rtol >= 0.0) || !atol.is_finite() || !rtol.is_finite() {
            return Err(crate::Error::Usage(format!(
                "tolerances must be finite and non-negative (atol={atol}, rtol={rtol})"
            )));
        }
        Ok(Self { atol, rtol })
    }

    /// Purely absolute tolerance.
    pub fn absolute(atol: f64) -> Self {
        Self { atol, rtol: 0.0 }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale.abs()
    }

    pub fn accepts(&self, deviation: f64, scale: f64) -> bool {
        deviation <= self.bound(scale)
    }
}

/// Unit-modulus phase of the first entry (row-major) that is not negligible
/// relative to the largest entry; `1` for a zero matrix.
pub fn leading_phase(m: &ComplexMatrix) -> C64 {
    let cutoff = 1e-10 * m.max_abs();
    m.data()
        .iter()
        .find(|z| z.norm() > cutoff)
        .map_or(C64::new(1.0, 0.0), |z| z / z.norm())
}

/// Multiplies by the global phase that makes the first non-negligible entry
/// real and positive.
pub fn fix_global_phase(m: &ComplexMatrix) -> ComplexMatrix {
    m.scale(leading_phase(m).conj())
}

/// Number of qubits `n` with `2^n == dim`, if `dim` is a power of two.
pub fn qubits_of(dim: usize) -> Option<usize> {
    (dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}
