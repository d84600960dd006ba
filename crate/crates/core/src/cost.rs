//! Arithmetic-operation tallies for the minimizer.
//!
//! Counts are in complex multiply-adds for the kernels the minimizer actually
//! runs, derived from their operand shapes. Dense decompositions (SVD,
//! hermitian eigensolver) are charged a nominal `d^3` each.

use std::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    /// Unit classification and Q/K construction.
    pub basis: u64,
    /// Superoperators in the computational basis.
    pub superop: u64,
    /// Change to the Q ⊕ K basis.
    pub basis_change: u64,
    /// Off-diagonal block scans.
    pub block_test: u64,
    /// Unitary recovery from the QQ blocks.
    pub extraction: u64,
    /// Partial traces.
    pub partial_trace: u64,
    /// Tensor-factor (sober) tests.
    pub factorization: u64,
    /// Post-hoc behavior comparison.
    pub verification: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.phases().iter().map(|&(_, c)| c).sum()
    }

    pub fn phases(&self) -> [(&'static str, u64); 8] {
        [
            ("basis", self.basis),
            ("superop", self.superop),
            ("basis_change", self.basis_change),
            ("block_test", self.block_test),
            ("extraction", self.extraction),
            ("partial_trace", self.partial_trace),
            ("factorization", self.factorization),
            ("verification", self.verification),
        ]
    }

    pub fn absorb(&mut self, other: &OpCount) {
        self.basis += other.basis;
        self.superop += other.superop;
        self.basis_change += other.basis_change;
        self.block_test += other.block_test;
        self.extraction += other.extraction;
        self.partial_trace += other.partial_trace;
        self.factorization += other.factorization;
        self.verification += other.verification;
    }
}

pub(crate) fn matmul(rows: usize, inner: usize, cols: usize) -> u64 {
    (rows * inner * cols) as u64
}

/// Nominal cost of a dense decomposition of a `rows x cols` matrix.
pub(crate) fn decomposition(rows: usize, cols: usize) -> u64 {
    let (small, large) = if rows < cols {
        (rows, cols)
    } else {
        (cols, rows)
    };
    (small * small * large) as u64
}

/// Partial trace of a `2^n` operator down to `2^n_a`.
pub(crate) fn partial_trace(n: usize, n_a: usize) -> u64 {
    let da = 1u64 << n_a;
    da * da * (1u64 << (n - n_a))
}

/// `U rho U^dagger` on dimension `d`.
pub(crate) fn conjugation(d: usize) -> u64 {
    2 * matmul(d, d, d)
}

impl fmt::Display for OpCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, count) in self.phases() {
            if count > 0 {
                writeln!(f, "  {name:<14} {count}")?;
            }
        }
        write!(f, "  {:<14} {}", "total", self.total())
    }
}
