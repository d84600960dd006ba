//! Brute-force references for the optimized paths.
//!
//! Everything here is computed with explicit index loops and shares no
//! arithmetic with `linalg`, `superop` or `automaton`; only the matrix
//! container is reused. Slow on purpose.

use std::fmt::Write as _;

use crate::linalg::{ComplexMatrix, Tolerance};
use crate::opbasis::OperatorBasis;
use crate::{Error, QuantumAutomaton, Result, Word, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub max_words: usize,
    pub tol: Tolerance,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_words: 100_000,
            tol: Tolerance::default(),
        }
    }
}

fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..a.cols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

fn trace(a: &ComplexMatrix) -> C64 {
    (0..a.rows()).map(|i| a[(i, i)]).sum()
}

/// `S[i][j] = Tr(B_i^dagger U B_j U^dagger)`, one trace per entry.
pub fn superop_elementwise(u: &ComplexMatrix, basis: &OperatorBasis) -> ComplexMatrix {
    let n = basis.vectors.len();
    let u_dag = dagger(u);
    let images: Vec<ComplexMatrix> = basis
        .vectors
        .iter()
        .map(|b| product(&product(u, b), &u_dag))
        .collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let bi_dag = dagger(&basis.vectors[i]);
        for (j, image) in images.iter().enumerate() {
            s[(i, j)] = trace(&product(&bi_dag, image));
        }
    }
    s
}

/// Sums out the trailing `n - n_a` qubits by splitting each index into its
/// kept and traced bits.
pub fn partial_trace_naive(m: &ComplexMatrix, n: usize, n_a: usize) -> ComplexMatrix {
    let da = 1usize << n_a;
    let db = 1usize << (n - n_a);
    let mut out = ComplexMatrix::zeros(da, da);
    for a in 0..da {
        for a2 in 0..da {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..db {
                for b2 in 0..db {
                    if b == b2 {
                        acc += m[((a << (n - n_a)) | b, (a2 << (n - n_a)) | b2)];
                    }
                }
            }
            out[(a, a2)] = acc;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct BehaviorRow {
    pub word: Word,
    /// `(eigenvalue, probability)` in ascending eigenvalue order.
    pub probabilities: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BehaviorTable {
    pub rows: Vec<BehaviorRow>,
}

impl BehaviorTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let _ = write!(out, "{}", row.word);
            for (lambda, p) in &row.probabilities {
                let _ = write!(out, "\t{lambda}:{p:.12}");
            }
            out.push('\n');
        }
        out
    }

    /// Largest per-entry probability difference. Tables must list the same
    /// words and eigenvalues.
    pub fn max_deviation(&self, other: &BehaviorTable) -> Result<f64> {
        if self.rows.len() != other.rows.len() {
            return Err(Error::Usage(format!(
                "tables have {} and {} rows",
                self.rows.len(),
                other.rows.len()
            )));
        }
        let mut worst: f64 = 0.0;
        for (r1, r2) in self.rows.iter().zip(&other.rows) {
            if r1.word != r2.word || r1.probabilities.len() != r2.probabilities.len() {
                return Err(Error::Usage(format!("row mismatch at word {}", r1.word)));
            }
            for ((l1, p1), (l2, p2)) in r1.probabilities.iter().zip(&r2.probabilities) {
                if l1 != l2 {
                    return Err(Error::Usage(format!(
                        "eigenvalue mismatch at word {}",
                        r1.word
                    )));
                }
                worst = worst.max((p1 - p2).abs());
            }
        }
        Ok(worst)
    }
}

fn words_up_to(alphabet: &[String], depth: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &level {
            for k in 0..alphabet.len() {
                let mut longer = w.clone();
                longer.push(k);
                next.push(longer);
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// Every word up to `depth`, ordered by length then lexicographically in
/// alphabet order, each state recomputed from `rho0`.
pub fn behavior_table(
    m: &QuantumAutomaton,
    depth: usize,
    config: &OracleConfig,
) -> Result<BehaviorTable> {
    let letters = m.alphabet().len() as u128;
    let mut count: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=depth {
        count = count.saturating_add(level);
        level = level.saturating_mul(letters);
    }
    if count > config.max_words as u128 {
        return Err(Error::Budget {
            requested: count,
            cap: config.max_words,
        });
    }
    let obs = m.observable();
    let mut rows = Vec::new();
    for indices in words_up_to(m.alphabet(), depth) {
        let mut rho = m.rho0().clone();
        for &k in &indices {
            let u = &m.unitaries()[k];
            rho = product(&product(u, &rho), &dagger(u));
        }
        let reduced = partial_trace_naive(&rho, m.n(), m.n1());
        let probabilities = obs
            .eigenvalues()
            .iter()
            .zip(obs.projectors())
            .map(|(&lambda, p)| (lambda, trace(&product(p, &reduced)).re))
            .collect();
        let word = Word::from_symbols(indices.iter().map(|&k| m.alphabet()[k].clone()).collect());
        rows.push(BehaviorRow {
            word,
            probabilities,
        });
    }
    Ok(BehaviorTable { rows })
}
