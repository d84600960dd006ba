//! Qubit-count minimization.
//!
//! For each candidate cut `n_A = n1, n1+1, ..., n-1` the kernel of the partial
//! trace onto the leading `n_A` qubits is tested for invariance under every
//! letter's superoperator. The first cut that passes yields an equivalent
//! automaton on `n_A` qubits: its initial state is the reduced initial state,
//! and its letters are the unitaries recovered from the QQ blocks. If no cut
//! passes, the input is reported minimal for this family of reductions.

use std::fmt;

use crate::automaton::{check_budget, sober_reduce, DEFAULT_WORD_CAP};
use crate::cost::{self, OpCount};
use crate::linalg::{partial_trace, ComplexMatrix, Tolerance};
use crate::opbasis::{build_split_with, comp_op_basis};
use crate::par::{self, Strategy};
use crate::superop::{
    blocks, change_basis_cost, change_basis_with, check_blocks, conj_superop_with, extract_unitary,
    extraction_cost,
};
use crate::{Error, QuantumAutomaton, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizationOptions {
    pub tol: Tolerance,
    /// Depth of the post-hoc behavior comparison; 0 disables it.
    pub verify_len: usize,
    /// Try the tensor-factor reduction before building superoperators.
    pub try_sober_first: bool,
    pub max_word_cap: usize,
    pub strategy: Strategy,
}

impl Default for MinimizationOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            verify_len: 4,
            try_sober_first: true,
            max_word_cap: DEFAULT_WORD_CAP,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionPath {
    /// Initial state and all letters factor across the cut.
    Sober,
    /// Kernel invariance of every letter's superoperator.
    InvariantSubspace,
}

/// Off-diagonal block magnitudes of one letter at one cut.
#[derive(Clone, Debug, PartialEq)]
pub struct LetterBlocks {
    pub symbol: String,
    pub max_qk: f64,
    pub max_kq: f64,
}

impl LetterBlocks {
    pub fn max_offdiag(&self) -> f64 {
        self.max_qk.max(self.max_kq)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutAttempt {
    pub n_a: usize,
    pub sober_tried: bool,
    pub path: ReductionPath,
    /// Per-letter block norms; empty when the sober path decided the cut.
    pub letters: Vec<LetterBlocks>,
    pub invariant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    AlreadyMinimal,
    Reduced {
        n_bar: usize,
        automaton: QuantumAutomaton,
        path: ReductionPath,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification {
    pub depth: usize,
    pub max_deviation: f64,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizationReport {
    /// `4^n` of the input.
    pub original_dim: usize,
    pub tried: Vec<CutAttempt>,
    pub outcome: Outcome,
    pub verified: Option<Verification>,
    pub op_count: OpCount,
}

impl MinimizationReport {
    pub fn reduced(&self) -> Option<&QuantumAutomaton> {
        match &self.outcome {
            Outcome::Reduced { automaton, .. } => Some(automaton),
            Outcome::AlreadyMinimal => None,
        }
    }

    pub fn n_bar(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Reduced { n_bar, .. } => Some(*n_bar),
            Outcome::AlreadyMinimal => None,
        }
    }
}

fn check_cut(m: &QuantumAutomaton, n_a: usize) -> Result<()> {
    if n_a < m.n1() || n_a >= m.n() {
        return Err(Error::Precondition(format!(
            "reduction needs n1 <= n_A < n (n1={}, n_A={n_a}, n={})",
            m.n1(),
            m.n()
        )));
    }
    Ok(())
}

/// Equivalent automaton on the leading `n_a` qubits, if the partial-trace
/// kernel is invariant under every letter.
pub fn reduce_at(
    m: &QuantumAutomaton,
    n_a: usize,
    tol: Tolerance,
) -> Result<Option<QuantumAutomaton>> {
    let mut ops = OpCount::default();
    Ok(reduce_at_with(m, n_a, tol, Strategy::default(), &mut ops)?.1)
}

/// [`reduce_at`] that also returns per-letter block norms and tallies its
/// arithmetic. Letters are processed with `strategy`.
pub fn reduce_at_with(
    m: &QuantumAutomaton,
    n_a: usize,
    tol: Tolerance,
    strategy: Strategy,
    ops: &mut OpCount,
) -> Result<(Vec<LetterBlocks>, Option<QuantumAutomaton>)> {
    check_cut(m, n_a)?;
    let n = m.n();
    let big = 1usize << (2 * n);
    let split = build_split_with(n, n_a, strategy)?;
    ops.basis += (big as u64) * cost::partial_trace(n, n_a) + split.k() as u64 * big as u64;

    let comp = comp_op_basis(n);
    let q = split.q();
    let per_letter = par::map_slice(strategy, m.unitaries(), |u| -> Result<_> {
        let s = conj_superop_with(u, &comp, strategy)?;
        let s_qk = change_basis_with(&s, &split, strategy)?;
        let b = blocks(&s_qk, q)?;
        let check = check_blocks(&b, s_qk.matrix.max_abs(), tol);
        let extracted = if check.invariant {
            Some(extract_unitary(&b.qq, n_a, tol)?)
        } else {
            None
        };
        Ok((check, extracted))
    });

    let mut diagnostics = Vec::with_capacity(m.alphabet().len());
    let mut recovered = Vec::with_capacity(m.alphabet().len());
    let mut all_invariant = true;
    for (symbol, result) in m.alphabet().iter().zip(per_letter) {
        let (check, extracted) = result?;
        ops.superop += (big * big) as u64;
        ops.basis_change += change_basis_cost(&split);
        ops.block_test += (big * big) as u64;
        diagnostics.push(LetterBlocks {
            symbol: symbol.clone(),
            max_qk: check.max_qk,
            max_kq: check.max_kq,
        });
        all_invariant &= check.invariant;
        if let Some(found) = extracted {
            ops.extraction += extraction_cost(n_a);
            match found {
                Some(u_a) => recovered.push((symbol.clone(), u_a)),
                None => {
                    return Err(Error::Internal(format!(
                        "letter `{symbol}` leaves the kernel invariant at n_A={n_a} \
                         but its QQ block is not a unitary conjugation"
                    )))
                }
            }
        }
    }
    if !all_invariant {
        return Ok((diagnostics, None));
    }
    let rho_a = partial_trace(m.rho0(), n, n_a)?;
    ops.partial_trace += cost::partial_trace(n, n_a);
    let reduced = QuantumAutomaton::new(n_a, m.n1(), rho_a, recovered, m.observable().clone())
        .map_err(|e| Error::Internal(format!("reduced automaton failed validation: {e}")))?;
    Ok((diagnostics, Some(reduced)))
}

fn sober_cost(m: &QuantumAutomaton, n_a: usize) -> u64 {
    let rows = 1usize << (2 * n_a);
    let cols = 1usize << (2 * (m.n() - n_a));
    (m.alphabet().len() as u64 + 1) * cost::decomposition(rows, cols)
}

/// Runs the cut search and, if requested, checks the result by behavior
/// comparison.
pub fn minimize(m: &QuantumAutomaton, opts: &MinimizationOptions) -> Result<MinimizationReport> {
    let report = m.validate(opts.tol);
    if !report.is_empty() {
        return Err(Error::Validation(report));
    }
    if opts.verify_len > 0 {
        check_budget(m.alphabet().len(), opts.verify_len, opts.max_word_cap)?;
    }
    let mut ops = OpCount::default();
    let mut tried = Vec::new();
    let mut outcome = Outcome::AlreadyMinimal;
    for n_a in m.n1()..m.n() {
        if opts.try_sober_first {
            ops.factorization += sober_cost(m, n_a);
            if let Some(reduced) = sober_reduce(m, n_a, opts.tol)? {
                tried.push(CutAttempt {
                    n_a,
                    sober_tried: true,
                    path: ReductionPath::Sober,
                    letters: Vec::new(),
                    invariant: true,
                });
                outcome = Outcome::Reduced {
                    n_bar: n_a,
                    automaton: reduced,
                    path: ReductionPath::Sober,
                };
                break;
            }
        }
        let (letters, reduced) = reduce_at_with(m, n_a, opts.tol, opts.strategy, &mut ops)?;
        tried.push(CutAttempt {
            n_a,
            sober_tried: opts.try_sober_first,
            path: ReductionPath::InvariantSubspace,
            letters,
            invariant: reduced.is_some(),
        });
        if let Some(automaton) = reduced {
            outcome = Outcome::Reduced {
                n_bar: n_a,
                automaton,
                path: ReductionPath::InvariantSubspace,
            };
            break;
        }
    }

    let verified = match (&outcome, opts.verify_len) {
        (Outcome::Reduced { automaton, .. }, depth) if depth > 0 => {
            let words = crate::automaton::word_count(m.alphabet().len(), depth) as u64;
            ops.verification +=
                words * (cost::conjugation(m.dim()) + cost::conjugation(automaton.dim()));
            let eq = verify_equivalence_with(
                m,
                automaton,
                depth,
                opts.tol,
                opts.max_word_cap,
                opts.strategy,
            )?;
            Some(Verification {
                depth,
                max_deviation: eq.max_deviation,
                equal: eq.equal,
            })
        }
        _ => None,
    };

    Ok(MinimizationReport {
        original_dim: 1 << (2 * m.n()),
        tried,
        outcome,
        verified,
        op_count: ops,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub equal: bool,
    pub max_deviation: f64,
    pub depth: usize,
}

pub fn verify_equivalence(
    m1: &QuantumAutomaton,
    m2: &QuantumAutomaton,
    depth: usize,
    tol: Tolerance,
) -> Result<EquivalenceReport> {
    verify_equivalence_with(m1, m2, depth, tol, DEFAULT_WORD_CAP, Strategy::default())
}

/// Compares output distributions of every word up to `depth`. Both automata
/// must share alphabet (in order) and observable.
pub fn verify_equivalence_with(
    m1: &QuantumAutomaton,
    m2: &QuantumAutomaton,
    depth: usize,
    tol: Tolerance,
    cap: usize,
    strategy: Strategy,
) -> Result<EquivalenceReport> {
    if m1.alphabet() != m2.alphabet() {
        return Err(Error::Usage(format!(
            "alphabets differ: {:?} vs {:?}",
            m1.alphabet(),
            m2.alphabet()
        )));
    }
    if !m1.observable().approx_eq(m2.observable(), tol) {
        return Err(Error::Usage("observables differ".into()));
    }
    let b1 = m1.behavior_with(depth, cap, strategy)?;
    let b2 = m2.behavior_with(depth, cap, strategy)?;
    let max_deviation = b1
        .iter()
        .zip(&b2)
        .map(|((_, d1), (_, d2))| d1.max_deviation(d2))
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        equal: max_deviation <= tol.bound(1.0),
        max_deviation,
        depth,
    })
}

/// Superoperator of a word's unitary in the Q ⊕ K basis of a cut, returned
/// as its largest off-diagonal block entry.
pub fn word_offdiag(m: &QuantumAutomaton, word: &crate::Word, n_a: usize) -> Result<f64> {
    let split = crate::opbasis::build_split(m.n(), n_a)?;
    let u: ComplexMatrix = m.word_unitary(word)?;
    let s = crate::superop::conj_superop(&u, &comp_op_basis(m.n()))?;
    let s_qk = crate::superop::change_basis(&s, &split)?;
    Ok(blocks(&s_qk, split.q())?.max_offdiag())
}

impl fmt::Display for MinimizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "original dimension: {}", self.original_dim)?;
        if self.tried.is_empty() {
            writeln!(f, "no cut to try (n1 = n)")?;
        }
        for attempt in &self.tried {
            let path = match attempt.path {
                ReductionPath::Sober => "sober",
                ReductionPath::InvariantSubspace => "invariant-subspace",
            };
            writeln!(
                f,
                "n_A = {}: {} ({path})",
                attempt.n_a,
                if attempt.invariant {
                    "invariant"
                } else {
                    "not invariant"
                }
            )?;
            for l in &attempt.letters {
                writeln!(
                    f,
                    "  letter {:<8} max_offdiag {:.3e} (QK {:.3e}, KQ {:.3e})",
                    l.symbol,
                    l.max_offdiag(),
                    l.max_qk,
                    l.max_kq
                )?;
            }
        }
        match &self.outcome {
            Outcome::AlreadyMinimal => writeln!(f, "result: already minimal")?,
            Outcome::Reduced { n_bar, .. } => writeln!(f, "result: reduced to n = {n_bar} qubits")?,
        }
        if let Some(v) = &self.verified {
            writeln!(
                f,
                "verification: depth {}, max deviation {:.3e}, {}",
                v.depth,
                v.max_deviation,
                if v.equal { "equal" } else { "NOT equal" }
            )?;
        }
        writeln!(f, "operation count:")?;
        write!(f, "{}", self.op_count)
    }
}
