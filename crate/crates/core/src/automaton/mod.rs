//! The automaton model: an initial density matrix on `n` qubits, one unitary
//! per letter, and an observable on the leading `n1` qubits.
//!
//! A word acts by successive conjugation, first letter first:
//! `rho_{w s} = U_s rho_w U_s^dagger`, so `U_{w s} = U_s U_w`.

mod finite;
mod observable;
mod sober;

use std::fmt;

use num_complex::Complex64 as C64;

use crate::linalg::{self, partial_trace, ComplexMatrix, Tolerance};
use crate::par::{self, Strategy};
use crate::{Error, Result};

pub use finite::{finiteness_period, is_finite_automaton, FinitenessReport, FinitenessVerdict};
pub use observable::{Observable, EIGENVALUE_GAP};
pub use sober::{factor_product, sober_reduce};

/// Default cap on the number of words a behavior enumeration may visit.
pub const DEFAULT_WORD_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumAutomaton {
    n: usize,
    n1: usize,
    rho0: ComplexMatrix,
    alphabet: Vec<String>,
    unitaries: Vec<ComplexMatrix>,
    observable: Observable,
}

impl QuantumAutomaton {
    /// Assembles an automaton after checking shapes only. Use
    /// [`QuantumAutomaton::validate`] for the physical invariants, or
    /// [`QuantumAutomaton::new`] to do both.
    pub fn from_parts(
        n: usize,
        n1: usize,
        rho0: ComplexMatrix,
        letters: Vec<(String, ComplexMatrix)>,
        observable: Observable,
    ) -> Result<Self> {
        if n == 0 || n1 == 0 || n1 > n {
            return Err(Error::Dimension(format!(
                "qubit counts must satisfy 1 <= n1 <= n (n={n}, n1={n1})"
            )));
        }
        if n > 12 {
            return Err(Error::Dimension(format!(
                "{n} qubits is beyond dense simulation"
            )));
        }
        let dim = 1usize << n;
        if rho0.shape() != (dim, dim) {
            return Err(Error::Dimension(format!(
                "rho0 is {}x{}, expected {dim}x{dim}",
                rho0.rows(),
                rho0.cols()
            )));
        }
        for (symbol, u) in &letters {
            if u.shape() != (dim, dim) {
                return Err(Error::Dimension(format!(
                    "unitary `{symbol}` is {}x{}, expected {dim}x{dim}",
                    u.rows(),
                    u.cols()
                )));
            }
        }
        if observable.qubits() != n1 {
            return Err(Error::Dimension(format!(
                "observable acts on {} qubits, expected n1 = {n1}",
                observable.qubits()
            )));
        }
        let (alphabet, unitaries) = letters.into_iter().unzip();
        Ok(Self {
            n,
            n1,
            rho0,
            alphabet,
            unitaries,
            observable,
        })
    }

    pub fn new(
        n: usize,
        n1: usize,
        rho0: ComplexMatrix,
        letters: Vec<(String, ComplexMatrix)>,
        observable: Observable,
    ) -> Result<Self> {
        let m = Self::from_parts(n, n1, rho0, letters, observable)?;
        let report = m.validate(Tolerance::default());
        if report.is_empty() {
            Ok(m)
        } else {
            Err(Error::Validation(report))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn rho0(&self) -> &ComplexMatrix {
        &self.rho0
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn letters(&self) -> impl Iterator<Item = (&str, &ComplexMatrix)> {
        self.alphabet
            .iter()
            .map(String::as_str)
            .zip(&self.unitaries)
    }

    pub fn symbol_index(&self, symbol: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn unitary(&self, symbol: &str) -> Result<&ComplexMatrix> {
        Ok(&self.unitaries[self.symbol_index(symbol)?])
    }

    /// Lists every violated invariant with its magnitude; empty iff valid.
    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut report = ValidationReport::default();
        let bound = tol.bound(1.0);

        let herm = self.rho0.max_abs_diff(&self.rho0.adjoint());
        if herm > tol.bound(self.rho0.max_abs()) {
            report.push("rho0", ViolationKind::Hermiticity, herm);
        }
        let trace_dev = (self.rho0.trace() - C64::new(1.0, 0.0)).norm();
        if trace_dev > bound {
            report.push("rho0", ViolationKind::Trace, trace_dev);
        }
        let min_eig = linalg::min_eigenvalue(&self.rho0);
        if min_eig < -tol.atol {
            report.push("rho0", ViolationKind::Positivity, -min_eig);
        }

        for (k, symbol) in self.alphabet.iter().enumerate() {
            if symbol.is_empty() {
                report.push("alphabet", ViolationKind::EmptySymbol, k as f64);
            }
            if self.alphabet[..k].contains(symbol) {
                report.push(
                    format!("alphabet[{symbol}]"),
                    ViolationKind::DuplicateSymbol,
                    1.0,
                );
            }
        }
        if self.alphabet.is_empty() {
            report.push("alphabet", ViolationKind::EmptyAlphabet, 0.0);
        }
        for (symbol, u) in self.letters() {
            let defect = linalg::unitarity_defect(u);
            if defect > bound {
                report.push(
                    format!("unitary[{symbol}]"),
                    ViolationKind::Unitarity,
                    defect,
                );
            }
        }
        for (what, magnitude) in self.observable.violations(tol) {
            report.push("observable", ViolationKind::Observable(what), magnitude);
        }
        report
    }

    /// One transition: `U_s rho U_s^dagger`.
    pub fn step(&self, rho: &ComplexMatrix, symbol: &str) -> Result<ComplexMatrix> {
        let u = self.unitary(symbol)?;
        self.check_state_shape(rho)?;
        Ok(rho.conjugate_by(u))
    }

    /// The state reached from `rho0` after reading `word` left to right.
    pub fn run_word(&self, word: &Word) -> Result<ComplexMatrix> {
        let indices = self.word_indices(word)?;
        Ok(self.run_indices(&self.rho0, &indices))
    }

    /// The unitary `U_w` of a word; `U_epsilon = I`.
    pub fn word_unitary(&self, word: &Word) -> Result<ComplexMatrix> {
        let indices = self.word_indices(word)?;
        Ok(indices
            .iter()
            .fold(ComplexMatrix::identity(self.dim()), |acc, &k| {
                self.unitaries[k].matmul(&acc)
            }))
    }

    pub(crate) fn run_indices(&self, rho: &ComplexMatrix, indices: &[usize]) -> ComplexMatrix {
        indices
            .iter()
            .fold(rho.clone(), |r, &k| r.conjugate_by(&self.unitaries[k]))
    }

    pub(crate) fn word_indices(&self, word: &Word) -> Result<Vec<usize>> {
        word.symbols()
            .iter()
            .map(|s| self.symbol_index(s))
            .collect()
    }

    fn check_state_shape(&self, rho: &ComplexMatrix) -> Result<()> {
        if rho.shape() != (self.dim(), self.dim()) {
            return Err(Error::Dimension(format!(
                "state is {:?}, automaton works on {}x{}",
                rho.shape(),
                self.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Outcome probabilities `Tr{(P_k ⊗ I) rho}`, clamped to `[0, 1]`.
    pub fn output_dist(&self, rho: &ComplexMatrix) -> Result<OutputDistribution> {
        self.check_state_shape(rho)?;
        // Tr{(P ⊗ I) rho} = Tr{P Tr_B rho}
        let reduced = partial_trace(rho, self.n, self.n1)?;
        let entries = self
            .observable
            .eigenvalues()
            .iter()
            .zip(self.observable.projectors())
            .map(|(&a, p)| {
                let prob: f64 = (0..p.rows())
                    .flat_map(|i| (0..p.cols()).map(move |j| (i, j)))
                    .map(|(i, j)| (p[(i, j)] * reduced[(j, i)]).re)
                    .sum();
                (a, prob.clamp(0.0, 1.0))
            })
            .collect();
        Ok(OutputDistribution { entries })
    }

    pub fn behavior(&self, max_len: usize) -> Result<Behavior> {
        self.behavior_with(max_len, DEFAULT_WORD_CAP, Strategy::default())
    }

    /// All words of length `<= max_len` with their output distributions,
    /// ordered by length and then lexicographically in alphabet order.
    pub fn behavior_with(
        &self,
        max_len: usize,
        cap: usize,
        strategy: Strategy,
    ) -> Result<Behavior> {
        check_budget(self.alphabet.len(), max_len, cap)?;
        let mut out = Vec::new();
        let mut level: Vec<(Vec<usize>, ComplexMatrix)> = vec![(Vec::new(), self.rho0.clone())];
        for len in 0..=max_len {
            let dists = par::map_slice(strategy, &level, |(_, rho)| self.output_dist(rho));
            for ((indices, _), dist) in level.iter().zip(dists) {
                out.push((self.indices_to_word(indices), dist?));
            }
            if len == max_len {
                break;
            }
            let letters = self.alphabet.len();
            let children = par::map_slice(strategy, &level, |(indices, rho)| {
                (0..letters)
                    .map(|k| {
                        let mut w = indices.clone();
                        w.push(k);
                        (w, rho.conjugate_by(&self.unitaries[k]))
                    })
                    .collect::<Vec<_>>()
            });
            level = children.into_iter().flatten().collect();
        }
        Ok(out)
    }

    fn indices_to_word(&self, indices: &[usize]) -> Word {
        Word::from_symbols(indices.iter().map(|&k| self.alphabet[k].clone()).collect())
    }

    /// Truncated equivalence of two states: output distributions agree on
    /// every word of length `<= max_len`.
    pub fn states_equivalent(
        &self,
        rho_i: &ComplexMatrix,
        rho_j: &ComplexMatrix,
        max_len: usize,
        tol: Tolerance,
    ) -> Result<StateEquivalence> {
        self.check_state_shape(rho_i)?;
        self.check_state_shape(rho_j)?;
        check_budget(self.alphabet.len(), max_len, DEFAULT_WORD_CAP)?;
        let mut level = vec![(rho_i.clone(), rho_j.clone())];
        let mut max_deviation = 0.0f64;
        for len in 0..=max_len {
            for (a, b) in &level {
                let dev = self.output_dist(a)?.max_deviation(&self.output_dist(b)?);
                max_deviation = max_deviation.max(dev);
            }
            if len == max_len {
                break;
            }
            level = level
                .iter()
                .flat_map(|(a, b)| {
                    self.unitaries
                        .iter()
                        .map(move |u| (a.conjugate_by(u), b.conjugate_by(u)))
                })
                .collect();
        }
        Ok(StateEquivalence {
            equivalent: max_deviation <= tol.bound(1.0),
            depth: max_len,
            max_deviation,
        })
    }
}

/// Number of words of length `<= max_len` over `letters` symbols.
pub fn word_count(letters: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(level);
        level = level.saturating_mul(letters as u128);
    }
    total
}

pub(crate) fn check_budget(letters: usize, max_len: usize, cap: usize) -> Result<()> {
    let requested = word_count(letters, max_len);
    if requested > cap as u128 {
        return Err(Error::Budget { requested, cap });
    }
    Ok(())
}

pub type Behavior = Vec<(Word, OutputDistribution)>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateEquivalence {
    pub equivalent: bool,
    pub depth: usize,
    pub max_deviation: f64,
}

/// A finite word over the automaton alphabet; empty is epsilon.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<String>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<String>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Parses user text against an alphabet. Commas or whitespace separate
    /// symbols when present; otherwise the text is split greedily into the
    /// longest matching symbols.
    pub fn parse(text: &str, alphabet: &[String]) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Self::empty());
        }
        if text.contains(|c: char| c == ',' || c.is_whitespace()) {
            let symbols: Vec<String> = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            if let Some(bad) = symbols.iter().find(|s| !alphabet.contains(s)) {
                return Err(Error::UnknownSymbol(bad.clone()));
            }
            return Ok(Self(symbols));
        }
        let mut symbols = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = alphabet
                .iter()
                .filter(|s| !s.is_empty() && rest.starts_with(s.as_str()))
                .max_by_key(|s| s.len())
                .ok_or_else(|| Error::UnknownSymbol(rest.to_string()))?;
            symbols.push(best.clone());
            rest = &rest[best.len()..];
        }
        Ok(Self(symbols))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let sep = if self.0.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            ","
        };
        write!(f, "{}", self.0.join(sep))
    }
}

/// Outcome probabilities indexed by observable eigenvalue, in increasing
/// eigenvalue order.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputDistribution {
    entries: Vec<(f64, f64)>,
}

impl OutputDistribution {
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn probability(&self, eigenvalue: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|(a, _)| *a == eigenvalue)
            .map(|&(_, p)| p)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    /// Largest entrywise probability difference; infinite when the outcome
    /// sets differ in length.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for OutputDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, p)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "  ")?;
            }
            write!(f, "{a}: {p:.12}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ViolationKind {
    Trace,
    Hermiticity,
    Positivity,
    Unitarity,
    EmptySymbol,
    DuplicateSymbol,
    EmptyAlphabet,
    Observable(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub subject: String,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ViolationKind::Trace => "trace deviates from 1".to_string(),
            ViolationKind::Hermiticity => "not hermitian".to_string(),
            ViolationKind::Positivity => "negative eigenvalue".to_string(),
            ViolationKind::Unitarity => "not unitary (max |U†U - I|)".to_string(),
            ViolationKind::EmptySymbol => "empty symbol".to_string(),
            ViolationKind::DuplicateSymbol => "duplicate symbol".to_string(),
            ViolationKind::EmptyAlphabet => "alphabet is empty".to_string(),
            ViolationKind::Observable(what) => what.clone(),
        };
        write!(f, "{}: {} ({:.3e})", self.subject, what, self.magnitude)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, subject: impl Into<String>, kind: ViolationKind, magnitude: f64) {
        self.violations.push(Violation {
            subject: subject.into(),
            kind,
            magnitude,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn find(&self, subject: &str, kind: &ViolationKind) -> Option<&Violation> {
        self.violations
            .iter()
            .find(|v| v.subject == subject && &v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}
