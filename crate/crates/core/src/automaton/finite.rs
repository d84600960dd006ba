use std::f64::consts::TAU;

use crate::linalg::{unitary_eigenvalues, ComplexMatrix, Tolerance};
use crate::{QuantumAutomaton, Result};

/// Smallest `p <= max_p` with `U^p = I`.
///
/// Candidates are found from the eigenvalue phases (each must lie within
/// `tol.atol` of some `2 pi j / p`) and then confirmed by forming `U^p`.
pub fn finiteness_period(u: &ComplexMatrix, max_p: usize, tol: Tolerance) -> Result<Option<usize>> {
    let phases: Vec<f64> = unitary_eigenvalues(u)?.iter().map(|z| z.arg()).collect();
    let identity = ComplexMatrix::identity(u.rows());
    for p in 1..=max_p {
        let pf = p as f64;
        let on_grid = phases.iter().all(|&theta| {
            let turns = pf * theta / TAU;
            (turns - turns.round()).abs() * TAU / pf <= tol.atol
        });
        if on_grid && u.pow(p as u64).max_abs_diff(&identity) <= tol.bound(1.0) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinitenessVerdict {
    /// Every letter has a period and all letters commute, so the generated
    /// group is finite.
    Finite,
    /// Some letter has no period up to the trusted bound.
    Infinite,
    /// Neither condition could be established.
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinitenessReport {
    pub verdict: FinitenessVerdict,
    pub max_period: usize,
    /// Per-letter period, in alphabet order.
    pub periods: Vec<(String, Option<usize>)>,
    /// Letter pairs whose commutator exceeds the tolerance, with its max entry.
    pub noncommuting: Vec<(String, String, f64)>,
}

/// Decides whether the set of reachable states is finite, as far as the
/// per-letter period and commutativity tests allow.
///
/// A letter without a period up to `max_p` only yields `Infinite` when
/// `trust_period_bound` is set and `max_p >= 4^n`; the `4^n` bound does not
/// hold in general (a one-qubit phase gate can have any period), so by default
/// that case reports `Unknown`.
pub fn is_finite_automaton(
    m: &QuantumAutomaton,
    max_p: Option<usize>,
    trust_period_bound: bool,
    tol: Tolerance,
) -> Result<FinitenessReport> {
    let bound = 1usize << (2 * m.n());
    let max_period = max_p.unwrap_or(bound).max(1);
    let mut periods = Vec::with_capacity(m.alphabet().len());
    for (symbol, u) in m.letters() {
        periods.push((symbol.to_string(), finiteness_period(u, max_period, tol)?));
    }
    let mut noncommuting = Vec::new();
    let letters: Vec<_> = m.letters().collect();
    for (i, (a, ua)) in letters.iter().enumerate() {
        for (b, ub) in &letters[i + 1..] {
            let c = ua.commutes_with(ub);
            if c > tol.bound(1.0) {
                noncommuting.push((a.to_string(), b.to_string(), c));
            }
        }
    }
    let all_periodic = periods.iter().all(|(_, p)| p.is_some());
    let verdict = if !all_periodic {
        if trust_period_bound && max_period >= bound {
            FinitenessVerdict::Infinite
        } else {
            FinitenessVerdict::Unknown
        }
    } else if noncommuting.is_empty() {
        FinitenessVerdict::Finite
    } else {
        FinitenessVerdict::Unknown
    };
    Ok(FinitenessReport {
        verdict,
        max_period,
        periods,
        noncommuting,
    })
}
