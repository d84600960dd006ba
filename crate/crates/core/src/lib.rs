//! Density-operator quantum automata over qubits, and reduction of the number
//! of qubits they need.
//!
//! An automaton holds an initial density matrix on `n` qubits, one unitary per
//! input letter, and an observable measured on the leading `n1` qubits. Words
//! act by successive conjugation. [`minimizer::minimize`] looks for the
//! smallest leading subsystem whose partial-trace kernel is invariant under
//! every letter's superoperator and, when one exists, builds an equivalent
//! automaton on that subsystem.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, Hilbert–Schmidt geometry, partial
//!   trace, Gram–Schmidt, eigen/SVD bridges.
//! * [`automaton`]: the automaton model, word semantics, behaviors,
//!   finiteness tests and tensor-factor (sober) reduction.
//! * [`opbasis`]: operator bases adapted to the partial-trace map.
//! * [`superop`]: conjugation superoperators and their block structure.
//! * [`minimizer`]: the qubit-count minimization loop and its report.
//! * [`io`]: JSON automaton files and seeded instance generators.
//! * [`oracle`]: literal brute-force references used to cross-check the above.

pub mod automaton;
pub mod cost;
pub mod error;
pub mod io;
pub mod linalg;
pub mod minimizer;
pub mod opbasis;
pub mod oracle;
pub mod par;
pub mod superop;

pub use automaton::{Observable, OutputDistribution, QuantumAutomaton, Word};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerance, C64};
pub use minimizer::{minimize, MinimizationOptions, MinimizationReport};
pub use par::Strategy;
