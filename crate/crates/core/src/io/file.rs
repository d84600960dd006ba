//! JSON automaton files, schema version "1".
//!
//! Complex entries are `[re, im]` pairs and matrices are arrays of rows.
//! Floats are written in shortest round-trip form, so `load(save(m))`
//! reproduces every entry bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automaton::Observable;
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::{Error, QuantumAutomaton, Result, C64};

pub const SCHEMA_VERSION: &str = "1";

type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub schema_version: String,
    pub n: usize,
    pub n1: usize,
    pub alphabet: Vec<String>,
    pub rho0: MatrixJson,
    pub unitaries: BTreeMap<String, MatrixJson>,
    pub observable: ObservableJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ObservableJson {
    Spectral {
        eigenvalues: Vec<f64>,
        projectors: Vec<MatrixJson>,
    },
    Hermitian {
        hermitian: MatrixJson,
    },
}

fn matrix_from_json(name: &str, rows: &MatrixJson, dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        let widths: Vec<usize> = rows.iter().map(Vec::len).collect();
        return Err(Error::Dimension(format!(
            "{name}: expected {dim}x{dim}, got {} rows with widths {widths:?}",
            rows.len()
        )));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    ComplexMatrix::from_vec(dim, dim, data).map_err(|e| Error::Dimension(format!("{name}: {e}")))
}

fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl AutomatonFile {
    pub fn from_automaton(m: &QuantumAutomaton) -> Self {
        let obs = m.observable();
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            n: m.n(),
            n1: m.n1(),
            alphabet: m.alphabet().to_vec(),
            rho0: matrix_to_json(m.rho0()),
            unitaries: m
                .letters()
                .map(|(s, u)| (s.to_string(), matrix_to_json(u)))
                .collect(),
            observable: ObservableJson::Spectral {
                eigenvalues: obs.eigenvalues().to_vec(),
                projectors: obs.projectors().iter().map(matrix_to_json).collect(),
            },
        }
    }

    /// Converts to an automaton without checking physical invariants.
    pub fn to_automaton_unchecked(&self) -> Result<QuantumAutomaton> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {:?} (expected {SCHEMA_VERSION:?})",
                self.schema_version
            )));
        }
        if self.n == 0 || self.n > 12 || self.n1 == 0 || self.n1 > self.n {
            return Err(Error::Dimension(format!(
                "qubit counts must satisfy 1 <= n1 <= n <= 12 (n={}, n1={})",
                self.n, self.n1
            )));
        }
        let dim = 1usize << self.n;
        let obs_dim = 1usize << self.n1;
        let rho0 = matrix_from_json("rho0", &self.rho0, dim)?;
        if let Some(extra) = self.unitaries.keys().find(|k| !self.alphabet.contains(k)) {
            return Err(Error::Parse(format!(
                "unitary `{extra}` is not in the alphabet"
            )));
        }
        let letters =
            self.alphabet
                .iter()
                .map(|s| {
                    let rows = self.unitaries.get(s).ok_or_else(|| {
                        Error::Parse(format!("no unitary given for symbol `{s}`"))
                    })?;
                    Ok((
                        s.clone(),
                        matrix_from_json(&format!("unitaries.{s}"), rows, dim)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
        let observable = match &self.observable {
            ObservableJson::Spectral {
                eigenvalues,
                projectors,
            } => {
                let projectors = projectors
                    .iter()
                    .enumerate()
                    .map(|(k, p)| {
                        matrix_from_json(&format!("observable.projectors[{k}]"), p, obs_dim)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Observable::from_spectral(eigenvalues.clone(), projectors)?
            }
            ObservableJson::Hermitian { hermitian } => {
                let a = matrix_from_json("observable.hermitian", hermitian, obs_dim)?;
                Observable::from_hermitian(&a, Tolerance::default())?
            }
        };
        QuantumAutomaton::from_parts(self.n, self.n1, rho0, letters, observable)
    }

    pub fn to_automaton(&self, tol: Tolerance) -> Result<QuantumAutomaton> {
        let m = self.to_automaton_unchecked()?;
        let report = m.validate(tol);
        if report.is_empty() {
            Ok(m)
        } else {
            Err(Error::Validation(report))
        }
    }
}

/// Parses and validates at the default tolerance.
pub fn from_json_str(text: &str) -> Result<QuantumAutomaton> {
    from_json_str_with(text, Tolerance::default())
}

pub fn from_json_str_with(text: &str, tol: Tolerance) -> Result<QuantumAutomaton> {
    let file: AutomatonFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_automaton(tol)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn write_matrix(out: &mut String, indent: &str, m: &MatrixJson) {
    out.push_str("[\n");
    for (i, row) in m.iter().enumerate() {
        let comma = if i + 1 < m.len() { "," } else { "" };
        let _ = writeln!(out, "{indent}  {}{comma}", json(row));
    }
    let _ = write!(out, "{indent}]");
}

/// Serializes with one matrix row per line.
pub fn to_json_string(m: &QuantumAutomaton) -> String {
    let file = AutomatonFile::from_automaton(m);
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"schema_version\": {},", json(&file.schema_version));
    let _ = writeln!(out, "  \"n\": {},", file.n);
    let _ = writeln!(out, "  \"n1\": {},", file.n1);
    let _ = writeln!(out, "  \"alphabet\": {},", json(&file.alphabet));
    out.push_str("  \"rho0\": ");
    write_matrix(&mut out, "  ", &file.rho0);
    out.push_str(",\n  \"unitaries\": {\n");
    for (i, (symbol, u)) in file.unitaries.iter().enumerate() {
        let _ = write!(out, "    {}: ", json(symbol));
        write_matrix(&mut out, "    ", u);
        out.push_str(if i + 1 < file.unitaries.len() {
            ",\n"
        } else {
            "\n"
        });
    }
    out.push_str("  },\n  \"observable\": {\n");
    if let ObservableJson::Spectral {
        eigenvalues,
        projectors,
    } = &file.observable
    {
        let _ = writeln!(out, "    \"eigenvalues\": {},", json(eigenvalues));
        out.push_str("    \"projectors\": [\n");
        for (k, p) in projectors.iter().enumerate() {
            out.push_str("      ");
            write_matrix(&mut out, "      ", p);
            out.push_str(if k + 1 < projectors.len() {
                ",\n"
            } else {
                "\n"
            });
        }
        out.push_str("    ]\n");
    }
    out.push_str("  }\n}\n");
    out
}

pub fn load(path: impl AsRef<Path>) -> Result<QuantumAutomaton> {
    load_with(path, Tolerance::default())
}

pub fn load_with(path: impl AsRef<Path>, tol: Tolerance) -> Result<QuantumAutomaton> {
    from_json_str_with(&std::fs::read_to_string(path)?, tol)
}

pub fn save(m: &QuantumAutomaton, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json_string(m))?;
    Ok(())
}
