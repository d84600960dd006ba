//! Seeded random instances.
//!
//! Haar unitaries come from the QR decomposition of a complex Ginibre matrix
//! with the phases of `R`'s diagonal moved into `Q`.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::automaton::Observable;
use crate::linalg::{kron, qr, ComplexMatrix};
use crate::{Error, QuantumAutomaton, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// Initial state and every letter factor across the cut after `n1`.
    Product,
    /// A product instance whose first letter is preceded by a CNOT from
    /// qubit `n1` to qubit `n1 + 1`.
    Entangling,
    /// Haar unitaries on all qubits and a random pure initial state.
    Random,
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(Self::Product),
            "entangling" => Ok(Self::Entangling),
            "random" => Ok(Self::Random),
            other => Err(Error::Usage(format!(
                "unknown instance kind `{other}` (expected product, entangling or random)"
            ))),
        }
    }
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let (q, r) = qr(&ginibre(dim, rng));
    let phases: Vec<C64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    q.matmul(&ComplexMatrix::diag(&phases))
}

/// Full-rank mixed state `G G^dagger / Tr`.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    hermitize(&w.scale_real(1.0 / tr))
}

pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
    ComplexMatrix::outer(&v)
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

/// CNOT on `n` qubits with 1-based control and target (qubit 1 is the most
/// significant bit).
pub fn cnot(n: usize, control: usize, target: usize) -> ComplexMatrix {
    assert!(control != target && (1..=n).contains(&control) && (1..=n).contains(&target));
    let dim = 1usize << n;
    let cbit = 1usize << (n - control);
    let tbit = 1usize << (n - target);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        let y = if x & cbit != 0 { x ^ tbit } else { x };
        m[(y, x)] = C64::new(1.0, 0.0);
    }
    m
}

fn symbol(k: usize) -> String {
    ((b'a' + k as u8) as char).to_string()
}

/// Deterministic instance for a fixed seed. The observable is Pauli Z on
/// qubit 1, extended over the `n1` measured qubits.
pub fn gen_instance(
    kind: InstanceKind,
    n: usize,
    n1: usize,
    letters: usize,
    seed: u64,
) -> Result<QuantumAutomaton> {
    if n1 == 0 || n1 > n || n > 10 {
        return Err(Error::Usage(format!(
            "need 1 <= n1 <= n <= 10 (n={n}, n1={n1})"
        )));
    }
    if !(1..=26).contains(&letters) {
        return Err(Error::Usage(format!(
            "alphabet size {letters} outside 1..=26"
        )));
    }
    if kind == InstanceKind::Entangling && n1 == n {
        return Err(Error::Usage("entangling instances need n > n1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let da = 1usize << n1;
    let db = 1usize << (n - n1);
    let local = |rng: &mut ChaCha8Rng| {
        let v = haar_unitary(da, rng);
        if n > n1 {
            kron(&v, &haar_unitary(db, rng))
        } else {
            v
        }
    };
    let (rho0, mut unitaries): (ComplexMatrix, Vec<ComplexMatrix>) = match kind {
        InstanceKind::Product | InstanceKind::Entangling => {
            let rho_a = random_density(da, &mut rng);
            let rho0 = if n > n1 {
                kron(&rho_a, &random_density(db, &mut rng))
            } else {
                rho_a
            };
            (rho0, (0..letters).map(|_| local(&mut rng)).collect())
        }
        InstanceKind::Random => {
            let dim = 1usize << n;
            let rho0 = random_pure_state(dim, &mut rng);
            (
                rho0,
                (0..letters).map(|_| haar_unitary(dim, &mut rng)).collect(),
            )
        }
    };
    if kind == InstanceKind::Entangling {
        unitaries[0] = cnot(n, n1, n1 + 1).matmul(&unitaries[0]);
    }
    QuantumAutomaton::new(
        n,
        n1,
        rho0,
        unitaries
            .into_iter()
            .enumerate()
            .map(|(k, u)| (symbol(k), u))
            .collect(),
        Observable::z_on_first(n1),
    )
}
