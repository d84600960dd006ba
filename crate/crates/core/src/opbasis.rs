//! Operator bases adapted to the partial trace over trailing qubits.
//!
//! Operators on `n` qubits form a `4^n`-dimensional Hilbert–Schmidt space.
//! The computational basis is the matrix units `E_{l,l'}` in row-major order,
//! so index `r` (0-based) sits at row `r / 2^n`, column `r % 2^n`. Each unit
//! either traces to zero (set `S0`) or to exactly one image unit `j` (set
//! `S_j`). From these sets we build an orthonormal basis of the kernel `K`
//! of the partial trace and of its orthogonal complement `Q`.

use crate::linalg::{gram_schmidt, partial_trace, ComplexMatrix, Tolerance};
use crate::par::{self, Strategy};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    Computational,
    /// Computational basis of the image space on the leading `n_a` qubits.
    Image,
    Q,
    K,
    QkUnion {
        n_a: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    pub n: usize,
    pub label: BasisLabel,
    pub vectors: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `N x len` matrix whose column `i` holds vector `i` in computational
    /// coordinates.
    pub fn coordinate_matrix(&self) -> ComplexMatrix {
        let big = self.dim() * self.dim();
        let mut m = ComplexMatrix::zeros(big, self.len());
        for (i, v) in self.vectors.iter().enumerate() {
            for (r, &z) in v.data().iter().enumerate() {
                m[(r, i)] = z;
            }
        }
        m
    }

    /// Largest `|<B_i, B_j> - delta_ij|` over all pairs.
    pub fn orthonormality_defect(&self) -> f64 {
        let c = self.coordinate_matrix();
        c.adjoint()
            .matmul(&c)
            .max_abs_diff(&ComplexMatrix::identity(self.len()))
    }
}

fn check_cut(n: usize, n_a: usize) -> Result<()> {
    if n_a == 0 || n_a >= n {
        return Err(Error::Usage(format!(
            "cut needs 1 <= n_A < n (n={n}, n_A={n_a})"
        )));
    }
    Ok(())
}

/// The `4^n` matrix units in row-major order.
pub fn comp_op_basis(n: usize) -> OperatorBasis {
    let d = 1usize << n;
    OperatorBasis {
        n,
        label: BasisLabel::Computational,
        vectors: (0..d * d)
            .map(|r| ComplexMatrix::unit(d, d, r / d, r % d))
            .collect(),
    }
}

/// Computational basis of the image space, labelled as such.
pub fn image_basis(n_a: usize) -> OperatorBasis {
    OperatorBasis {
        label: BasisLabel::Image,
        ..comp_op_basis(n_a)
    }
}

/// Partition of computational-unit indices by partial-trace image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Units with zero image, ascending.
    pub s0: Vec<usize>,
    /// `sets[j]`: units whose image is image unit `j`, ascending.
    pub sets: Vec<Vec<usize>>,
}

/// Pushes every computational unit through the partial trace and sorts it
/// into `S0` or the matching `S_j`.
pub fn classify(n: usize, n_a: usize) -> Result<Classification> {
    check_cut(n, n_a)?;
    let d = 1usize << n;
    let da = 1usize << n_a;
    let mut s0 = Vec::new();
    let mut sets = vec![Vec::new(); da * da];
    for r in 0..d * d {
        let unit = ComplexMatrix::unit(d, d, r / d, r % d);
        let image = partial_trace(&unit, n, n_a)?;
        let nonzero: Vec<usize> = image
            .data()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() != 0.0)
            .map(|(j, _)| j)
            .collect();
        match nonzero.as_slice() {
            [] => s0.push(r),
            [j] if image.data()[*j] == C64::new(1.0, 0.0) => sets[*j].push(r),
            _ => {
                return Err(Error::Construction(format!(
                    "unit {r} has an image that is not a single matrix unit"
                )))
            }
        }
    }
    let m = d / da;
    if s0.len() != d * (d - da) || sets.iter().any(|s| s.len() != m) {
        return Err(Error::Construction(format!(
            "class sizes |S0|={} and |S_j| in {:?} disagree with 2^n(2^n - 2^n_A) and 2^(n-n_A)",
            s0.len(),
            sets.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    Ok(Classification { s0, sets })
}

fn combination(d: usize, members: &[usize], coefficients: &[f64]) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d, d);
    for (&r, &c) in members.iter().zip(coefficients) {
        v[(r / d, r % d)] = C64::new(c, 0.0);
    }
    v
}

fn q_vectors(n: usize, cls: &Classification) -> Vec<ComplexMatrix> {
    let d = 1usize << n;
    cls.sets
        .iter()
        .map(|members| {
            let c = 1.0 / (members.len() as f64).sqrt();
            combination(d, members, &vec![c; members.len()])
        })
        .collect()
}

/// `B_j^Q = (1/sqrt m) sum_{r in S_j} B_r`, with `m = 2^(n - n_A)`.
pub fn q_basis(n: usize, n_a: usize) -> Result<OperatorBasis> {
    let cls = classify(n, n_a)?;
    Ok(OperatorBasis {
        n,
        label: BasisLabel::Q,
        vectors: q_vectors(n, &cls),
    })
}

/// The `m - 1` kernel combinations of one class: coefficient `1/(m-1)` on
/// every member except a single `-1`, which cycles over the last `m - 1`
/// positions.
fn kernel_combinations(d: usize, members: &[usize]) -> Vec<ComplexMatrix> {
    let m = members.len();
    let x = 1.0 / (m as f64 - 1.0);
    (0..m - 1)
        .map(|shift| {
            let mut coeffs = vec![x; m];
            // shift 0 puts -1 last; later shifts rotate it towards slot 1
            coeffs[m - 1 - shift] = -1.0;
            combination(d, members, &coeffs)
        })
        .collect()
}

fn k_vectors(n: usize, cls: &Classification, strategy: Strategy) -> Result<Vec<ComplexMatrix>> {
    let d = 1usize << n;
    let mut out: Vec<ComplexMatrix> = cls
        .s0
        .iter()
        .map(|&r| ComplexMatrix::unit(d, d, r / d, r % d))
        .collect();
    let per_class = par::map_slice(strategy, &cls.sets, |members| {
        gram_schmidt(&kernel_combinations(d, members), Tolerance::default())
    });
    for (j, set) in per_class.into_iter().enumerate() {
        let set = set.map_err(|e| Error::Construction(format!("class {j}: {e}")))?;
        out.extend(set);
    }
    Ok(out)
}

/// Orthonormal basis of the partial-trace kernel: the `S0` units in index
/// order, then the orthonormalized kernel combinations of each `S_j` in `j`
/// order.
pub fn k_basis(n: usize, n_a: usize) -> Result<OperatorBasis> {
    let cls = classify(n, n_a)?;
    Ok(OperatorBasis {
        n,
        label: BasisLabel::K,
        vectors: k_vectors(n, &cls, Strategy::default())?,
    })
}

/// Q and K bases for one cut plus the transition matrix from the
/// computational basis.
#[derive(Clone, Debug)]
pub struct BasisSplit {
    pub n: usize,
    pub n_a: usize,
    pub q_basis: OperatorBasis,
    pub k_basis: OperatorBasis,
    /// Column `i` is the `i`-th vector of Q followed by K, in computational
    /// coordinates. Unitary, so its inverse is its adjoint.
    pub transition: ComplexMatrix,
    pub s0: Vec<usize>,
    pub class_sets: Vec<Vec<usize>>,
}

impl BasisSplit {
    /// `q = 4^n_A`.
    pub fn q(&self) -> usize {
        self.q_basis.len()
    }

    pub fn k(&self) -> usize {
        self.k_basis.len()
    }

    pub fn s0_size(&self) -> usize {
        self.s0.len()
    }

    /// Q vectors followed by K vectors.
    pub fn union_basis(&self) -> OperatorBasis {
        OperatorBasis {
            n: self.n,
            label: BasisLabel::QkUnion { n_a: self.n_a },
            vectors: self
                .q_basis
                .vectors
                .iter()
                .chain(&self.k_basis.vectors)
                .cloned()
                .collect(),
        }
    }
}

pub fn build_split(n: usize, n_a: usize) -> Result<BasisSplit> {
    build_split_with(n, n_a, Strategy::default())
}

pub fn build_split_with(n: usize, n_a: usize, strategy: Strategy) -> Result<BasisSplit> {
    let cls = classify(n, n_a)?;
    let q_basis = OperatorBasis {
        n,
        label: BasisLabel::Q,
        vectors: q_vectors(n, &cls),
    };
    let k_basis = OperatorBasis {
        n,
        label: BasisLabel::K,
        vectors: k_vectors(n, &cls, strategy)?,
    };
    let mut split = BasisSplit {
        n,
        n_a,
        q_basis,
        k_basis,
        transition: ComplexMatrix::zeros(1, 1),
        s0: cls.s0,
        class_sets: cls.sets,
    };
    split.transition = split.union_basis().coordinate_matrix();
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, kron};

    #[test]
    fn computational_ordering() {
        let b = comp_op_basis(1);
        assert_eq!(b.len(), 4);
        let expect = [(0, 0), (0, 1), (1, 0), (1, 1)];
        for (v, (i, j)) in b.vectors.iter().zip(expect) {
            assert_eq!(*v, ComplexMatrix::unit(2, 2, i, j));
        }
        // r = 5 (1-based) of n = 2 is E_21
        assert_eq!(comp_op_basis(2).vectors[4], ComplexMatrix::unit(4, 4, 1, 0));
        assert_eq!(comp_op_basis(2).len(), 16);
    }

    #[test]
    fn classification_sizes() {
        let c = classify(2, 1).unwrap();
        assert_eq!(c.s0.len(), 8);
        assert_eq!(c.sets.len(), 4);
        assert!(c.sets.iter().all(|s| s.len() == 2));
        // S_1 holds |00><00| (r=0) and |01><01| (r=5), both tracing to |0><0|.
        assert_eq!(c.sets[0], vec![0, 5]);

        let c = classify(3, 2).unwrap();
        assert_eq!(c.s0.len(), 32);
        assert_eq!(c.sets.len(), 16);
        assert!(c.sets.iter().all(|s| s.len() == 2));
        assert!(classify(2, 2).is_err());
    }

    #[test]
    fn q_basis_examples() {
        let q = q_basis(2, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(s, 0.0);
        expect[(1, 1)] = C64::new(s, 0.0);
        assert!(q.vectors[0].max_abs_diff(&expect) < 1e-15);
        assert!(q.orthonormality_defect() < 1e-15);
        let image = partial_trace(&q.vectors[0], 2, 1).unwrap();
        let target = ComplexMatrix::unit(2, 2, 0, 0).scale_real(2f64.sqrt());
        assert!(image.max_abs_diff(&target) < 1e-15);
        // B_j^Q = E_j ⊗ I / sqrt(m)
        for (j, v) in q.vectors.iter().enumerate() {
            let e = ComplexMatrix::unit(2, 2, j / 2, j % 2);
            assert!(v.max_abs_diff(&kron(&e, &ComplexMatrix::identity(2)).scale_real(s)) < 1e-15);
        }
    }

    #[test]
    fn k_basis_examples() {
        let k = k_basis(2, 1).unwrap();
        assert_eq!(k.len(), 12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // first class vector: (E_11 - E_22)/sqrt 2, after the eight S0 units
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(s, 0.0);
        expect[(1, 1)] = C64::new(-s, 0.0);
        assert!(k.vectors[8].max_abs_diff(&expect) < 1e-15);
        assert!(k.vectors[..8].iter().all(|v| v.max_abs() == 1.0));

        let combos = kernel_combinations(8, &classify(3, 1).unwrap().sets[0]);
        assert_eq!(combos.len(), 3);
        for v in &combos {
            let sum: C64 = v.data().iter().sum();
            assert!(sum.norm() < 1e-15);
            assert!(partial_trace(v, 3, 1).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn split_transition_is_unitary() {
        let split = build_split(2, 1).unwrap();
        assert_eq!(split.transition.shape(), (16, 16));
        assert!(is_unitary(&split.transition, Tolerance::absolute(1e-12)));
        // S0 vectors come right after the 4 Q vectors as standard columns.
        for (i, &r) in split.s0.iter().enumerate() {
            let col = split.transition.col(4 + i);
            assert!(col.iter().enumerate().all(|(s, z)| *z
                == if s == r {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }));
        }
        assert_eq!(split.s0_size(), 8);
        assert_eq!(split.q() + split.k(), 16);
    }
}
