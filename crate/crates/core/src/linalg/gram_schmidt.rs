use super::{hs_inner, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// Orthonormalizes `vectors` under the Hilbert–Schmidt inner product.
///
/// Modified Gram–Schmidt with one re-orthogonalization pass. Output order
/// follows input order. A residual norm below `tol.atol` times the largest
/// input norm is reported as rank deficiency.
pub fn gram_schmidt(vectors: &[ComplexMatrix], tol: Tolerance) -> Result<Vec<ComplexMatrix>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    if let Some(bad) = vectors.iter().position(|v| v.shape() != first.shape()) {
        return Err(Error::Dimension(format!(
            "gram_schmidt: vector {bad} has shape {:?}, expected {:?}",
            vectors[bad].shape(),
            first.shape()
        )));
    }
    let scale = vectors
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(0.0, f64::max);
    let threshold = tol.atol * scale;

    let mut basis: Vec<ComplexMatrix> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = inner(q, &w);
                axpy(&mut w, -c, q);
            }
        }
        let residual = w.frobenius_norm();
        if residual <= threshold || residual == 0.0 {
            return Err(Error::RankDeficient { index, residual });
        }
        basis.push(w.scale_real(1.0 / residual));
    }
    Ok(basis)
}

fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::C64 {
    // Shapes were checked up front.
    hs_inner(a, b).unwrap_or_default()
}

fn axpy(y: &mut ComplexMatrix, alpha: crate::C64, x: &ComplexMatrix) {
    for i in 0..y.rows() {
        for j in 0..y.cols() {
            y[(i, j)] += alpha * x[(i, j)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_orthonormal_is_unchanged() {
        let e11 = ComplexMatrix::unit(2, 2, 0, 0);
        let e22 = ComplexMatrix::unit(2, 2, 1, 1);
        let out = gram_schmidt(&[e11.clone(), e22.clone()], Tolerance::default()).unwrap();
        assert_eq!(out, vec![e11, e22]);
    }

    #[test]
    fn hand_worked_pair() {
        let e11 = ComplexMatrix::unit(2, 2, 0, 0);
        let e22 = ComplexMatrix::unit(2, 2, 1, 1);
        let out = gram_schmidt(&[e11.clone(), &e11 + &e22], Tolerance::default()).unwrap();
        assert!(out[0].max_abs_diff(&e11) < 1e-15);
        assert!(out[1].max_abs_diff(&e22) < 1e-15);
    }

    #[test]
    fn dependent_input_is_rejected() {
        let e11 = ComplexMatrix::unit(2, 2, 0, 0);
        let err = gram_schmidt(&[e11.clone(), e11.scale_real(2.0)], Tolerance::default());
        assert!(matches!(err, Err(Error::RankDeficient { index: 1, .. })));
    }
}
