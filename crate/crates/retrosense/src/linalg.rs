//! Dense complex linear algebra shared by all protocol modules.
//!
//! Everything is built on `nalgebra` dynamic matrices over `Complex<f64>`.
//! Hermitian eigendecompositions use a deterministic convention throughout the
//! crate: eigenvalues ascending, ties kept in solver order, and each
//! eigenvector rephased so its largest-magnitude entry is real and positive.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermiticity_deviation(m) <= tol
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

/// Kronecker product; the left factor is the slow (most significant) index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix with the crate-wide deterministic
/// ordering. Returns ascending real eigenvalues and the matching eigenvector
/// columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    // Symmetrize first so accumulated 1e-15-level asymmetry cannot push the
    // solver off the Hermitian branch.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &idx) in order.iter().enumerate() {
        values.push(eig.eigenvalues[idx]);
        let mut v: CVector = eig.eigenvectors.column(idx).into_owned();
        // Phase convention: largest-modulus entry made real positive.
        let mut imax = 0;
        let mut best = 0.0;
        for (k, z) in v.iter().enumerate() {
            let a = z.norm();
            if a > best {
                best = a;
                imax = k;
            }
        }
        if best > 0.0 {
            let phase = v[imax] / best;
            v.scale_mut(1.0 / v.norm());
            v *= phase.conj();
        }
        vectors.set_column(col, &v);
    }
    (values, vectors)
}

/// e^{-i alpha H} for Hermitian `H`, evaluated through the eigendecomposition
/// so the result is unitary at every alpha.
pub fn exp_neg_i_alpha(h: &CMatrix, alpha: f64) -> CMatrix {
    exp_neg_i_alpha_multi(h, &[alpha])
        .pop()
        .expect("one alpha in")
}

/// Exponentials e^{-i alpha H} at several alphas from a single
/// eigendecomposition of `H`.
pub fn exp_neg_i_alpha_multi(h: &CMatrix, alphas: &[f64]) -> Vec<CMatrix> {
    let (values, vectors) = hermitian_eigen(h);
    alphas
        .iter()
        .map(|&alpha| {
            let mut m = vectors.clone();
            for (c, &lam) in values.iter().enumerate() {
                let col = m.column(c) * C64::from_polar(1.0, -alpha * lam);
                m.set_column(c, &col);
            }
            m * vectors.adjoint()
        })
        .collect()
}

/// Extends a unit vector to a full unitary whose first column is that vector
/// (Gram-Schmidt against the standard basis, deterministic pivoting).
pub fn completion_unitary(first_column: &CVector) -> Result<CMatrix> {
    let n = first_column.len();
    let norm = first_column.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized {
            norm_sq: norm * norm,
            tol: 1e-8,
        });
    }
    let mut cols: Vec<CVector> = vec![first_column.clone()];
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = CVector::zeros(n);
        v[k] = ONE;
        for c in &cols {
            let overlap = c.dotc(&v);
            v -= c * overlap;
        }
        let r = v.norm();
        if r > 1e-6 {
            v.scale_mut(1.0 / r);
            cols.push(v);
        }
    }
    if cols.len() != n {
        return Err(Error::InvalidParameter(
            "could not complete vector to a unitary basis".into(),
        ));
    }
    let mut u = CMatrix::zeros(n, n);
    for (i, c) in cols.iter().enumerate() {
        u.set_column(i, c);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    #[test]
    fn hermitian_eigen_handles_complex_entries() {
        let (vals, vecs) = hermitian_eigen(&sigma_y());
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // Reconstruction.
        let d = CMatrix::from_diagonal(&CVector::from_iterator(
            2,
            vals.iter().map(|&v| C64::new(v, 0.0)),
        ));
        let rec = &vecs * d * vecs.adjoint();
        assert!(max_abs_diff(&rec, &sigma_y()) < 1e-12);
    }

    #[test]
    fn exp_generator_is_unitary_and_diagonal_case_exact() {
        let sz = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        let u = exp_neg_i_alpha(&(sz.scale(0.5)), std::f64::consts::PI);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2)).norm() < 1e-12);
        assert!((u[(1, 1)] - C64::from_polar(1.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-12);
        assert!(unitarity_deviation(&u) < 1e-12);
    }

    #[test]
    fn completion_produces_unitary() {
        let v = CVector::from_vec(vec![
            C64::new(0.0, 0.0),
            C64::new(1.0 / 2f64.sqrt(), 0.0),
            C64::new(-1.0 / 2f64.sqrt(), 0.0),
            C64::new(0.0, 0.0),
        ]);
        let u = completion_unitary(&v).unwrap();
        assert!(unitarity_deviation(&u) < 1e-12);
        assert!((u.column(0) - v).norm() < 1e-12);
    }
}
