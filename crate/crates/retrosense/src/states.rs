//! Quantum states and Hermitian observables on finite-dimensional composite
//! spaces, plus the shared construction primitives (tensor products, partial
//! trace, generator exponentials, optimal probes).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eigen, hermiticity_deviation, identity, kron, kron_vec, CMatrix, CVector, C64,
    ONE, ZERO,
};

pub const NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of density operators may dip this far below zero before we
/// reject them; smaller negative values are treated as exact zeros.
pub const PSD_FLOOR: f64 = -1e-9;

/// Pure state on a composite space; `dims` lists the subsystem dimensions and
/// their product equals the amplitude count.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl StateVector {
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} do not match {} amplitudes",
                dims,
                amplitudes.len()
            )));
        }
        if dims.contains(&0) {
            return Err(Error::DimensionMismatch("zero-dimensional factor".into()));
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq,
                tol: NORM_TOL,
            });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales to unit norm before validating; for amplitudes produced by
    /// long numerical pipelines.
    pub fn normalized(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        let n = amplitudes.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized {
                norm_sq: 0.0,
                tol: NORM_TOL,
            });
        }
        Self::new(amplitudes.scale(1.0 / n), dims)
    }

    /// Computational basis state |k> on a single d-dimensional factor.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[k] = ONE;
        Self {
            amplitudes,
            dims: vec![dim],
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Reinterprets the same amplitudes with a different factorization.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::new(self.amplitudes.clone(), dims)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            dims,
        }
    }

    /// Applies a (same-dimension) operator and renormalizes away the
    /// 1e-15-level drift of unitaries built from eigendecompositions.
    pub fn apply(&self, op: &CMatrix) -> Result<Self> {
        if op.ncols() != self.dim() || op.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, state has {} amplitudes",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        Self::normalized(op * &self.amplitudes, self.dims.clone())
    }

    pub fn expectation(&self, op: &HermitianOperator) -> Result<f64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch(
                "observable does not match state dimension".into(),
            ));
        }
        Ok(self.amplitudes.dotc(&(op.matrix() * &self.amplitudes)).re)
    }

    pub fn to_density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator {
            matrix: m,
            dims: self.dims.clone(),
        }
    }
}

/// Mixed state: Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != total {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, dims {:?} require {}",
                matrix.nrows(),
                matrix.ncols(),
                dims,
                total
            )));
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > DENSITY_HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let (eigs, _) = hermitian_eigen(&matrix);
        if let Some(&min) = eigs.first() {
            if min < PSD_FLOOR {
                return Err(Error::NotPositive {
                    min_eigenvalue: min,
                });
            }
        }
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity(dim).scale(1.0 / dim as f64),
            dims: vec![dim],
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::new(self.matrix.clone(), dims)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    /// Ascending eigenvalues, clipped at the PSD floor.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .0
            .into_iter()
            .map(|v| v.max(0.0))
            .collect()
    }

    pub fn expectation(&self, op: &HermitianOperator) -> Result<f64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch(
                "observable does not match state dimension".into(),
            ));
        }
        Ok((op.matrix() * &self.matrix).trace().re)
    }
}

/// Hermitian matrix wrapper; generators, observables, quadratures.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Deterministically ordered eigendecomposition (ascending; rephased).
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.matrix)
    }

    /// Squared gap between extreme eigenvalues.
    pub fn spectral_gap_squared(&self) -> f64 {
        let (vals, _) = self.eigen();
        let gap = vals[vals.len() - 1] - vals[0];
        gap * gap
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: kron(&self.matrix, &other.matrix),
        }
    }
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -linalg::I, linalg::I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn hadamard() -> CMatrix {
    let h = 1.0 / 2f64.sqrt();
    CMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]).scale(h)
}

/// n . sigma for a unit 3-vector n; eigenvalues are exactly +-1.
pub fn pauli_direction(n: [f64; 3]) -> Result<HermitianOperator> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitVector { norm });
    }
    let m = pauli_x().scale(n[0]) + pauli_y().scale(n[1]) + pauli_z().scale(n[2]);
    HermitianOperator::new(m)
}

/// e^{-i alpha H}; unitary to machine precision for every alpha.
pub fn unitary_from_generator(h: &HermitianOperator, alpha: f64) -> CMatrix {
    linalg::exp_neg_i_alpha(h.matrix(), alpha)
}

/// Equal superposition of the extremal eigenvectors of `h`,
/// (|h_min> + e^{-i phi} |h_max>)/sqrt(2).
///
/// Degenerate extremal eigenvalues resolve to the first eigenvector in the
/// crate's deterministic ordering (ascending eigenvalues, largest-entry
/// rephasing); any choice inside the degenerate subspace gives the same
/// Fisher information.
pub fn optimal_probe(h: &HermitianOperator, phi: f64) -> Result<StateVector> {
    let d = h.dim();
    if d < 2 {
        return Err(Error::InvalidParameter(
            "optimal probe needs dimension >= 2".into(),
        ));
    }
    let (_, vectors) = h.eigen();
    let vmin = vectors.column(0);
    let vmax = vectors.column(d - 1);
    let phase = C64::from_polar(1.0, -phi);
    let amps = (vmin + vmax * phase).scale(1.0 / 2f64.sqrt());
    StateVector::new(amps, vec![d])
}

/// Tensor product of raw operators (matrices).
pub fn tensor_op(a: &CMatrix, b: &CMatrix) -> CMatrix {
    kron(a, b)
}

/// Reduced state on the kept subsystems (ascending `keep` order).
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let dims = rho.dims();
    let n = dims.len();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&k| k >= n) {
        return Err(Error::InvalidSubsystem(format!(
            "keep = {:?} for {} subsystems",
            keep, n
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_total: usize = traced_dims.iter().product();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let unravel = |mut flat: usize, ds: &[usize]| -> Vec<usize> {
        let mut idx = vec![0usize; ds.len()];
        for i in (0..ds.len()).rev() {
            idx[i] = flat % ds[i];
            flat /= ds[i];
        }
        idx
    };

    let mut out = DMatrix::zeros(out_dim, out_dim);
    for row_out in 0..out_dim {
        let kept_row = unravel(row_out, &kept_dims);
        for col_out in 0..out_dim {
            let kept_col = unravel(col_out, &kept_dims);
            let mut acc = ZERO;
            for t in 0..traced_total {
                let tr = unravel(t, &traced_dims);
                let mut row_full = 0usize;
                let mut col_full = 0usize;
                for (pos, &sub) in keep.iter().enumerate() {
                    row_full += kept_row[pos] * strides[sub];
                    col_full += kept_col[pos] * strides[sub];
                }
                for (pos, &sub) in traced.iter().enumerate() {
                    row_full += tr[pos] * strides[sub];
                    col_full += tr[pos] * strides[sub];
                }
                acc += rho.matrix()[(row_full, col_full)];
            }
            out[(row_out, col_out)] = acc;
        }
    }
    DensityOperator::new(out, kept_dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn ket(v: &[C64]) -> CVector {
        CVector::from_row_slice(v)
    }

    #[test]
    fn basis_tensor_product() {
        let z0 = StateVector::basis(2, 0);
        let joint = z0.tensor(&z0);
        assert_eq!(joint.dims(), &[2, 2]);
        assert!((joint.amplitudes()[0] - ONE).norm() < 1e-15);
        for k in 1..4 {
            assert!(joint.amplitudes()[k].norm() < 1e-15);
        }
    }

    #[test]
    fn bit_flip_on_first_factor() {
        let z0 = StateVector::basis(2, 0);
        let joint = z0.tensor(&z0);
        let op = tensor_op(&pauli_x(), &identity(2));
        let flipped = joint.apply(&op).unwrap();
        // |00> -> |10>
        assert!((flipped.amplitudes()[2] - ONE).norm() < 1e-12);
    }

    #[test]
    fn singlet_norm() {
        let s = 1.0 / 2f64.sqrt();
        let psi = StateVector::new(
            ket(&[ZERO, C64::new(s, 0.0), C64::new(-s, 0.0), ZERO]),
            vec![2, 2],
        )
        .unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        let err = StateVector::new(ket(&[ONE, ONE]), vec![2]);
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn singlet_marginals_are_maximally_mixed() {
        let s = 1.0 / 2f64.sqrt();
        let psi = StateVector::new(
            ket(&[ZERO, C64::new(s, 0.0), C64::new(-s, 0.0), ZERO]),
            vec![2, 2],
        )
        .unwrap();
        let rho = psi.to_density();
        for keep in [[0usize], [1usize]] {
            let red = partial_trace(&rho, &keep).unwrap();
            assert!(max_abs_diff(red.matrix(), &identity(2).scale(0.5)) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = StateVector::new(ket(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]), vec![2])
            .unwrap()
            .to_density();
        let b = DensityOperator::maximally_mixed(3);
        let joint = a.tensor(&b);
        let red_a = partial_trace(&joint, &[0]).unwrap();
        let red_b = partial_trace(&joint, &[1]).unwrap();
        assert!(max_abs_diff(red_a.matrix(), a.matrix()) < 1e-12);
        assert!(max_abs_diff(red_b.matrix(), b.matrix()) < 1e-12);
        assert!((red_a.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = DensityOperator::maximally_mixed(4)
            .with_dims(vec![2, 2])
            .unwrap();
        assert!(matches!(
            partial_trace(&rho, &[2]),
            Err(Error::InvalidSubsystem(_))
        ));
    }

    #[test]
    fn pauli_direction_eigenvalues() {
        let n = {
            let v = [0.3f64, -0.7, 0.2];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            [v[0] / norm, v[1] / norm, v[2] / norm]
        };
        let op = pauli_direction(n).unwrap();
        let (vals, _) = op.eigen();
        assert!((vals[0] + 1.0).abs() < 1e-10);
        assert!((vals[1] - 1.0).abs() < 1e-10);
        assert!(matches!(
            pauli_direction([0.5, 0.0, 0.0]),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn generator_unitary_cases() {
        let h = HermitianOperator::new(pauli_z().scale(0.5)).unwrap();
        let u = unitary_from_generator(&h, 0.0);
        assert!(max_abs_diff(&u, &identity(2)) < 1e-14);
        let u = unitary_from_generator(&h, std::f64::consts::PI);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2)).norm() < 1e-12);
    }

    #[test]
    fn optimal_probe_two_level_is_sigma_x_eigenstate() {
        let h = HermitianOperator::new(pauli_z().scale(0.5)).unwrap();
        let probe = optimal_probe(&h, 0.0).unwrap();
        let sx = HermitianOperator::new(pauli_x()).unwrap();
        let exp = probe.expectation(&sx).unwrap();
        assert!((exp.abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn optimal_probe_extremal_selection() {
        let m = CMatrix::from_diagonal(&ket(&[ZERO, ONE, C64::new(3.0, 0.0)]));
        let h = HermitianOperator::new(m).unwrap();
        let probe = optimal_probe(&h, 0.0).unwrap();
        assert!((probe.amplitudes()[0].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(probe.amplitudes()[1].norm() < 1e-12);
        assert!((probe.amplitudes()[2].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn optimal_probe_rejects_dim_one() {
        let h = HermitianOperator::new(identity(1)).unwrap();
        assert!(optimal_probe(&h, 0.0).is_err());
    }
}
