//! Truncated bosonic mode: ladder operators and dimensionless quadratures
//! with hbar = 1, a = (Q + iP)/sqrt(2).
//!
//! Truncation caveat: [Q, P] = i holds exactly on Fock levels 0..D-2; the top
//! level absorbs the cutoff. Operations consuming Fock states must keep the
//! top two levels below `TAIL_MASS_LIMIT` of the population.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::states::{HermitianOperator, StateVector};

pub const TAIL_MASS_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct FockSpace {
    dim: usize,
    lowering: CMatrix,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "Fock truncation dimension must be >= 2".into(),
            ));
        }
        let mut a = CMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self { dim, lowering: a })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// a
    pub fn lowering(&self) -> &CMatrix {
        &self.lowering
    }

    /// a^dag
    pub fn raising(&self) -> CMatrix {
        self.lowering.adjoint()
    }

    /// Q = (a + a^dag)/sqrt(2)
    pub fn position(&self) -> HermitianOperator {
        let q = (&self.lowering + self.lowering.adjoint()).scale(1.0 / 2f64.sqrt());
        HermitianOperator::new(q).expect("Q is Hermitian by construction")
    }

    /// P = (a - a^dag)/(i sqrt(2))
    pub fn momentum(&self) -> HermitianOperator {
        let p = (&self.lowering - self.lowering.adjoint()) * C64::new(0.0, -1.0 / 2f64.sqrt());
        HermitianOperator::new(p).expect("P is Hermitian by construction")
    }

    /// a^dag a
    pub fn number(&self) -> HermitianOperator {
        let n = self.lowering.adjoint() * &self.lowering;
        HermitianOperator::new(n).expect("number operator is Hermitian")
    }

    pub fn vacuum(&self) -> StateVector {
        StateVector::basis(self.dim, 0)
    }

    /// Squeezing generator H_sq(phi) = (i/2)(e^{-2i phi} a^2 - h.c.);
    /// e^{-i r H_sq(phi)} squeezes the phi-tilted quadrature.
    pub fn squeeze_generator(&self, phi: f64) -> HermitianOperator {
        let a2 = &self.lowering * &self.lowering;
        let phase = C64::from_polar(1.0, -2.0 * phi);
        let half_i = C64::new(0.0, 0.5);
        let m = (a2.scale(1.0) * phase - a2.adjoint() * phase.conj()) * half_i;
        HermitianOperator::new(m).expect("squeeze generator is Hermitian")
    }
}

/// Population of the top two Fock levels of a single-mode state.
pub fn tail_mass(state: &StateVector) -> f64 {
    let n = state.dim();
    let a = state.amplitudes();
    a[n - 1].norm_sqr() + a[n - 2].norm_sqr()
}

/// Errors out when the truncation guard is violated.
pub fn check_tail(state: &StateVector) -> Result<f64> {
    let mass = tail_mass(state);
    if mass >= TAIL_MASS_LIMIT {
        return Err(Error::FockTruncation {
            tail_mass: mass,
            limit: TAIL_MASS_LIMIT,
        });
    }
    Ok(mass)
}

/// Top-two-level mass of each mode's marginal for a two-mode state with dims [D, D].
pub fn two_mode_tail_mass(state: &StateVector) -> Result<(f64, f64)> {
    let dims = state.dims();
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch("expected a two-mode state".into()));
    }
    let (da, db) = (dims[0], dims[1]);
    let mut marg_a = vec![0.0; da];
    let mut marg_b = vec![0.0; db];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        marg_a[idx / db] += p;
        marg_b[idx % db] += p;
    }
    Ok((
        marg_a[da - 1] + marg_a[da - 2],
        marg_b[db - 1] + marg_b[db - 2],
    ))
}

pub fn check_two_mode_tail(state: &StateVector) -> Result<(f64, f64)> {
    let (ta, tb) = two_mode_tail_mass(state)?;
    if ta >= TAIL_MASS_LIMIT || tb >= TAIL_MASS_LIMIT {
        return Err(Error::FockTruncation {
            tail_mass: ta.max(tb),
            limit: TAIL_MASS_LIMIT,
        });
    }
    Ok((ta, tb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, ONE};

    #[test]
    fn lowering_matrix_smallest_case() {
        let f = FockSpace::new(2).unwrap();
        let a = f.lowering();
        assert!((a[(0, 1)] - ONE).norm() < 1e-15);
        assert!(a[(0, 0)].norm() < 1e-15);
        assert!(a[(1, 0)].norm() < 1e-15);
        assert!(a[(1, 1)].norm() < 1e-15);
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn vacuum_position_variance() {
        let f = FockSpace::new(10).unwrap();
        let q = f.position();
        let q2 = HermitianOperator::new(q.matrix() * q.matrix()).unwrap();
        let v = f.vacuum().expectation(&q2).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn canonical_commutator_on_retained_levels() {
        let d = 30;
        let f = FockSpace::new(d).unwrap();
        let q = f.position().matrix().clone();
        let p = f.momentum().matrix().clone();
        let comm = &q * &p - &p * &q;
        let expected = identity(d) * C64::new(0.0, 1.0);
        // Exact equality fails only in the last row/column.
        let sub = comm.view((0, 0), (d - 1, d - 1)).into_owned();
        let sub_expected = expected.view((0, 0), (d - 1, d - 1)).into_owned();
        assert!(max_abs_diff(&sub, &sub_expected) < 1e-12);
    }

    #[test]
    fn number_spectrum() {
        let d = 12;
        let f = FockSpace::new(d).unwrap();
        let (vals, _) = f.number().eigen();
        for (n, v) in vals.iter().enumerate() {
            assert!((v - n as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn tail_guard_triggers() {
        let f = FockSpace::new(4).unwrap();
        let top = StateVector::basis(4, 3);
        assert!(check_tail(&top).is_err());
        assert!(check_tail(&f.vacuum()).is_ok());
    }
}
