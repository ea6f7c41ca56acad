//! Completely positive trace-preserving maps in Kraus form.

use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs_diff, CMatrix};
use crate::states::DensityOperator;

pub const CPTP_TOL: f64 = 1e-10;

/// CPTP map as a nonempty list of equally-shaped Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus_ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<CMatrix>) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(Error::InvalidParameter("empty Kraus set".into()));
        }
        let (r, c) = (kraus_ops[0].nrows(), kraus_ops[0].ncols());
        if r != c || kraus_ops.iter().any(|k| k.nrows() != r || k.ncols() != c) {
            return Err(Error::DimensionMismatch(
                "Kraus operators must all be square with the same shape".into(),
            ));
        }
        let mut sum = CMatrix::zeros(c, c);
        for k in &kraus_ops {
            sum += k.adjoint() * k;
        }
        let dev = max_abs_diff(&sum, &identity(c));
        if dev > CPTP_TOL {
            return Err(Error::NotTracePreserving { max_dev: dev });
        }
        Ok(Self { kraus_ops })
    }

    /// Single-Kraus channel from a unitary.
    pub fn from_unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn identity_channel(dim: usize) -> Self {
        Self {
            kraus_ops: vec![identity(dim)],
        }
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].nrows()
    }

    /// sum_j K_j rho K_j^dag; the output is validated as a density operator.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if self.dim() != rho.dim() {
            return Err(Error::DimensionMismatch(format!(
                "channel dim {} vs state dim {}",
                self.dim(),
                rho.dim()
            )));
        }
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for k in &self.kraus_ops {
            out += k * rho.matrix() * k.adjoint();
        }
        DensityOperator::new(out, rho.dims().to_vec())
    }

    /// Kraus form of `self` applied after `first` (operator products K_self K_first).
    pub fn compose_after(&self, first: &KrausChannel) -> Result<Self> {
        if self.dim() != first.dim() {
            return Err(Error::DimensionMismatch(
                "composed channels must share a dimension".into(),
            ));
        }
        let mut ops = Vec::with_capacity(self.kraus_ops.len() * first.kraus_ops.len());
        for a in &self.kraus_ops {
            for b in &first.kraus_ops {
                ops.push(a * b);
            }
        }
        Self::new(ops)
    }
}
