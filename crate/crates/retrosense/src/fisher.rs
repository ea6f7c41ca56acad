//! Classical and quantum Fisher information with central finite differences,
//! plus the Cramer-Rao bound.
//!
//! These routines are the cross-checks for every protocol module, so they stay
//! deliberately simple: a parameterized family is evaluated at alpha0 and
//! alpha0 +- step, and derivatives come from the central difference. Halving
//! the step changes smooth-family results by well under 1e-4 relative (see the
//! property tests).

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};
use crate::states::{DensityOperator, StateVector};

/// Outcomes below this probability are skipped in the FI sum; the summand
/// p (d log p)^2 has the limit contribution (dp)^2 / p, which is included
/// whenever p is resolvable.
pub const PROBABILITY_CUTOFF: f64 = 1e-12;
/// Eigenvalue-pair cutoff in the symmetric-logarithmic-derivative sum.
pub const SLD_CUTOFF: f64 = 1e-10;
const DISTRIBUTION_SUM_TOL: f64 = 1e-10;

/// Default central-difference step at evaluation point `alpha0`.
pub fn default_step(alpha0: f64) -> f64 {
    1e-4 * alpha0.abs().max(1.0)
}

/// How an information value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiMethod {
    Analytic,
    FiniteDifference,
    Sld,
}

/// A single Fisher-information value at one evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct FiResult {
    pub value: f64,
    pub alpha0: f64,
    pub method: FiMethod,
}

impl FiResult {
    fn clipped(value: f64, alpha0: f64, method: FiMethod) -> Self {
        Self {
            value: value.max(0.0),
            alpha0,
            method,
        }
    }
}

/// Outcome distribution depending on a real parameter.
pub struct ParamDistribution {
    labels: Vec<String>,
    eval: Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
}

impl ParamDistribution {
    pub fn new<F>(labels: Vec<String>, eval: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            labels,
            eval: Box::new(eval),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Evaluates and validates the distribution at `alpha`.
    pub fn probabilities(&self, alpha: f64) -> Result<Vec<f64>> {
        let p = (self.eval)(alpha);
        if p.len() != self.labels.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for {} labels",
                p.len(),
                self.labels.len()
            )));
        }
        let mut sum = 0.0;
        for (i, &v) in p.iter().enumerate() {
            if v < -PROBABILITY_CUTOFF || !v.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {v} at outcome {i} (alpha = {alpha})"
                )));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum} at alpha = {alpha}"
            )));
        }
        Ok(p)
    }
}

/// Pure-state family alpha -> |psi_alpha>.
pub struct PureFamily {
    eval: Box<dyn Fn(f64) -> StateVector + Send + Sync>,
}

impl PureFamily {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64) -> StateVector + Send + Sync + 'static,
    {
        Self {
            eval: Box::new(eval),
        }
    }

    pub fn state(&self, alpha: f64) -> StateVector {
        (self.eval)(alpha)
    }
}

/// Mixed-state family alpha -> rho_alpha.
pub struct MixedFamily {
    eval: Box<dyn Fn(f64) -> DensityOperator + Send + Sync>,
}

impl MixedFamily {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64) -> DensityOperator + Send + Sync + 'static,
    {
        Self {
            eval: Box::new(eval),
        }
    }

    pub fn state(&self, alpha: f64) -> DensityOperator {
        (self.eval)(alpha)
    }
}

/// Classical Fisher information sum_x p_x (d_alpha log p_x)^2.
pub fn classical_fi(dist: &ParamDistribution, alpha0: f64, step: f64) -> Result<FiResult> {
    if step <= 0.0 {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let p0 = dist.probabilities(alpha0)?;
    let pp = dist.probabilities(alpha0 + step)?;
    let pm = dist.probabilities(alpha0 - step)?;
    let mut fi = 0.0;
    for x in 0..p0.len() {
        if p0[x] >= PROBABILITY_CUTOFF {
            let dp = (pp[x] - pm[x]) / (2.0 * step);
            fi += dp * dp / p0[x];
        }
    }
    Ok(FiResult::clipped(fi, alpha0, FiMethod::FiniteDifference))
}

/// Quantum Fisher information of a pure family,
/// 4 (<d psi|d psi> - |<psi|d psi>|^2).
pub fn qfi_pure(family: &PureFamily, alpha0: f64, step: f64) -> Result<FiResult> {
    if step <= 0.0 {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let psi0 = family.state(alpha0);
    let psip = family.state(alpha0 + step);
    let psim = family.state(alpha0 - step);
    if psip.dim() != psi0.dim() || psim.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch(
            "family dimension changed with alpha".into(),
        ));
    }
    let dpsi: CVector = (psip.amplitudes() - psim.amplitudes()).scale(1.0 / (2.0 * step));
    let dd = dpsi.dotc(&dpsi).re;
    let overlap: C64 = psi0.amplitudes().dotc(&dpsi);
    let qfi = 4.0 * (dd - overlap.norm_sqr());
    Ok(FiResult::clipped(qfi, alpha0, FiMethod::FiniteDifference))
}

/// Quantum Fisher information of a mixed family through the
/// symmetric-logarithmic-derivative sum
/// 2 sum_{j,k: l_j + l_k > cutoff} |<j|d rho|k>|^2 / (l_j + l_k).
pub fn qfi_mixed(family: &MixedFamily, alpha0: f64, step: f64) -> Result<FiResult> {
    if step <= 0.0 {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let rho0 = family.state(alpha0);
    let rhop = family.state(alpha0 + step);
    let rhom = family.state(alpha0 - step);
    if rhop.dim() != rho0.dim() || rhom.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch(
            "family dimension changed with alpha".into(),
        ));
    }
    let drho = (rhop.matrix() - rhom.matrix()).scale(1.0 / (2.0 * step));
    let (lams, vecs) = crate::linalg::hermitian_eigen(rho0.matrix());
    let in_basis = vecs.adjoint() * drho * &vecs;
    let mut qfi = 0.0;
    let n = lams.len();
    for j in 0..n {
        for k in 0..n {
            let denom = lams[j].max(0.0) + lams[k].max(0.0);
            if denom > SLD_CUTOFF {
                qfi += 2.0 * in_basis[(j, k)].norm_sqr() / denom;
            }
        }
    }
    Ok(FiResult::clipped(qfi, alpha0, FiMethod::Sld))
}

/// Upper bound (Delta H)^2 on the QFI of e^{-i alpha H} families: the squared
/// spectral gap of the generator.
pub fn generator_qfi_bound(h: &crate::states::HermitianOperator) -> f64 {
    h.spectral_gap_squared()
}

/// Cramer-Rao lower bound 1/(N I) on the variance of any unbiased estimator.
pub fn cramer_rao(fi: &FiResult, trials: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if fi.value <= 0.0 {
        return Err(Error::ZeroFisherInformation);
    }
    Ok(1.0 / (trials as f64 * fi.value))
}

/// Outcome probabilities of a fixed POVM on a state.
pub fn povm_probabilities(povm: &[crate::linalg::CMatrix], rho: &DensityOperator) -> Vec<f64> {
    povm.iter()
        .map(|m| (m * rho.matrix()).trace().re.max(0.0))
        .collect()
}
