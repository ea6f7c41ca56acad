//! Von Neumann weak-measurement model on a position grid: a discrete target
//! couples to a continuous-variable pointer through e^{-i alpha A (x) P},
//! optionally followed by postselection on the target. Postselection can
//! concentrate Fisher information about alpha into the kept trials by a
//! factor |A_w|^2 / <A^2>, where A_w is the weak value.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fisher::{classical_fi, FiResult, ParamDistribution};
use crate::linalg::{CVector, C64};
use crate::states::{HermitianOperator, StateVector};

const PROBE_NORM_TOL: f64 = 1e-8;
const BOUNDARY_TOL: f64 = 1e-8;
/// alpha |A_w| <= this fraction of the probe width counts as weak.
pub const WEAK_REGIME_FRACTION: f64 = 0.05;

/// Wavefunction sampled on a uniform position grid q_k = q0 + k dq. The grid
/// is treated as periodic with period M dq, so shifts act exactly on
/// band-limited amplitudes via Fourier phase factors.
#[derive(Debug, Clone)]
pub struct GridProbe {
    amplitudes: Vec<C64>,
    q0: f64,
    dq: f64,
}

impl GridProbe {
    pub fn new(amplitudes: Vec<C64>, q0: f64, dq: f64) -> Result<Self> {
        if amplitudes.len() < 8 {
            return Err(Error::InvalidParameter("grid too small".into()));
        }
        if dq <= 0.0 {
            return Err(Error::InvalidParameter("dq must be positive".into()));
        }
        let probe = Self { amplitudes, q0, dq };
        let norm = probe.norm_squared();
        if (norm - 1.0).abs() > PROBE_NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq: norm,
                tol: PROBE_NORM_TOL,
            });
        }
        let m = probe.amplitudes.len();
        let edge = probe.amplitudes[0]
            .norm()
            .max(probe.amplitudes[m - 1].norm());
        if edge > BOUNDARY_TOL {
            return Err(Error::InvalidParameter(format!(
                "wavefunction not contained: boundary amplitude {edge}"
            )));
        }
        Ok(probe)
    }

    /// Real Gaussian centred at q = 0 with position standard deviation
    /// `delta_phi`, on a grid of `m` points spanning [-l, l).
    pub fn gaussian(delta_phi: f64, m: usize, l: f64) -> Result<Self> {
        if delta_phi <= 0.0 {
            return Err(Error::InvalidParameter("delta_phi must be positive".into()));
        }
        let dq = 2.0 * l / m as f64;
        let q0 = -l;
        let mut amps: Vec<C64> = (0..m)
            .map(|k| {
                let q = q0 + k as f64 * dq;
                C64::new((-q * q / (4.0 * delta_phi * delta_phi)).exp(), 0.0)
            })
            .collect();
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * dq;
        let scale = 1.0 / norm.sqrt();
        for z in &mut amps {
            *z *= scale;
        }
        Self::new(amps, q0, dq)
    }

    /// Default grid: half-width 12 delta_phi, 4096 points. Contains shifted
    /// Gaussians for weak values up to ~20 in the weak regime.
    pub fn gaussian_default(delta_phi: f64) -> Result<Self> {
        Self::gaussian(delta_phi, 4096, 12.0 * delta_phi)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let (q0, dq) = (self.q0, self.dq);
        (0..self.amplitudes.len()).map(move |k| q0 + k as f64 * dq)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dq
    }

    /// <probe | other> with the dq measure.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.dq
    }

    pub fn mean_position(&self) -> f64 {
        self.positions()
            .zip(&self.amplitudes)
            .map(|(q, z)| q * z.norm_sqr())
            .sum::<f64>()
            * self.dq
            / self.norm_squared()
    }

    pub fn position_std(&self) -> f64 {
        let mean = self.mean_position();
        let var = self
            .positions()
            .zip(&self.amplitudes)
            .map(|(q, z)| (q - mean) * (q - mean) * z.norm_sqr())
            .sum::<f64>()
            * self.dq
            / self.norm_squared();
        var.sqrt()
    }

    /// Probability of each grid cell, |phi(q_k)|^2 dq.
    pub fn position_distribution(&self) -> Vec<f64> {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr() * self.dq)
            .collect()
    }

    fn fft_k(&self, m: usize) -> f64 {
        let n = self.amplitudes.len();
        let step = std::f64::consts::TAU / (n as f64 * self.dq);
        if m <= n / 2 {
            m as f64 * step
        } else {
            (m as f64 - n as f64) * step
        }
    }

    fn apply_in_momentum(&self, factor: impl Fn(f64) -> C64) -> Self {
        let n = self.amplitudes.len();
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let mut buf: Vec<Complex<f64>> = self.amplitudes.clone();
        fft.process(&mut buf);
        for (m, z) in buf.iter_mut().enumerate() {
            *z *= factor(self.fft_k(m));
        }
        ifft.process(&mut buf);
        let scale = 1.0 / n as f64;
        for z in &mut buf {
            *z *= scale;
        }
        Self {
            amplitudes: buf,
            q0: self.q0,
            dq: self.dq,
        }
    }

    /// phi(q) -> phi(q - s), exact for band-limited amplitudes.
    pub fn shifted(&self, s: f64) -> Self {
        self.apply_in_momentum(|k| C64::from_polar(1.0, -k * s))
    }

    /// Applies e^{c P} (real exponential of momentum); not unitary, callers
    /// renormalize.
    pub fn momentum_exponential(&self, c: f64) -> Self {
        self.apply_in_momentum(|k| C64::new((c * k).exp(), 0.0))
    }

    pub fn renormalized(&self) -> Result<Self> {
        let n = self.norm_squared();
        if n <= 0.0 {
            return Err(Error::OrthogonalPostselection);
        }
        let scale = 1.0 / n.sqrt();
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|z| z * scale).collect(),
            q0: self.q0,
            dq: self.dq,
        })
    }
}

/// Weak value <psi_f| A |psi_i> / <psi_f | psi_i>.
pub fn weak_value(a: &HermitianOperator, psi_i: &StateVector, psi_f: &StateVector) -> Result<C64> {
    if a.dim() != psi_i.dim() || a.dim() != psi_f.dim() {
        return Err(Error::DimensionMismatch(
            "observable and states must share a dimension".into(),
        ));
    }
    let overlap = psi_f.inner(psi_i);
    if overlap.norm() <= 1e-12 {
        return Err(Error::WeakValueUndefined {
            overlap: overlap.norm(),
        });
    }
    let numerator = psi_f.amplitudes().dotc(&(a.matrix() * psi_i.amplitudes()));
    Ok(numerator / overlap)
}

/// One weak-measurement experiment: target observable, pre- and postselected
/// target states, the pointer, and the coupling strength.
pub struct WvaSpec {
    pub observable: HermitianOperator,
    pub psi_i: StateVector,
    pub psi_f: StateVector,
    pub probe: GridProbe,
    pub alpha: f64,
}

impl WvaSpec {
    pub fn new(
        observable: HermitianOperator,
        psi_i: StateVector,
        psi_f: StateVector,
        probe: GridProbe,
        alpha: f64,
    ) -> Result<Self> {
        if alpha < 0.0 {
            return Err(Error::InvalidParameter("coupling must be >= 0".into()));
        }
        // Fails when the weak value is undefined.
        weak_value(&observable, &psi_i, &psi_f)?;
        Ok(Self {
            observable,
            psi_i,
            psi_f,
            probe,
            alpha,
        })
    }

    pub fn weak_value(&self) -> C64 {
        weak_value(&self.observable, &self.psi_i, &self.psi_f).expect("validated at construction")
    }

    /// alpha (a_max - a_min) / delta_phi; reported, not capped.
    pub fn weakness_ratio(&self) -> f64 {
        let (vals, _) = self.observable.eigen();
        let spread = vals[vals.len() - 1] - vals[0];
        self.alpha * spread / self.probe.position_std()
    }

    pub fn in_weak_regime(&self) -> bool {
        let aw = self.weak_value().norm();
        self.alpha * aw <= WEAK_REGIME_FRACTION * self.probe.position_std()
    }

    /// Eigenbranch decomposition: (a_n, c_n = <a_n|psi_i>, f_n = <a_n|psi_f>).
    fn branches(&self) -> Vec<(f64, C64, C64)> {
        let (vals, vecs) = self.observable.eigen();
        vals.iter()
            .enumerate()
            .map(|(n, &a_n)| {
                let col: CVector = vecs.column(n).into_owned();
                let c_n = col.dotc(self.psi_i.amplitudes());
                let f_n = col.dotc(self.psi_f.amplitudes());
                (a_n, c_n, f_n)
            })
            .collect()
    }
}

/// Exact coupled-and-postselected pointer state at coupling `alpha`:
/// sum_n <psi_f|a_n> c_n phi(q - alpha a_n), renormalized. Also returns the
/// postselection success probability.
pub fn couple_and_postselect(spec: &WvaSpec) -> Result<(GridProbe, f64)> {
    let (probe, p) = postselected_unnormalized(spec, spec.alpha);
    if p <= 1e-20 {
        return Err(Error::OrthogonalPostselection);
    }
    Ok((probe.renormalized()?, p))
}

fn postselected_unnormalized(spec: &WvaSpec, alpha: f64) -> (GridProbe, f64) {
    let mut amps = vec![C64::new(0.0, 0.0); spec.probe.len()];
    for (a_n, c_n, f_n) in spec.branches() {
        let shifted = spec.probe.shifted(alpha * a_n);
        let w = f_n.conj() * c_n;
        for (acc, z) in amps.iter_mut().zip(shifted.amplitudes()) {
            *acc += w * z;
        }
    }
    let out = GridProbe {
        amplitudes: amps,
        q0: spec.probe.q0,
        dq: spec.probe.dq,
    };
    let p = out.norm_squared();
    (out, p)
}

/// Pointer position distribution without postselection: the mixture
/// sum_n |c_n|^2 |phi(q - alpha a_n)|^2 dq.
pub fn traced_position_distribution(spec: &WvaSpec, alpha: f64) -> Vec<f64> {
    let mut out = vec![0.0; spec.probe.len()];
    for (a_n, c_n, _) in spec.branches() {
        let shifted = spec.probe.shifted(alpha * a_n);
        let w = c_n.norm_sqr();
        for (acc, z) in out.iter_mut().zip(shifted.amplitudes()) {
            *acc += w * z.norm_sqr() * spec.probe.dq;
        }
    }
    out
}

/// Joint target-pointer pure state after the coupling (no postselection);
/// dims are [target, grid].
pub fn coupled_joint_state(spec: &WvaSpec, alpha: f64) -> StateVector {
    let d = spec.observable.dim();
    let m = spec.probe.len();
    let (_, vecs) = spec.observable.eigen();
    let mut amps = CVector::zeros(d * m);
    let sqrt_dq = spec.probe.dq.sqrt();
    for (n, (a_n, c_n, _)) in spec.branches().iter().enumerate() {
        let shifted = spec.probe.shifted(alpha * a_n);
        let col: CVector = vecs.column(n).into_owned();
        for t in 0..d {
            let w = col[t] * c_n;
            for (k, z) in shifted.amplitudes().iter().enumerate() {
                amps[t * m + k] += w * z * sqrt_dq;
            }
        }
    }
    StateVector::normalized(amps, vec![d, m]).expect("coupling preserves norm")
}

/// Agreement report between the exact postselected pointer and the
/// weak-value approximation (shift by alpha Re A_w, then e^{alpha Im A_w P}).
#[derive(Debug, Clone)]
pub struct OverlapReport {
    /// 1 - |<approx|exact>|.
    pub overlap_deficit: f64,
    /// Phase-minimized L2 distance sqrt(2 (1 - |<approx|exact>|)); this is the
    /// quantity that scales as (alpha a_max / delta_phi)^2. The overlap
    /// deficit itself scales with its square.
    pub state_distance: f64,
    pub weakness_ratio: f64,
    pub warning: Option<String>,
}

/// Validates the first-order postselected-pointer approximation against the
/// exact evolution.
pub fn pointer_approximation_check(spec: &WvaSpec) -> Result<OverlapReport> {
    let aw = spec.weak_value();
    let (exact, _) = couple_and_postselect(spec)?;
    let approx = spec
        .probe
        .shifted(spec.alpha * aw.re)
        .momentum_exponential(spec.alpha * aw.im)
        .renormalized()?;
    let overlap = approx.inner(&exact).norm();
    let overlap_deficit = (1.0 - overlap).max(0.0);
    let warning = (!spec.in_weak_regime()).then(|| {
        format!(
            "outside weak regime: alpha |A_w| = {:.3e} vs {:.2} delta_phi",
            spec.alpha * aw.norm(),
            WEAK_REGIME_FRACTION
        )
    });
    Ok(OverlapReport {
        overlap_deficit,
        state_distance: (2.0 * overlap_deficit).sqrt(),
        weakness_ratio: spec.weakness_ratio(),
        warning,
    })
}

/// Fisher-information comparison of the two readout strategies:
/// postselection-free sensing with the best eigenstate input versus
/// postselected readout with the spec's pre/post states.
#[derive(Debug, Clone)]
pub struct FiComparison {
    /// Numeric FI of the pointer position distribution with the target held
    /// in the largest-eigenvalue eigenstate (no postselection).
    pub fi_no_ps: f64,
    /// Numeric FI of the postselected conditional position distribution.
    pub fi_ps: f64,
    /// a_max^2 / delta_phi^2.
    pub analytic_no_ps: f64,
    /// |A_w|^2 / delta_phi^2.
    pub analytic_ps: f64,
    pub success_prob: f64,
}

/// Computes the numeric FI pair and the matching analytic estimates. The
/// postselection-free baseline uses the optimal eigenstate preparation, which
/// is what the amplification ratio |A_w|^2 / <A^2> refers to.
pub fn fi_comparison(spec: &WvaSpec) -> Result<FiComparison> {
    let dphi = spec.probe.position_std();
    let (vals, vecs) = spec.observable.eigen();
    let a_max = vals[vals.len() - 1];
    let d = spec.observable.dim();

    // Baseline: target in |a_max>, no postselection; the pointer distribution
    // is a single shifted copy of |phi|^2.
    let eigstate = StateVector::normalized(vecs.column(d - 1).into_owned(), vec![d])?;
    let baseline = WvaSpec::new(
        spec.observable.clone(),
        eigstate.clone(),
        eigstate,
        spec.probe.clone(),
        spec.alpha,
    )?;
    let labels: Vec<String> = (0..spec.probe.len()).map(|k| format!("q{k}")).collect();
    let base_dist = ParamDistribution::new(labels.clone(), move |a| {
        traced_position_distribution(&baseline, a)
    });
    let step = fd_step(spec.alpha);
    let fi_no_ps = classical_fi(&base_dist, spec.alpha, step)?;

    let ps_spec = WvaSpec::new(
        spec.observable.clone(),
        spec.psi_i.clone(),
        spec.psi_f.clone(),
        spec.probe.clone(),
        spec.alpha,
    )?;
    let ps_dist = ParamDistribution::new(labels, move |a| {
        let (probe, _) = postselected_unnormalized(&ps_spec, a);
        let norm = probe.norm_squared();
        probe
            .amplitudes()
            .iter()
            .map(|z| z.norm_sqr() * probe.dq / norm)
            .collect()
    });
    let fi_ps = classical_fi(&ps_dist, spec.alpha, step)?;
    let (_, success) = couple_and_postselect(spec)?;

    let aw = spec.weak_value();
    Ok(FiComparison {
        fi_no_ps: fi_no_ps.value,
        fi_ps: fi_ps.value,
        analytic_no_ps: a_max * a_max / (dphi * dphi),
        analytic_ps: aw.norm_sqr() / (dphi * dphi),
        success_prob: success,
    })
}

fn fd_step(alpha: f64) -> f64 {
    (alpha.abs() / 20.0).max(1e-6)
}

/// FI of the exact joint target-pointer state before any measurement; the
/// accounting bound: success_prob * fi_ps can never exceed this.
pub fn joint_state_qfi(spec: &WvaSpec) -> Result<FiResult> {
    let obs = spec.observable.clone();
    let psi_i = spec.psi_i.clone();
    let probe = spec.probe.clone();
    let family = crate::fisher::PureFamily::new(move |a| {
        let s = WvaSpec {
            observable: obs.clone(),
            psi_i: psi_i.clone(),
            psi_f: psi_i.clone(),
            probe: probe.clone(),
            alpha: a.abs(),
        };
        coupled_joint_state(&s, a)
    });
    crate::fisher::qfi_pure(&family, spec.alpha, fd_step(spec.alpha))
}
