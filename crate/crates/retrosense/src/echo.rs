//! Echo metrology: prepare with a unitary V, accumulate a weak signal under
//! e^{-i alpha H}, invert with V-dagger, and check for return to the initial
//! state. The binary return/depart statistics extract the full quantum Fisher
//! information of the evolved probe at small alpha.
//!
//! The squeezing-based instances live here too: single-mode parametric
//! amplification, two-mode SU(1,1) interferometry, and collective-spin
//! twisting generators on the Dicke ladder.

use crate::error::{Error, Result};
use crate::fisher::{
    classical_fi, default_step, qfi_pure, FiResult, ParamDistribution, PureFamily,
};
use crate::fock::{check_tail, check_two_mode_tail, FockSpace};
use crate::linalg::{exp_neg_i_alpha, kron, unitarity_deviation, CMatrix, CVector, C64};
use crate::scenario::ScenarioResult;
use crate::states::{HermitianOperator, StateVector};

/// |alpha| beyond this is outside the weak regime the small-signal expansion
/// assumes; results carry a warning instead of failing.
pub const WEAK_REGIME_LIMIT: f64 = 0.05;
const UNITARY_TOL: f64 = 1e-10;

/// One echo experiment: V, the generator H, the reference state, and the
/// signal strength.
#[derive(Debug, Clone)]
pub struct EchoSpec {
    prep: CMatrix,
    generator: HermitianOperator,
    initial: StateVector,
    pub alpha: f64,
}

impl EchoSpec {
    pub fn new(
        prep: CMatrix,
        generator: HermitianOperator,
        initial: StateVector,
        alpha: f64,
    ) -> Result<Self> {
        let d = initial.dim();
        if prep.nrows() != d || prep.ncols() != d || generator.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "V is {}x{}, H is {}x{}, state has {} amplitudes",
                prep.nrows(),
                prep.ncols(),
                generator.dim(),
                generator.dim(),
                d
            )));
        }
        let dev = unitarity_deviation(&prep);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { max_dev: dev });
        }
        Ok(Self {
            prep,
            generator,
            initial,
            alpha,
        })
    }

    pub fn prep(&self) -> &CMatrix {
        &self.prep
    }

    pub fn generator(&self) -> &HermitianOperator {
        &self.generator
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    /// The prepared probe V|0>.
    pub fn probe(&self) -> StateVector {
        self.initial
            .apply(&self.prep)
            .expect("dimensions checked at construction")
    }
}

/// Return probability p0(alpha) = |<0| V^dag e^{-i alpha H} V |0>|^2.
///
/// The depart probability is computed as the squared norm of the projection
/// residual rather than 1 - p0, which keeps it accurate when p1 ~ alpha^2
/// sits ten orders of magnitude below p0.
pub fn echo_probabilities(spec: &EchoSpec, alpha: f64) -> [f64; 2] {
    let probe = spec.probe();
    let evolved = probe
        .apply(&exp_neg_i_alpha(spec.generator().matrix(), alpha))
        .expect("dimensions checked at construction");
    let overlap = probe.inner(&evolved);
    let residual: CVector = evolved.amplitudes() - probe.amplitudes().scale(1.0) * overlap;
    let p1 = residual.norm_squared();
    [1.0 - p1, p1]
}

/// Output of [`run_echo`]: the alpha-parameterized binary distribution plus a
/// summary record.
pub struct EchoRun {
    pub distribution: ParamDistribution,
    pub result: ScenarioResult,
    pub fi: FiResult,
    pub qfi: FiResult,
}

/// Runs the echo protocol at `spec.alpha`, recording the binary outcome
/// distribution, its Fisher information, and the QFI of the evolved probe.
pub fn run_echo(spec: &EchoSpec) -> Result<EchoRun> {
    let step = echo_step(spec.alpha);
    let dist_spec = spec.clone();
    let distribution = ParamDistribution::new(vec!["x=0".into(), "x=1".into()], move |a| {
        echo_probabilities(&dist_spec, a).to_vec()
    });
    let fi = classical_fi(&distribution, spec.alpha, step)?;
    let fam_spec = spec.clone();
    let family = PureFamily::new(move |a| {
        fam_spec
            .probe()
            .apply(&exp_neg_i_alpha(fam_spec.generator().matrix(), a))
            .expect("dimensions checked at construction")
    });
    let qfi = qfi_pure(&family, spec.alpha, step)?;
    let probs = echo_probabilities(spec, spec.alpha);
    let mut result = ScenarioResult::new("echo");
    result.outcomes = vec![("x=0".into(), probs[0]), ("x=1".into(), probs[1])];
    result.fi = Some(fi.value);
    result.qfi = Some(qfi.value);
    result.success_prob = Some(probs[0]);
    result = result.with_meta("alpha", format!("{:.12e}", spec.alpha));
    Ok(EchoRun {
        distribution,
        result,
        fi,
        qfi,
    })
}

fn echo_step(alpha: f64) -> f64 {
    // A step tied to alpha keeps the relative finite-difference error flat
    // across the small-alpha sweeps used by the FI = QFI checks.
    (alpha.abs() / 50.0).max(1e-7).min(default_step(alpha))
}

/// FI/QFI agreement report for the weak-signal regime.
#[derive(Debug, Clone)]
pub struct EchoGap {
    pub fi: f64,
    pub qfi: f64,
    pub gap: f64,
    /// Set when |alpha| exceeds the weak-regime limit.
    pub warning: Option<String>,
}

/// Compares the echo FI against the evolved probe's QFI at `spec.alpha`.
/// The gap closes quadratically in alpha; see [`echo_gap_quadratic_bound`].
pub fn echo_fi_matches_qfi(spec: &EchoSpec) -> Result<EchoGap> {
    let run = run_echo(spec)?;
    let warning = (spec.alpha.abs() > WEAK_REGIME_LIMIT).then(|| {
        format!(
            "alpha = {} is outside the weak regime |alpha| <= {}",
            spec.alpha, WEAK_REGIME_LIMIT
        )
    });
    Ok(EchoGap {
        fi: run.fi.value,
        qfi: run.qfi.value,
        gap: (run.fi.value - run.qfi.value).abs(),
        warning,
    })
}

/// Fits gap <= C alpha^2 from two evaluation points and returns C.
/// Downstream checks verify a third point against the fitted constant.
pub fn echo_gap_quadratic_bound(spec: &EchoSpec, alpha_a: f64, alpha_b: f64) -> Result<f64> {
    let mut c = 0.0f64;
    for a in [alpha_a, alpha_b] {
        let mut s = spec.clone();
        s.alpha = a;
        let gap = echo_fi_matches_qfi(&s)?.gap;
        c = c.max(gap / (a * a));
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// Single-mode parametric amplification
// ---------------------------------------------------------------------------

/// Squeeze-kick-antisqueeze experiment on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct SqueezeSpec {
    /// Squeezing parameter r >= 0.
    pub r: f64,
    /// Squeezing angle; pi/2 squeezes the momentum quadrature and boosts a
    /// position-coupled kick by e^r.
    pub phi: f64,
    /// Signal-probe coupling rate.
    pub g: f64,
    /// Kick duration.
    pub t: f64,
    pub fock_dim: usize,
}

impl SqueezeSpec {
    pub fn new(r: f64, phi: f64, g: f64, t: f64, fock_dim: usize) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::InvalidParameter("squeeze parameter r < 0".into()));
        }
        if fock_dim < 4 {
            return Err(Error::InvalidParameter(
                "fock_dim must be at least 4".into(),
            ));
        }
        Ok(Self {
            r,
            phi,
            g,
            t,
            fock_dim,
        })
    }
}

/// Result of one parametric-amplification run.
#[derive(Debug, Clone)]
pub struct KickReport {
    /// <P> displacement after squeeze-kick-antisqueeze.
    pub displacement: f64,
    /// <P> displacement of the bare (unsqueezed) kick on the same space.
    pub bare_displacement: f64,
    /// displacement / bare_displacement; e^r up to truncation error.
    pub ratio: f64,
    /// Largest top-two-level mass seen across the pipeline stages.
    pub max_tail_mass: f64,
}

/// Simulates squeeze(r, phi) -> e^{-i g alpha Q t} -> antisqueeze and reports
/// the momentum displacement relative to the unsqueezed kick.
pub fn parametric_amplification(spec: &SqueezeSpec, alpha: f64) -> Result<KickReport> {
    let fock = FockSpace::new(spec.fock_dim)?;
    let h_sq = fock.squeeze_generator(spec.phi);
    let squeeze = exp_neg_i_alpha(h_sq.matrix(), spec.r);
    let antisqueeze = exp_neg_i_alpha(h_sq.matrix(), -spec.r);
    let kick = exp_neg_i_alpha(fock.position().matrix(), spec.g * alpha * spec.t);
    let p = fock.momentum();

    let mut max_tail: f64 = 0.0;
    let squeezed = fock.vacuum().apply(&squeeze)?;
    max_tail = max_tail.max(check_tail(&squeezed)?);
    let kicked = squeezed.apply(&kick)?;
    max_tail = max_tail.max(check_tail(&kicked)?);
    let unsqueezed = kicked.apply(&antisqueeze)?;
    max_tail = max_tail.max(check_tail(&unsqueezed)?);

    let displacement = unsqueezed.expectation(&p)? - fock.vacuum().expectation(&p)?;
    let bare = fock.vacuum().apply(&kick)?;
    let bare_displacement = bare.expectation(&p)? - fock.vacuum().expectation(&p)?;
    let ratio = if bare_displacement.abs() > 0.0 {
        displacement / bare_displacement
    } else {
        1.0
    };
    Ok(KickReport {
        displacement,
        bare_displacement,
        ratio,
        max_tail_mass: max_tail,
    })
}

// ---------------------------------------------------------------------------
// Two-mode SU(1,1) interferometry
// ---------------------------------------------------------------------------

/// Result of one SU(1,1) run; `result.fi` is the classical FI of the joint
/// photon-number distribution, `result.qfi` the QFI of the pre-measurement
/// state.
pub struct Su11Run {
    pub result: ScenarioResult,
    /// Final joint number distribution, indexed by n_a * D + n_b.
    pub distribution: Vec<f64>,
}

/// Two-mode squeeze S(r) = e^{r(a^dag b^dag - b a)}, phase e^{i alpha n_a} on
/// mode a, unsqueeze, then a joint photon-number measurement.
pub fn su11_interferometer(r: f64, alpha: f64, fock_dim: usize) -> Result<Su11Run> {
    if r < 0.0 {
        return Err(Error::InvalidParameter("squeeze parameter r < 0".into()));
    }
    let d = fock_dim;
    let fock = FockSpace::new(d)?;
    let a = kron(fock.lowering(), &crate::linalg::identity(d));
    let b = kron(&crate::linalg::identity(d), fock.lowering());
    // S(r) = e^{-i r H} with H = i(a^dag b^dag - b a).
    let h_tms = (a.adjoint() * b.adjoint() - &b * &a) * C64::new(0.0, 1.0);
    let h_tms = HermitianOperator::new(h_tms).expect("two-mode squeeze generator is Hermitian");
    let mut exps = crate::linalg::exp_neg_i_alpha_multi(h_tms.matrix(), &[r, -r]);
    let unsqueeze = exps.pop().expect("two alphas in");
    let squeeze = exps.pop().expect("two alphas in");

    let vacuum = StateVector::basis(d, 0).tensor(&StateVector::basis(d, 0));
    let squeezed = vacuum.apply(&squeeze)?;
    check_two_mode_tail(&squeezed)?;

    // Diagonal phase e^{+i alpha n_a}.
    let phase_diag = move |al: f64| -> CVector {
        CVector::from_fn(d * d, |idx, _| {
            let n_a = (idx / d) as f64;
            C64::from_polar(1.0, al * n_a)
        })
    };
    let output = {
        let squeezed = squeezed.clone();
        let unsqueeze = unsqueeze.clone();
        move |al: f64| -> StateVector {
            let mut amps = squeezed.amplitudes().clone();
            let ph = phase_diag(al);
            for i in 0..amps.len() {
                amps[i] *= ph[i];
            }
            StateVector::normalized(amps, vec![d, d])
                .expect("phase preserves norm")
                .apply(&unsqueeze)
                .expect("dimensions fixed")
        }
    };

    let out_state = output(alpha);
    check_two_mode_tail(&out_state)?;
    let distribution: Vec<f64> = out_state
        .amplitudes()
        .iter()
        .map(|z| z.norm_sqr())
        .collect();

    let labels: Vec<String> = (0..d * d)
        .map(|idx| format!("n=({},{})", idx / d, idx % d))
        .collect();
    let output_for_dist = output.clone();
    let dist = ParamDistribution::new(labels, move |al| {
        output_for_dist(al)
            .amplitudes()
            .iter()
            .map(|z| z.norm_sqr())
            .collect()
    });
    let step = (alpha.abs() / 10.0).max(1e-5).min(default_step(alpha));
    let fi = classical_fi(&dist, alpha, step)?;

    let squeezed_for_qfi = squeezed.clone();
    let family = PureFamily::new(move |al| {
        let mut amps = squeezed_for_qfi.amplitudes().clone();
        for i in 0..amps.len() {
            let n_a = (i / d) as f64;
            amps[i] *= C64::from_polar(1.0, al * n_a);
        }
        StateVector::normalized(amps, vec![d, d]).expect("phase preserves norm")
    });
    let qfi = qfi_pure(&family, alpha, step)?;

    let p00 = distribution[0];
    let mut result = ScenarioResult::new("su11");
    result.fi = Some(fi.value);
    result.qfi = Some(qfi.value);
    result.success_prob = Some(p00);
    result = result
        .with_meta("r", format!("{r:.6}"))
        .with_meta("fock_dim", format!("{d}"))
        .with_meta("alpha", format!("{alpha:.12e}"));
    Ok(Su11Run {
        result,
        distribution,
    })
}

// ---------------------------------------------------------------------------
// Collective-spin squeezing on the Dicke ladder
// ---------------------------------------------------------------------------

/// Twisting Hamiltonians preserving the permutation-symmetric subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwistKind {
    /// One-axis twisting, S_z^2.
    OneAxis,
    /// Two-axis twisting (i / 2N)(e^{-2i phi} S_-^2 - h.c.) at the given angle.
    TwoAxis { phi: f64 },
}

/// Collective spin operators for N spin-1/2 particles restricted to the
/// (N+1)-dimensional Dicke ladder, indexed by excitation number k = 0..N.
/// The k = 0 end is the fully polarized state annihilated by S_-;
/// S_- |k> = sqrt(k (N - k + 1)) |k-1> and S_z |k> = (k - N/2) |k>.
#[derive(Debug, Clone)]
pub struct DickeSpin {
    n: usize,
}

impl DickeSpin {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("need at least 2 spins".into()));
        }
        Ok(Self { n })
    }

    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn lowering(&self) -> CMatrix {
        let d = self.dim();
        let n = self.n as f64;
        let mut m = CMatrix::zeros(d, d);
        for k in 1..d {
            let kf = k as f64;
            m[(k - 1, k)] = C64::new((kf * (n - kf + 1.0)).sqrt(), 0.0);
        }
        m
    }

    pub fn sx(&self) -> HermitianOperator {
        let sm = self.lowering();
        HermitianOperator::new((&sm + sm.adjoint()).scale(0.5)).expect("Hermitian")
    }

    pub fn sy(&self) -> HermitianOperator {
        let sm = self.lowering();
        HermitianOperator::new((sm.adjoint() - &sm) * C64::new(0.0, -0.5)).expect("Hermitian")
    }

    pub fn sz(&self) -> HermitianOperator {
        let d = self.dim();
        let half_n = self.n as f64 / 2.0;
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(i as f64 - half_n, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        HermitianOperator::new(m).expect("diagonal")
    }

    /// Fully polarized reference state (zero excitations).
    pub fn polarized(&self) -> StateVector {
        StateVector::basis(self.dim(), 0)
    }

    /// Bosonic-style lowering map a|k> = sqrt(k)|k-1> on the same ladder.
    pub fn bosonic_lowering(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for k in 1..d {
            m[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
        }
        m
    }
}

/// Matrix of the requested twisting Hamiltonian on the Dicke ladder.
pub fn spin_squeeze_generator(n: usize, kind: TwistKind) -> Result<HermitianOperator> {
    let spin = DickeSpin::new(n)?;
    match kind {
        TwistKind::OneAxis => {
            let sz = spin.sz();
            HermitianOperator::new(sz.matrix() * sz.matrix())
        }
        TwistKind::TwoAxis { phi } => {
            let sm = spin.lowering();
            let sm2 = &sm * &sm;
            let phase = C64::from_polar(1.0, -2.0 * phi);
            let coeff = C64::new(0.0, 1.0 / (2.0 * n as f64));
            let m = (sm2.scale(1.0) * phase - sm2.adjoint() * phase.conj()) * coeff;
            HermitianOperator::new(m)
        }
    }
}

/// Deviation of the collective lowering operator from its bosonic
/// approximation sqrt(N) a on a given Dicke-ladder state.
#[derive(Debug, Clone)]
pub struct HpReport {
    /// || (S_- - sqrt(N) a) |state> ||
    pub deviation: f64,
    /// Deviation relative to || sqrt(N) a |state> || (zero when both vanish).
    pub relative_deviation: f64,
    pub mean_excitation: f64,
    /// Set when the excitation is not small against N.
    pub warning: Option<String>,
}

/// Checks the low-excitation spin-to-boson mapping S_- ~ sqrt(N) a.
pub fn holstein_primakoff_check(n: usize, state: &StateVector) -> Result<HpReport> {
    let spin = DickeSpin::new(n)?;
    if state.dim() != spin.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state has {} amplitudes, Dicke ladder for N = {} has {}",
            state.dim(),
            n,
            spin.dim()
        )));
    }
    let sqrt_n = (n as f64).sqrt();
    let diff = spin.lowering() - spin.bosonic_lowering().scale(sqrt_n);
    let deviation = (&diff * state.amplitudes()).norm();
    let reference = (spin.bosonic_lowering().scale(sqrt_n) * state.amplitudes()).norm();
    let relative_deviation = if reference > 0.0 {
        deviation / reference
    } else {
        0.0
    };
    let mean_excitation: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, z)| k as f64 * z.norm_sqr())
        .sum();
    let warning = (mean_excitation > n as f64 / 10.0)
        .then(|| format!("mean excitation {mean_excitation:.3} is not small against N = {n}"));
    Ok(HpReport {
        deviation,
        relative_deviation,
        mean_excitation,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff};
    use crate::states::{hadamard, pauli_z};

    fn hadamard_echo(alpha: f64) -> EchoSpec {
        let h = HermitianOperator::new(pauli_z().scale(0.5)).unwrap();
        EchoSpec::new(hadamard(), h, StateVector::basis(2, 0), alpha).unwrap()
    }

    #[test]
    fn hadamard_echo_closed_form() {
        for k in 0..50 {
            let alpha = -1.2 + 0.05 * k as f64;
            let [p0, _] = echo_probabilities(&hadamard_echo(alpha), alpha);
            let expected = (alpha / 2.0).cos().powi(2);
            assert!(
                (p0 - expected).abs() < 1e-13,
                "alpha = {alpha}: p0 = {p0}, cos^2(alpha/2) = {expected}"
            );
        }
    }

    #[test]
    fn zero_signal_returns_certainly() {
        let [p0, p1] = echo_probabilities(&hadamard_echo(0.0), 0.0);
        assert!((p0 - 1.0).abs() < 1e-14);
        assert!(p1 < 1e-14);
    }

    #[test]
    fn commuting_preparation_is_insensitive() {
        // V = I with H diagonal: probe stays an eigenstate, FI = 0 at all alpha.
        let h = HermitianOperator::new(pauli_z().scale(0.5)).unwrap();
        let spec = EchoSpec::new(identity(2), h, StateVector::basis(2, 0), 0.4).unwrap();
        let [p0, _] = echo_probabilities(&spec, 0.4);
        assert!((p0 - 1.0).abs() < 1e-14);
        let run = run_echo(&spec).unwrap();
        assert!(run.fi.value < 1e-12);
    }

    #[test]
    fn echo_gap_small_at_weak_alpha() {
        let mut rng = crate::sampling::rng_from_seed(5);
        let v = crate::sampling::random_unitary(4, &mut rng);
        let h = crate::sampling::random_hermitian(4, 1.5, &mut rng);
        let initial = StateVector::basis(4, 0).with_dims(vec![4]).unwrap();
        let spec = EchoSpec::new(v, h, initial, 1e-3).unwrap();
        let gap = echo_fi_matches_qfi(&spec).unwrap();
        assert!(gap.gap <= 1e-4, "gap = {}", gap.gap);
        assert!(gap.warning.is_none());
        let c = echo_gap_quadratic_bound(&spec, 2e-3, 1e-3).unwrap();
        let mut s3 = spec.clone();
        s3.alpha = 1.5e-3;
        let g3 = echo_fi_matches_qfi(&s3).unwrap().gap;
        assert!(g3 <= c * s3.alpha * s3.alpha * 1.25 + 1e-9);
    }

    #[test]
    fn echo_warns_outside_weak_regime() {
        let spec = hadamard_echo(0.3);
        assert!(echo_fi_matches_qfi(&spec).unwrap().warning.is_some());
    }

    #[test]
    fn optimal_preparation_reaches_generator_bound() {
        let mut rng = crate::sampling::rng_from_seed(9);
        let h = crate::sampling::random_hermitian(4, 1.0, &mut rng);
        let probe = crate::states::optimal_probe(&h, 0.0).unwrap();
        let v = crate::linalg::completion_unitary(probe.amplitudes()).unwrap();
        let spec = EchoSpec::new(v, h.clone(), StateVector::basis(4, 0), 1e-3).unwrap();
        let run = run_echo(&spec).unwrap();
        let bound = crate::fisher::generator_qfi_bound(&h);
        assert!((run.qfi.value - bound).abs() < 1e-6);
    }

    #[test]
    fn echo_symmetric_in_alpha_when_probe_mean_vanishes() {
        // Centering H so <psi|H|psi> = 0 only shifts a global phase, and then
        // p0(alpha) = p0(-alpha).
        let mut rng = crate::sampling::rng_from_seed(21);
        for _ in 0..5 {
            let v = crate::sampling::random_unitary(4, &mut rng);
            let h = crate::sampling::random_hermitian(4, 1.0, &mut rng);
            let initial = StateVector::basis(4, 0);
            let psi = initial.apply(&v).unwrap();
            let mean = psi.expectation(&h).unwrap();
            let centered = HermitianOperator::new(h.matrix() - identity(4).scale(mean)).unwrap();
            let spec = EchoSpec::new(v, centered, initial, 0.2).unwrap();
            let [p_plus, _] = echo_probabilities(&spec, 0.2);
            let [p_minus, _] = echo_probabilities(&spec, -0.2);
            assert!((p_plus - p_minus).abs() < 1e-12);
        }
    }

    #[test]
    fn paramp_no_squeeze_ratio_is_one() {
        let spec = SqueezeSpec::new(0.0, std::f64::consts::FRAC_PI_2, 1.0, 1.0, 40).unwrap();
        let report = parametric_amplification(&spec, 0.1).unwrap();
        assert!((report.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn paramp_boost_matches_exponential() {
        let spec = SqueezeSpec::new(1.0, std::f64::consts::FRAC_PI_2, 1.0, 1.0, 60).unwrap();
        let report = parametric_amplification(&spec, 0.1).unwrap();
        let expected = 1f64.exp();
        assert!(
            (report.ratio - expected).abs() / expected < 0.01,
            "ratio = {}, e = {}",
            report.ratio,
            expected
        );
        let spec2 = SqueezeSpec::new(1.0, std::f64::consts::FRAC_PI_2, 1.0, 1.0, 120).unwrap();
        let report2 = parametric_amplification(&spec2, 0.1).unwrap();
        assert!((report2.ratio - report.ratio).abs() / report.ratio < 1e-3);
    }

    #[test]
    fn paramp_ratio_monotone_in_r() {
        let mut last = 0.0;
        for r in [0.0, 0.5, 1.0, 1.5] {
            let spec = SqueezeSpec::new(r, std::f64::consts::FRAC_PI_2, 1.0, 1.0, 140).unwrap();
            let ratio = parametric_amplification(&spec, 0.1).unwrap().ratio;
            assert!(ratio > last, "ratio {ratio} at r = {r} not above {last}");
            last = ratio;
        }
    }

    #[test]
    fn paramp_truncation_guard_fires() {
        let spec = SqueezeSpec::new(2.5, std::f64::consts::FRAC_PI_2, 1.0, 1.0, 30).unwrap();
        assert!(matches!(
            parametric_amplification(&spec, 0.1),
            Err(Error::FockTruncation { .. })
        ));
    }

    #[test]
    fn su11_perfect_unsqueeze_at_zero_phase() {
        let run = su11_interferometer(0.5, 0.0, 20).unwrap();
        assert!((run.distribution[0] - 1.0).abs() < 1e-8);
        // Amplitude-level check: everything but the vacuum is at fp noise.
        let off_vacuum: f64 = run.distribution[1..].iter().sum();
        assert!(off_vacuum.sqrt() < 1e-8);
    }

    #[test]
    fn su11_vacuum_probe_is_phase_insensitive() {
        let run = su11_interferometer(0.0, 1e-3, 12).unwrap();
        assert!(run.result.fi.unwrap() < 1e-9);
    }

    #[test]
    fn su11_number_measurement_extracts_qfi() {
        let run = su11_interferometer(0.5, 1e-3, 25).unwrap();
        let fi = run.result.fi.unwrap();
        let qfi = run.result.qfi.unwrap();
        assert!(fi >= 0.99 * qfi, "fi = {fi}, qfi = {qfi}");
        // QFI of the two-mode squeezed probe under a number generator.
        let expected = (2.0f64 * 0.5).sinh().powi(2);
        assert!((qfi - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn twisting_generators_shapes() {
        let tat = spin_squeeze_generator(2, TwistKind::TwoAxis { phi: 0.0 }).unwrap();
        assert_eq!(tat.dim(), 3);
        let oat = spin_squeeze_generator(6, TwistKind::OneAxis).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                if i != j {
                    assert!(oat.matrix()[(i, j)].norm() < 1e-15);
                }
            }
        }
        assert!(spin_squeeze_generator(1, TwistKind::OneAxis).is_err());
    }

    #[test]
    fn two_axis_twisting_raises_echo_fi() {
        let n = 8;
        let spin = DickeSpin::new(n).unwrap();
        let sx = spin.sx();
        let alpha = 1e-3;
        let baseline = {
            let spec = EchoSpec::new(identity(n + 1), sx.clone(), spin.polarized(), alpha).unwrap();
            run_echo(&spec).unwrap().fi.value
        };
        let tat = spin_squeeze_generator(n, TwistKind::TwoAxis { phi: 0.0 }).unwrap();
        let mut best = 0.0f64;
        for mu in [-2.5, -2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0, 2.5] {
            let v = exp_neg_i_alpha(tat.matrix(), mu);
            let spec = EchoSpec::new(v, sx.clone(), spin.polarized(), alpha).unwrap();
            best = best.max(run_echo(&spec).unwrap().fi.value);
        }
        assert!(
            best > baseline * 1.2,
            "best twisted FI {best} vs baseline {baseline}"
        );
    }

    #[test]
    fn hp_polarized_state_has_zero_deviation() {
        let spin = DickeSpin::new(12).unwrap();
        let report = holstein_primakoff_check(12, &spin.polarized()).unwrap();
        assert!(report.deviation < 1e-14);
        assert!(report.relative_deviation < 1e-14);
        assert!(report.warning.is_none());
    }

    #[test]
    fn hp_single_excitation_matches_exactly() {
        // S_- and sqrt(N) a agree on the first rung: sqrt(N(1-0/N)*1) = sqrt(N).
        let report = holstein_primakoff_check(100, &StateVector::basis(101, 1)).unwrap();
        assert!(report.relative_deviation < 0.01);
    }

    #[test]
    fn hp_deviation_shrinks_with_n() {
        let d100 = holstein_primakoff_check(100, &StateVector::basis(101, 2))
            .unwrap()
            .relative_deviation;
        let d400 = holstein_primakoff_check(400, &StateVector::basis(401, 2))
            .unwrap()
            .relative_deviation;
        assert!(d400 < d100);
        assert!(d100 > 0.0);
    }

    #[test]
    fn hp_warns_at_high_excitation() {
        let report = holstein_primakoff_check(10, &StateVector::basis(11, 5)).unwrap();
        assert!(report.warning.is_some());
    }

    #[test]
    fn lowering_matrix_elements() {
        let spin = DickeSpin::new(5).unwrap();
        let sm = spin.lowering();
        for k in 1..6usize {
            let expected = ((k as f64) * (5.0 - k as f64 + 1.0)).sqrt();
            assert!((sm[(k - 1, k)].re - expected).abs() < 1e-12);
        }
        let comm =
            spin.sx().matrix() * spin.sy().matrix() - spin.sy().matrix() * spin.sx().matrix();
        let expected = spin.sz().matrix() * C64::new(0.0, 1.0);
        assert!(max_abs_diff(&comm, &expected) < 1e-12);
    }
}
