//! Singlet-based sensing of a field pointing in an unknown direction.
//!
//! The protocols here receive the field only as an opaque evolution — the
//! constructor consumes the direction, the protocol logic cannot read it
//! back. That makes direction-agnosticism a property of the interfaces, not a
//! convention: `agnostic`, `positronium`, and `agnostic_dephasing` extract
//! the field strength from singlet survival alone, at the same rate for
//! every axis.

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::fisher::{classical_fi, default_step, qfi_pure, ParamDistribution, PureFamily};
use crate::linalg::{identity, kron, CMatrix, CVector, C64};
use crate::states::{pauli_direction, unitary_from_generator, StateVector};

/// A field of strength `alpha` along unit axis `direction`, acting as
/// e^{-i alpha n.sigma / 2}.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub direction: [f64; 3],
    pub alpha: f64,
}

impl FieldSpec {
    pub fn new(direction: [f64; 3], alpha: f64) -> Result<Self> {
        pauli_direction(direction)?;
        Ok(Self { direction, alpha })
    }
}

/// Where a protocol got its direction information from.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectionUse {
    /// The measurement stage used the revealed axis.
    Revealed([f64; 3]),
    /// The protocol never used the axis.
    Agnostic,
}

/// Protocol output: outcome distribution, extracted FI, and the ceiling it is
/// compared against.
#[derive(Debug, Clone)]
pub struct TimeLoopResult {
    pub protocol: String,
    pub outcomes: Vec<(String, f64)>,
    pub fi: f64,
    pub theoretical_max: f64,
    pub direction_used: DirectionUse,
}

impl TimeLoopResult {
    fn checked(self) -> Result<Self> {
        if self.fi < 0.0 || self.fi > self.theoretical_max + 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "{}: FI {} outside [0, {} + 1e-6]",
                self.protocol, self.fi, self.theoretical_max
            )));
        }
        Ok(self)
    }
}

/// The field as seen by protocol code: strength-parameterized evolutions with
/// the axis sealed inside.
pub struct HiddenField {
    generator_2q: CMatrix,   // (n.sigma / 2) (x) I
    generator_pair: CMatrix, // (n.sigma / 2) (x) I - I (x) (n.sigma / 2)
}

impl HiddenField {
    pub fn new(direction: [f64; 3]) -> Result<Self> {
        let half = pauli_direction(direction)?.matrix().scale(0.5);
        Ok(Self {
            generator_2q: kron(&half, &identity(2)),
            generator_pair: kron(&half, &identity(2)) - kron(&identity(2), &half),
        })
    }

    /// U_alpha on the probe (first qubit).
    pub fn evolve_probe(&self, state: &StateVector, alpha: f64) -> StateVector {
        state
            .apply(&crate::linalg::exp_neg_i_alpha(&self.generator_2q, alpha))
            .expect("two-qubit state expected")
    }

    /// U_alpha on the qubit and U_alpha^dag on the antiqubit.
    pub fn evolve_pair(&self, state: &StateVector, alpha: f64) -> StateVector {
        state
            .apply(&crate::linalg::exp_neg_i_alpha(&self.generator_pair, alpha))
            .expect("two-qubit state expected")
    }
}

/// A strength-parameterized dephasing channel along a sealed axis:
/// Kraus {sqrt(1 - s/2) I, sqrt(s/2) n.sigma}, s = 1 is complete dephasing.
pub struct HiddenDephasing {
    axis_op: CMatrix,
}

impl HiddenDephasing {
    pub fn new(direction: [f64; 3]) -> Result<Self> {
        Ok(Self {
            axis_op: pauli_direction(direction)?.matrix().clone(),
        })
    }

    /// Kraus channel on the probe qubit (acting on probe (x) ancilla).
    ///
    /// The Kraus weights stay valid on [0, 2]; the protocol-level [0, 1]
    /// bound is enforced in [`agnostic_dephasing`], so finite-difference
    /// evaluation at s = 1 can step slightly past the endpoint.
    pub fn channel_on_probe(&self, strength: f64) -> Result<KrausChannel> {
        if !(0.0..=2.0).contains(&strength) {
            return Err(Error::InvalidParameter(format!(
                "dephasing strength {strength} outside the valid Kraus range"
            )));
        }
        KrausChannel::new(vec![
            kron(&identity(2), &identity(2)).scale((1.0 - strength / 2.0).sqrt()),
            kron(&self.axis_op, &identity(2)).scale((strength / 2.0).sqrt()),
        ])
    }
}

/// |Psi-> = (|01> - |10>)/sqrt(2).
pub fn singlet() -> StateVector {
    let s = 1.0 / 2f64.sqrt();
    StateVector::new(
        CVector::from_vec(vec![
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
            C64::new(0.0, 0.0),
        ]),
        vec![2, 2],
    )
    .expect("singlet is normalized")
}

/// Unitary taking |00> to the singlet; the preparation step shared with echo
/// metrology.
pub fn singlet_preparer() -> CMatrix {
    crate::linalg::completion_unitary(singlet().amplitudes())
        .expect("singlet completes to a unitary")
}

/// Average QFI of the three Pauli-eigenstate probes under a field along x:
/// the eigenstate along the field axis contributes nothing, the two
/// transverse probes contribute 1 each, and the average is 2/3.
pub fn naive_average_fi(alpha: f64) -> Result<f64> {
    if !(0.0..std::f64::consts::PI).contains(&alpha) {
        return Err(Error::InvalidParameter("alpha must lie in (0, pi)".into()));
    }
    let generator = crate::states::HermitianOperator::new(
        pauli_direction([1.0, 0.0, 0.0])?.matrix().scale(0.5),
    )?;
    let mut total = 0.0;
    for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let (_, vecs) = pauli_direction(axis)?.eigen();
        let probe = StateVector::normalized(vecs.column(1).into_owned(), vec![2])?;
        let generator = generator.clone();
        let family = PureFamily::new(move |a| {
            probe
                .apply(&unitary_from_generator(&generator, a))
                .expect("qubit state")
        });
        total += qfi_pure(&family, alpha, 5e-5)?.value;
    }
    Ok(total / 3.0)
}

/// Hindsight sensing: probe-ancilla singlet, field on the probe, then the
/// revealed axis fixes the ancilla basis. Measuring the ancilla in a basis
/// mutually unbiased to the n.sigma eigenbasis collapses the probe onto an
/// equal-weight superposition of the field eigenstates — the optimal probe,
/// teleported backward. Each branch then runs a return-or-not check against
/// its reference state; the four-outcome statistics carry FI = 1.
pub fn hindsight(field: &FieldSpec) -> Result<TimeLoopResult> {
    let hidden = HiddenField::new(field.direction)?;
    let alpha = field.alpha;

    // Measurement stage: the axis is revealed only here.
    let n = field.direction;
    let reference = if n[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let dot = reference[0] * n[0] + reference[1] * n[1] + reference[2] * n[2];
    let mut m = [
        reference[0] - dot * n[0],
        reference[1] - dot * n[1],
        reference[2] - dot * n[2],
    ];
    let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    m = [m[0] / norm, m[1] / norm, m[2] / norm];
    let (_, ancilla_basis) = pauli_direction(m)?.eigen();

    let probs = move |a: f64| -> Vec<f64> {
        let evolved = hidden.evolve_probe(&singlet(), a);
        let mut out = Vec::with_capacity(4);
        for b in 0..2 {
            let anc: CVector = ancilla_basis.column(b).into_owned();
            // Conditional (unnormalized) probe: contract the ancilla slot.
            let mut chi = CVector::zeros(2);
            let mut reference = CVector::zeros(2);
            let sing = singlet();
            for probe_idx in 0..2 {
                for anc_idx in 0..2 {
                    let amp = evolved.amplitudes()[probe_idx * 2 + anc_idx];
                    chi[probe_idx] += anc[anc_idx].conj() * amp;
                    let amp0 = sing.amplitudes()[probe_idx * 2 + anc_idx];
                    reference[probe_idx] += anc[anc_idx].conj() * amp0;
                }
            }
            let p_branch = chi.norm_squared();
            let ref_norm = reference.norm();
            let p_return = if p_branch > 0.0 && ref_norm > 0.0 {
                (reference.scale(1.0 / ref_norm)).dotc(&chi).norm_sqr() / p_branch
            } else {
                0.0
            };
            out.push(p_branch * p_return);
            out.push(p_branch * (1.0 - p_return));
        }
        out
    };
    let labels = vec![
        "b=0,return".into(),
        "b=0,depart".into(),
        "b=1,return".into(),
        "b=1,depart".into(),
    ];
    let dist = ParamDistribution::new(labels.clone(), probs);
    let fi = classical_fi(&dist, alpha, fd_step(alpha))?;
    let outcome_values = dist.probabilities(alpha)?;
    TimeLoopResult {
        protocol: "hindsight".into(),
        outcomes: labels.into_iter().zip(outcome_values).collect(),
        fi: fi.value,
        theoretical_max: 1.0,
        direction_used: DirectionUse::Revealed(field.direction),
    }
    .checked()
}

/// Per-branch conditional probe QFI for hindsight; each branch is pure and
/// optimal (QFI = 1).
pub fn hindsight_branch_qfis(field: &FieldSpec) -> Result<Vec<f64>> {
    let hidden = HiddenField::new(field.direction)?;
    let n = field.direction;
    let reference = if n[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let dot = reference[0] * n[0] + reference[1] * n[1] + reference[2] * n[2];
    let mut m = [
        reference[0] - dot * n[0],
        reference[1] - dot * n[1],
        reference[2] - dot * n[2],
    ];
    let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    m = [m[0] / norm, m[1] / norm, m[2] / norm];
    let (_, basis) = pauli_direction(m)?.eigen();
    let hidden = std::sync::Arc::new(hidden);
    let mut qfis = Vec::new();
    for b in 0..2 {
        let anc: CVector = basis.column(b).into_owned();
        let hidden = hidden.clone();
        let family = PureFamily::new(move |a| {
            let evolved = hidden.evolve_probe(&singlet(), a);
            let mut chi = CVector::zeros(2);
            for probe_idx in 0..2 {
                for anc_idx in 0..2 {
                    chi[probe_idx] +=
                        anc[anc_idx].conj() * evolved.amplitudes()[probe_idx * 2 + anc_idx];
                }
            }
            StateVector::normalized(chi, vec![2]).expect("branch state nonzero")
        });
        qfis.push(qfi_pure(&family, field.alpha, fd_step(field.alpha))?.value);
    }
    Ok(qfis)
}

fn singlet_survival(evolved: &StateVector) -> f64 {
    singlet().inner(evolved).norm_sqr()
}

fn fd_step(alpha: f64) -> f64 {
    default_step(alpha).clamp(1e-6, 1e-4)
}

/// Agnostic sensing: singlet, field on the probe, singlet-or-not readout.
/// Survival is cos^2(alpha/2) for every axis; FI = 1 at every alpha in
/// (0, pi).
pub fn agnostic(field: &FieldSpec) -> Result<TimeLoopResult> {
    let hidden = HiddenField::new(field.direction)?;
    agnostic_impl(&hidden, field.alpha)
}

fn agnostic_impl(hidden: &HiddenField, alpha: f64) -> Result<TimeLoopResult> {
    let survival = |a: f64| singlet_survival(&hidden.evolve_probe(&singlet(), a));
    let p = survival(alpha);
    let dist = {
        let generator = hidden.generator_2q.clone();
        ParamDistribution::new(vec!["singlet".into(), "not".into()], move |a| {
            let evolved = singlet()
                .apply(&crate::linalg::exp_neg_i_alpha(&generator, a))
                .expect("two-qubit state");
            let p = singlet_survival(&evolved);
            vec![p, 1.0 - p]
        })
    };
    let fi = classical_fi(&dist, alpha, fd_step(alpha))?;
    TimeLoopResult {
        protocol: "agnostic".into(),
        outcomes: vec![("singlet".into(), p), ("not".into(), 1.0 - p)],
        fi: fi.value,
        theoretical_max: 1.0,
        direction_used: DirectionUse::Agnostic,
    }
    .checked()
}

/// Qubit/antiqubit sensing: the pair starts in a singlet, the field drives
/// U_alpha on the qubit and U_alpha^dag on the antiqubit, and the
/// singlet-or-not readout extracts FI = 4 — quadruple the agnostic rate.
pub fn positronium(field: &FieldSpec) -> Result<TimeLoopResult> {
    let hidden = HiddenField::new(field.direction)?;
    positronium_impl(&hidden, field.alpha)
}

fn positronium_impl(hidden: &HiddenField, alpha: f64) -> Result<TimeLoopResult> {
    let p = singlet_survival(&hidden.evolve_pair(&singlet(), alpha));
    let dist = {
        let generator = hidden.generator_pair.clone();
        ParamDistribution::new(vec!["singlet".into(), "not".into()], move |a| {
            let evolved = singlet()
                .apply(&crate::linalg::exp_neg_i_alpha(&generator, a))
                .expect("two-qubit state");
            let p = singlet_survival(&evolved);
            vec![p, 1.0 - p]
        })
    };
    let fi = classical_fi(&dist, alpha, fd_step(alpha))?;
    TimeLoopResult {
        protocol: "positronium".into(),
        outcomes: vec![("singlet".into(), p), ("not".into(), 1.0 - p)],
        fi: fi.value,
        theoretical_max: 4.0,
        direction_used: DirectionUse::Agnostic,
    }
    .checked()
}

/// Agnostic estimation of a dephasing strength: singlet, dephasing channel on
/// the probe, singlet-or-not readout. Survival is 1 - s/2 for every axis;
/// the binary FI about s is 1/(s(2-s)).
///
/// At s = 0 the distribution degenerates and the FI diverges; the result
/// reports `f64::INFINITY` for both the FI and its ceiling there.
pub fn agnostic_dephasing(strength: f64, direction: [f64; 3]) -> Result<TimeLoopResult> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::InvalidParameter(format!(
            "dephasing strength {strength} outside [0, 1]"
        )));
    }
    let hidden = HiddenDephasing::new(direction)?;
    let survival_at = |s: f64| -> Result<f64> {
        let rho = singlet().to_density();
        let out = hidden.channel_on_probe(s)?.apply(&rho)?;
        let sv = singlet();
        Ok((sv.amplitudes().dotc(&(out.matrix() * sv.amplitudes()))).re)
    };
    let p = survival_at(strength)?;
    let (fi, max) = if strength == 0.0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        // Central difference with the step clamped inside [0, 2], where the
        // Kraus parameterization stays valid.
        let step = (strength / 2.0).min(1e-4);
        let pp = survival_at(strength + step)?;
        let pm = survival_at(strength - step)?;
        let dp = (pp - pm) / (2.0 * step);
        let fi = dp * dp / p + dp * dp / (1.0 - p);
        (fi, 1.0 / (strength * (2.0 - strength)))
    };
    TimeLoopResult {
        protocol: "agnostic-dephasing".into(),
        outcomes: vec![("singlet".into(), p), ("not".into(), 1.0 - p)],
        fi,
        theoretical_max: max,
        direction_used: DirectionUse::Agnostic,
    }
    .checked()
}

/// The echo-metrology reading of the singlet protocols: V prepares the
/// singlet from |00>, the field is the echo generator, and the
/// singlet-or-not readout is V-dagger followed by a return check. Returns the
/// generator used so callers can feed `crate::echo::run_echo` directly.
pub fn echo_equivalent_generator(
    field: &FieldSpec,
    pair: bool,
) -> Result<crate::states::HermitianOperator> {
    let half = pauli_direction(field.direction)?.matrix().scale(0.5);
    let m = if pair {
        kron(&half, &identity(2)) - kron(&identity(2), &half)
    } else {
        kron(&half, &identity(2))
    };
    crate::states::HermitianOperator::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_direction, rng_from_seed};

    #[test]
    fn naive_average_matches_two_thirds() {
        let avg = naive_average_fi(0.7).unwrap();
        assert!((avg - 2.0 / 3.0).abs() < 1e-9, "avg = {avg}");
    }

    #[test]
    fn naive_per_probe_values() {
        // Probe along the field axis: no information; transverse probes: 1.
        let field = pauli_direction([1.0, 0.0, 0.0]).unwrap();
        let half = crate::states::HermitianOperator::new(field.matrix().scale(0.5)).unwrap();
        let (_, vecs) = field.eigen();
        let aligned = StateVector::normalized(vecs.column(1).into_owned(), vec![2]).unwrap();
        let fam =
            PureFamily::new(move |a| aligned.apply(&unitary_from_generator(&half, a)).unwrap());
        assert!(qfi_pure(&fam, 0.7, 5e-5).unwrap().value < 1e-12);
        let z = StateVector::basis(2, 0);
        let half2 = crate::states::HermitianOperator::new(
            pauli_direction([1.0, 0.0, 0.0])
                .unwrap()
                .matrix()
                .scale(0.5),
        )
        .unwrap();
        let fam = PureFamily::new(move |a| z.apply(&unitary_from_generator(&half2, a)).unwrap());
        assert!((qfi_pure(&fam, 0.7, 5e-5).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hindsight_reaches_unit_fi_for_any_axis() {
        let mut rng = rng_from_seed(17);
        for _ in 0..8 {
            let field =
                FieldSpec::new(random_direction(&mut rng), std::f64::consts::FRAC_PI_3).unwrap();
            let result = hindsight(&field).unwrap();
            assert!(
                (result.fi - 1.0).abs() < 1e-6,
                "FI = {} for {:?}",
                result.fi,
                field.direction
            );
            assert!(result.fi > 2.0 / 3.0);
        }
    }

    #[test]
    fn hindsight_branches_are_optimal() {
        let field = FieldSpec::new([0.36, -0.48, 0.8], 0.9).unwrap();
        for q in hindsight_branch_qfis(&field).unwrap() {
            assert!((q - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn agnostic_survival_closed_form() {
        let mut rng = rng_from_seed(23);
        for _ in 0..6 {
            let n = random_direction(&mut rng);
            for alpha in [0.0f64, 0.4, 1.1, 2.3] {
                let result = agnostic(&FieldSpec::new(n, alpha.max(1e-3)).unwrap()).unwrap();
                let expected = (alpha.max(1e-3) / 2.0f64).cos().powi(2);
                assert!(
                    (result.outcomes[0].1 - expected).abs() < 1e-12,
                    "axis {n:?} alpha {alpha}"
                );
            }
        }
    }

    #[test]
    fn agnostic_identity_field_keeps_singlet() {
        let result = agnostic(&FieldSpec::new([0.0, 0.0, 1.0], 0.0).unwrap()).unwrap();
        assert!((result.outcomes[0].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn agnostic_fi_is_one() {
        let result =
            agnostic(&FieldSpec::new([0.6, 0.0, 0.8], std::f64::consts::FRAC_PI_2).unwrap())
                .unwrap();
        assert!((result.fi - 1.0).abs() < 1e-6);
    }

    #[test]
    fn positronium_quadruples_fi() {
        let mut rng = rng_from_seed(31);
        for alpha in [0.1, 0.5, 0.9, 1.3, 1.56] {
            let field = FieldSpec::new(random_direction(&mut rng), alpha).unwrap();
            let result = positronium(&field).unwrap();
            assert!((result.fi - 4.0).abs() < 1e-6, "FI = {}", result.fi);
            let ag = agnostic(&field).unwrap();
            assert!(
                (result.fi - 4.0 * ag.fi).abs() < 1e-6,
                "ratio off at alpha = {alpha}"
            );
        }
    }

    #[test]
    fn positronium_survival_decays_four_times_faster() {
        let field = FieldSpec::new([0.0, 1.0, 0.0], 0.0).unwrap();
        let fit = |pair: bool, a: f64| -> f64 {
            let f = FieldSpec::new(field.direction, a).unwrap();
            let r = if pair {
                positronium(&f).unwrap()
            } else {
                agnostic(&f).unwrap()
            };
            (1.0 - r.outcomes[0].1) / (a * a)
        };
        for a in [0.01, 0.02] {
            let ratio = fit(true, a) / fit(false, a);
            assert!((ratio - 4.0).abs() < 0.01, "decay ratio {ratio} at {a}");
        }
    }

    #[test]
    fn singlet_protocols_are_axis_independent() {
        let mut rng = rng_from_seed(41);
        let mut ag = Vec::new();
        let mut pos = Vec::new();
        for _ in 0..100 {
            let n = random_direction(&mut rng);
            ag.push(agnostic(&FieldSpec::new(n, 0.8).unwrap()).unwrap().outcomes[0].1);
            pos.push(
                positronium(&FieldSpec::new(n, 0.8).unwrap())
                    .unwrap()
                    .outcomes[0]
                    .1,
            );
        }
        let spread = |v: &[f64]| {
            v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
        };
        assert!(spread(&ag) < 1e-10);
        assert!(spread(&pos) < 1e-10);
    }

    #[test]
    fn dephasing_survival_affine_and_axis_free() {
        let mut rng = rng_from_seed(47);
        for _ in 0..5 {
            let n = random_direction(&mut rng);
            for s in [0.0, 0.3, 0.8, 1.0] {
                let r = agnostic_dephasing(s, n).unwrap();
                assert!((r.outcomes[0].1 - (1.0 - s / 2.0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dephasing_fi_analytic_value() {
        let r = agnostic_dephasing(0.5, [0.0, 0.0, 1.0]).unwrap();
        assert!((r.fi - 4.0 / 3.0).abs() < 1e-6, "fi = {}", r.fi);
        assert!(agnostic_dephasing(1.2, [0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn singlet_protocols_replay_through_echo() {
        let mut rng = rng_from_seed(53);
        for _ in 0..5 {
            let n = random_direction(&mut rng);
            let alpha = 0.9;
            let field = FieldSpec::new(n, alpha).unwrap();
            let v = singlet_preparer();
            for pair in [false, true] {
                let h = echo_equivalent_generator(&field, pair).unwrap();
                let spec = crate::echo::EchoSpec::new(
                    v.clone(),
                    h,
                    StateVector::basis(2, 0).tensor(&StateVector::basis(2, 0)),
                    alpha,
                )
                .unwrap();
                let [p0, _] = crate::echo::echo_probabilities(&spec, alpha);
                let protocol_p = if pair {
                    positronium(&field).unwrap().outcomes[0].1
                } else {
                    agnostic(&field).unwrap().outcomes[0].1
                };
                assert!(
                    (p0 - protocol_p).abs() < 1e-12,
                    "pair = {pair}: echo {p0} vs protocol {protocol_p}"
                );
            }
        }
    }
}
