//! Property tests for the structural invariants: channel physicality,
//! reversibility of generator exponentials, marginal consistency, and the
//! robustness of the finite-difference Fisher-information machinery.
//!
//! Random objects are derived from proptest-supplied seeds through the
//! crate's own seeded samplers, so shrinking stays meaningful and every
//! failure is reproducible from the printed seed.

use proptest::prelude::*;
use rand::Rng;

use retrosense::fisher::{classical_fi, povm_probabilities, qfi_mixed, qfi_pure};
use retrosense::ico;
use retrosense::linalg::{exp_neg_i_alpha, identity, max_abs_diff, CVector, C64};
use retrosense::sampling::{random_channel, random_hermitian, random_unitary, rng_from_seed};
use retrosense::states::DensityOperator;
use retrosense::{MixedFamily, ParamDistribution, PureFamily, StateVector};

fn random_density(dim: usize, rng: &mut impl rand::Rng) -> DensityOperator {
    // Random eigenbasis with eigenvalues bounded away from the PSD floor.
    let u = random_unitary(dim, rng);
    let mut weights: Vec<f64> = (0..dim).map(|_| 0.05 + rng.gen::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let diag = retrosense::linalg::CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(weights[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DensityOperator::new(&u * diag * u.adjoint(), vec![dim]).expect("valid density")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn channels_preserve_trace_and_positivity(seed in any::<u64>(), dim in 2usize..5, n_kraus in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let ch = random_channel(dim, n_kraus, &mut rng);
        let rho = random_density(dim, &mut rng);
        // `apply` revalidates trace (1e-10) and the PSD floor internally.
        let out = ch.apply(&rho).expect("CPTP output stays physical");
        let trace = out.matrix().trace();
        prop_assert!((trace.re - 1.0).abs() < 1e-10);
        prop_assert!(out.eigenvalues().iter().all(|&l| l >= -1e-9));
    }

    #[test]
    fn generator_exponentials_invert(seed in any::<u64>(), dim in 2usize..17) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(dim, 2.0, &mut rng);
        let alpha = 3.0 * (rng.gen::<f64>() - 0.5);
        let u = exp_neg_i_alpha(h.matrix(), alpha);
        let v = exp_neg_i_alpha(h.matrix(), -alpha);
        prop_assert!(max_abs_diff(&(u * v), &identity(dim)) < 1e-10);
    }

    #[test]
    fn partial_trace_undoes_tensor(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = rng_from_seed(seed);
        let a = random_density(da, &mut rng);
        let b = random_density(db, &mut rng);
        let joint = a.tensor(&b);
        let ra = retrosense::partial_trace(&joint, &[0]).expect("valid keep set");
        let rb = retrosense::partial_trace(&joint, &[1]).expect("valid keep set");
        prop_assert!(max_abs_diff(ra.matrix(), a.matrix()) < 1e-12);
        prop_assert!(max_abs_diff(rb.matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn fd_step_halving_is_stable(seed in any::<u64>()) {
        // Smooth single-qubit family: halving the step moves the FI by less
        // than 1e-4 relative.
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(2, 1.0, &mut rng);
        let u0 = random_unitary(2, &mut rng);
        let probe = StateVector::basis(2, 0).apply(&u0).expect("unitary");
        let dist = {
            let h = h.clone();
            let probe = probe.clone();
            ParamDistribution::new(vec!["0".into(), "1".into()], move |a| {
                let evolved = probe.apply(&exp_neg_i_alpha(h.matrix(), a)).expect("unitary");
                let p0 = evolved.amplitudes()[0].norm_sqr();
                vec![p0, 1.0 - p0]
            })
        };
        let alpha0 = 0.8;
        let f1 = classical_fi(&dist, alpha0, 1e-4).expect("valid").value;
        let f2 = classical_fi(&dist, alpha0, 5e-5).expect("valid").value;
        if f1 > 1e-6 {
            prop_assert!((f1 - f2).abs() / f1 < 1e-4, "f1 = {f1}, f2 = {f2}");
        }
    }

    #[test]
    fn qfi_gauge_invariance(seed in any::<u64>(), phase in 0.0..std::f64::consts::TAU) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(3, 1.0, &mut rng);
        let u0 = random_unitary(3, &mut rng);
        let probe = StateVector::basis(3, 0).apply(&u0).expect("unitary");
        let fam = {
            let h = h.clone();
            let probe = probe.clone();
            PureFamily::new(move |a| probe.apply(&exp_neg_i_alpha(h.matrix(), a)).expect("unitary"))
        };
        let rephased = {
            let h = h.clone();
            let probe = probe.clone();
            PureFamily::new(move |a| {
                let amps = probe
                    .apply(&exp_neg_i_alpha(h.matrix(), a))
                    .expect("unitary")
                    .amplitudes()
                    .clone()
                    * C64::from_polar(1.0, phase);
                StateVector::new(amps, vec![3]).expect("phase preserves norm")
            })
        };
        let q1 = qfi_pure(&fam, 0.4, 1e-5).expect("valid").value;
        let q2 = qfi_pure(&rephased, 0.4, 1e-5).expect("valid").value;
        prop_assert!((q1 - q2).abs() < 1e-9);
    }

    #[test]
    fn fixed_povm_never_beats_qfi(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(2, 1.0, &mut rng);
        let u0 = random_unitary(2, &mut rng);
        let probe = StateVector::basis(2, 0).apply(&u0).expect("unitary");
        // Random projective measurement.
        let basis = random_unitary(2, &mut rng);
        let povm: Vec<retrosense::linalg::CMatrix> = (0..2)
            .map(|k| {
                let col: CVector = basis.column(k).into_owned();
                &col * col.adjoint()
            })
            .collect();
        let dist = {
            let h = h.clone();
            let probe = probe.clone();
            let povm = povm.clone();
            ParamDistribution::new(vec!["0".into(), "1".into()], move |a| {
                let rho = probe
                    .apply(&exp_neg_i_alpha(h.matrix(), a))
                    .expect("unitary")
                    .to_density();
                povm_probabilities(&povm, &rho)
            })
        };
        let fam = {
            let h = h.clone();
            let probe = probe.clone();
            PureFamily::new(move |a| probe.apply(&exp_neg_i_alpha(h.matrix(), a)).expect("unitary"))
        };
        let alpha0 = 0.6;
        let fi = classical_fi(&dist, alpha0, 1e-5).expect("valid").value;
        let qfi = qfi_pure(&fam, alpha0, 1e-5).expect("valid").value;
        prop_assert!(fi <= qfi + 1e-6, "fi = {fi} > qfi = {qfi}");
    }

    #[test]
    fn switch_kraus_sets_stay_complete(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let a = random_channel(dim, 3, &mut rng);
        let b = random_channel(dim, 2, &mut rng);
        prop_assert!(ico::switch_completeness_deviation(&a, &b).expect("same dim") < 1e-10);
    }

    #[test]
    fn switch_output_is_physical_and_marginal_consistent(seed in any::<u64>(), dim in 2usize..4) {
        let mut rng = rng_from_seed(seed);
        let a = random_channel(dim, 2, &mut rng);
        let b = random_channel(dim, 3, &mut rng);
        let rho = random_density(dim, &mut rng);
        let control = {
            let u = random_unitary(2, &mut rng);
            StateVector::basis(2, 0).apply(&u).expect("unitary")
        };
        // Constructing the joint revalidates Hermiticity, trace, and PSD.
        let out = ico::switch_apply(&a, &b, &rho, &control).expect("valid switch output");
        let sys = out.system_marginal().expect("partial trace");
        let mixture = {
            let w0 = control.amplitudes()[0].norm_sqr();
            out.forward.scale(w0) + out.reverse.scale(1.0 - w0)
        };
        prop_assert!(max_abs_diff(sys.matrix(), &mixture) < 1e-10);
    }

    #[test]
    fn mixed_qfi_matches_pure_on_pure_families(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(dim, 1.0, &mut rng);
        let u0 = random_unitary(dim, &mut rng);
        let probe = StateVector::basis(dim, 0).apply(&u0).expect("unitary");
        let fam_pure = {
            let h = h.clone();
            let probe = probe.clone();
            PureFamily::new(move |a| probe.apply(&exp_neg_i_alpha(h.matrix(), a)).expect("unitary"))
        };
        let fam_mixed = {
            let h = h.clone();
            let probe = probe.clone();
            MixedFamily::new(move |a| {
                probe
                    .apply(&exp_neg_i_alpha(h.matrix(), a))
                    .expect("unitary")
                    .to_density()
            })
        };
        let qp = qfi_pure(&fam_pure, 0.3, 1e-5).expect("valid").value;
        let qm = qfi_mixed(&fam_mixed, 0.3, 1e-5).expect("valid").value;
        prop_assert!((qp - qm).abs() < 1e-8);
    }
}
