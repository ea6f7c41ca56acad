//! Tour of the Fisher-information toolbox: classical FI of a parameterized
//! distribution, pure- and mixed-state QFI, the generator ceiling, optimal
//! probes, and the Cramer-Rao bound.
//!
//!     cargo run --example fisher_toolkit

use retrosense::linalg::{exp_neg_i_alpha, CMatrix, CVector, C64};
use retrosense::states::{optimal_probe, pauli_z, HermitianOperator, StateVector};
use retrosense::{
    classical_fi, cramer_rao, generator_qfi_bound, qfi_mixed, qfi_pure, MixedFamily,
    ParamDistribution, PureFamily,
};

fn main() -> retrosense::Result<()> {
    // Classical FI of the coin {cos^2(alpha/2), sin^2(alpha/2)}: exactly 1
    // at every angle.
    let coin = ParamDistribution::new(vec!["heads".into(), "tails".into()], |a: f64| {
        let p = (a / 2.0).cos().powi(2);
        vec![p, 1.0 - p]
    });
    let fi = classical_fi(&coin, std::f64::consts::FRAC_PI_2, 1e-5)?;
    println!("coin cos^2(alpha/2): FI = {:.9} (analytic 1)", fi.value);

    // A rotating equal superposition reaches the generator's ceiling.
    let h = HermitianOperator::new(pauli_z().scale(0.5))?;
    let probe = optimal_probe(&h, 0.0)?;
    println!(
        "optimal probe for sigma_z/2: amplitudes {:?}",
        probe
            .amplitudes()
            .iter()
            .map(|z| format!("{:.3}{:+.3}i", z.re, z.im))
            .collect::<Vec<_>>()
    );
    let family = {
        let h = h.clone();
        let probe = probe.clone();
        PureFamily::new(move |a| probe.apply(&exp_neg_i_alpha(h.matrix(), a)).unwrap())
    };
    let qfi = qfi_pure(&family, 0.3, 1e-5)?;
    println!(
        "QFI of the rotating probe = {:.9}; generator ceiling (Delta H)^2 = {:.1}",
        qfi.value,
        generator_qfi_bound(&h)
    );
    println!(
        "Cramer-Rao bound after 100 trials: variance >= {:.6}",
        cramer_rao(&qfi, 100)?
    );

    // Mixed families go through the symmetric logarithmic derivative. A
    // classical eigenvalue family reproduces 1/(a(1-a)).
    let fam = MixedFamily::new(|a: f64| {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(1.0 - a, 0.0),
            C64::new(a, 0.0),
        ]));
        retrosense::DensityOperator::new(m, vec![2]).unwrap()
    });
    let q = qfi_mixed(&fam, 0.25, 1e-6)?;
    println!(
        "classical eigenvalue family at a = 1/4: QFI = {:.6} (analytic 16/3 = {:.6})",
        q.value,
        16.0 / 3.0
    );

    // Eigenstates of the generator acquire only a phase: no information.
    let eigenstate_family = PureFamily::new(move |a| {
        StateVector::basis(2, 0)
            .apply(&exp_neg_i_alpha(h.matrix(), a))
            .unwrap()
    });
    let zero = qfi_pure(&eigenstate_family, 0.3, 1e-5)?;
    println!(
        "eigenstate probe: QFI = {:.2e} (no sensitivity)",
        zero.value
    );
    Ok(())
}
