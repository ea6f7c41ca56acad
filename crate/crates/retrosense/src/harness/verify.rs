//! The verification checklist: every headline number the library is supposed
//! to reproduce, each with its expected value, tolerance, and observed value.
//! The acceptance test suite asserts these rows; the `verify` subcommand
//! prints them.

use crate::echo::{self, EchoSpec, SqueezeSpec};
use crate::error::Result;
use crate::fisher::{self, MixedFamily, PureFamily};
use crate::harness::sweep::write_atomic;
use crate::ico;
use crate::linalg::{exp_neg_i_alpha, CVector, C64};
use crate::sampling;
use crate::states::{hadamard, pauli_z, DensityOperator, HermitianOperator, StateVector};
use crate::timeloop::{self, FieldSpec};
use crate::weakvalue::{self, GridProbe, WvaSpec};

/// Pre-registered oracle value for the control-marginal QFI under full
/// depolarization: the entire switch output is parameter-independent there,
/// so the information is exactly zero. (Partial depolarization moves finite
/// information into the control; see `ico::noise_robust_control_readout`.)
pub const CONTROL_QFI_FULL_DEPOLARIZATION: f64 = 0.0;

/// One checklist row.
#[derive(Debug, Clone)]
pub struct CriterionRow {
    pub id: &'static str,
    pub claim: &'static str,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    pub pass: bool,
    /// Wall time of the whole criterion group this row belongs to. Not part
    /// of the rendered report (reports must be byte-reproducible).
    pub group_elapsed: std::time::Duration,
}

fn fmt(v: f64) -> String {
    format!("{v:.6e}")
}

fn row(
    id: &'static str,
    claim: &'static str,
    expected: String,
    observed: String,
    tolerance: String,
    pass: bool,
) -> CriterionRow {
    CriterionRow {
        id,
        claim,
        expected,
        observed,
        tolerance,
        pass,
        group_elapsed: std::time::Duration::ZERO,
    }
}

/// Random echo pair on `qubits` qubits with a non-degenerate probe
/// sensitivity (the protocol presumes a preparation that does not commute
/// with the generator; near-zero-variance draws are resampled).
fn random_echo_pair(
    qubits: usize,
    rng: &mut impl rand::Rng,
) -> (crate::linalg::CMatrix, HermitianOperator) {
    let dim = 1 << qubits;
    loop {
        let v = sampling::random_unitary(dim, rng);
        let h = sampling::random_hermitian(dim, 1.5, rng);
        let probe = StateVector::basis(dim, 0).apply(&v).expect("unitary");
        let mean = probe.expectation(&h).expect("matched dims");
        let h2 = HermitianOperator::new(h.matrix() * h.matrix()).expect("Hermitian square");
        let var = probe.expectation(&h2).expect("matched dims") - mean * mean;
        if 4.0 * var >= 0.5 {
            return (v, h);
        }
    }
}

fn criterion_1(rows: &mut Vec<CriterionRow>, seed: u64) {
    let mut rng = sampling::rng_from_seed(seed ^ 0x45_43_48_4f);
    let mut max_gap: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    let mut resolvable = 0usize;
    for trial in 0..20 {
        let qubits = if trial < 10 { 1 } else { 2 };
        let (v, h) = random_echo_pair(qubits, &mut rng);
        let initial = StateVector::basis(1 << qubits, 0);
        let gap_at = |alpha: f64| -> f64 {
            let spec =
                EchoSpec::new(v.clone(), h.clone(), initial.clone(), alpha).expect("valid spec");
            echo::echo_fi_matches_qfi(&spec).expect("weak regime").gap
        };
        let g1 = gap_at(1e-3);
        let g2 = gap_at(5e-4);
        max_gap = max_gap.max(g1);
        // The quadratic-shrink contract is read off pairs whose gap clears
        // the f64 resolution floor; below it the ratio is 0/0 noise while
        // the <= 1e-4 bound already holds by orders of magnitude.
        if g1 > 1e-8 {
            resolvable += 1;
            min_ratio = min_ratio.min(g1 / g2);
        }
    }
    rows.push(row(
        "1a",
        "echo FI matches evolved-probe QFI at alpha = 1e-3 (20 random pairs, 1-2 qubits)",
        "gap <= 1.0e-4".into(),
        format!("max gap {}", fmt(max_gap)),
        "1.0e-4".into(),
        max_gap <= 1e-4,
    ));
    rows.push(row(
        "1b",
        "echo FI-QFI gap shrinks >= 3.5x when alpha halves (resolvable pairs)",
        ">= 3.5".into(),
        format!("min ratio {} over {} pairs", fmt(min_ratio), resolvable),
        "ratio >= 3.5, >= 10 resolvable".into(),
        min_ratio >= 3.5 && resolvable >= 10,
    ));
}

fn criterion_2(rows: &mut Vec<CriterionRow>) {
    let h = HermitianOperator::new(pauli_z().scale(0.5)).expect("Hermitian");
    let mut max_dev: f64 = 0.0;
    for k in 0..50 {
        let alpha = -1.5 + 3.0 * k as f64 / 49.0;
        let spec = EchoSpec::new(hadamard(), h.clone(), StateVector::basis(2, 0), alpha)
            .expect("valid spec");
        let [p0, _] = echo::echo_probabilities(&spec, alpha);
        max_dev = max_dev.max((p0 - (alpha / 2.0).cos().powi(2)).abs());
    }
    rows.push(row(
        "2",
        "Hadamard echo return probability is cos^2(alpha/2) over 50 alpha values",
        "deviation 0".into(),
        format!("max deviation {}", fmt(max_dev)),
        "1.0e-12".into(),
        max_dev <= 1e-12,
    ));
}

fn criterion_3(rows: &mut Vec<CriterionRow>) {
    let mut max_rel_err: f64 = 0.0;
    let mut max_conv: f64 = 0.0;
    for r in [0.25, 0.5, 1.0] {
        let ratio_at = |d: usize| -> f64 {
            let spec =
                SqueezeSpec::new(r, std::f64::consts::FRAC_PI_2, 1.0, 1.0, d).expect("valid spec");
            echo::parametric_amplification(&spec, 0.1)
                .expect("within truncation")
                .ratio
        };
        let r60 = ratio_at(60);
        let r120 = ratio_at(120);
        max_rel_err = max_rel_err.max((r60 - r.exp()).abs() / r.exp());
        max_conv = max_conv.max((r120 - r60).abs() / r60);
    }
    rows.push(row(
        "3a",
        "parametric amplification boosts the kick by e^r (r in {0.25, 0.5, 1.0}, D = 60)",
        "ratio = e^r".into(),
        format!("max relative error {}", fmt(max_rel_err)),
        "1% relative".into(),
        max_rel_err <= 0.01,
    ));
    rows.push(row(
        "3b",
        "kick ratio converges under doubling the truncation",
        "change < 0.1%".into(),
        format!("max relative change {}", fmt(max_conv)),
        "1.0e-3 relative".into(),
        max_conv <= 1e-3,
    ));
}

fn criterion_4(rows: &mut Vec<CriterionRow>) {
    let run = echo::su11_interferometer(0.5, 1e-3, 25).expect("within truncation");
    let fi = run.result.fi.unwrap_or(0.0);
    let qfi = run.result.qfi.unwrap_or(f64::INFINITY);
    rows.push(row(
        "4",
        "SU(1,1) joint photon-number FI reaches the pre-measurement QFI (r = 0.5, D = 25)",
        "FI >= 0.99 QFI".into(),
        format!("FI/QFI = {}", fmt(fi / qfi)),
        "ratio >= 0.99".into(),
        fi >= 0.99 * qfi,
    ));
}

fn wva_spec(alpha: f64) -> WvaSpec {
    let norm = (1.0f64 + 0.81).sqrt();
    let psi_f = StateVector::new(
        CVector::from_vec(vec![C64::new(1.0 / norm, 0.0), C64::new(-0.9 / norm, 0.0)]),
        vec![2],
    )
    .expect("normalized");
    let plus = StateVector::new(
        CVector::from_vec(vec![
            C64::new(1.0 / 2f64.sqrt(), 0.0),
            C64::new(1.0 / 2f64.sqrt(), 0.0),
        ]),
        vec![2],
    )
    .expect("normalized");
    WvaSpec::new(
        HermitianOperator::new(pauli_z()).expect("Hermitian"),
        plus,
        psi_f,
        GridProbe::gaussian_default(1.0).expect("valid grid"),
        alpha,
    )
    .expect("valid spec")
}

fn criterion_5(rows: &mut Vec<CriterionRow>) {
    // A_w = 19, delta_phi = 100 alpha |A_w|.
    let alpha = 1.0 / 1900.0;
    let cmp = weakvalue::fi_comparison(&wva_spec(alpha)).expect("weak regime");
    let ratio = cmp.fi_ps / cmp.fi_no_ps;
    rows.push(row(
        "5a",
        "postselection amplifies the per-probe FI by |A_w|^2 / <A^2> = 361",
        "361".into(),
        format!("fi_ps/fi_no_ps = {}", fmt(ratio)),
        "10% relative".into(),
        (ratio - 361.0).abs() / 361.0 <= 0.10,
    ));
    let d1 = weakvalue::pointer_approximation_check(&wva_spec(2e-3))
        .expect("valid")
        .state_distance;
    let d2 = weakvalue::pointer_approximation_check(&wva_spec(1e-3))
        .expect("valid")
        .state_distance;
    let shrink = d1 / d2;
    rows.push(row(
        "5b",
        "first-order postselected-pointer approximation error scales as alpha^2",
        "distance ratio 4 under halving".into(),
        format!("ratio {}", fmt(shrink)),
        "4 +- 0.5".into(),
        (3.5..=4.5).contains(&shrink),
    ));
}

fn criterion_6(rows: &mut Vec<CriterionRow>, seed: u64) {
    let naive = timeloop::naive_average_fi(0.7).expect("alpha in range");
    rows.push(row(
        "6a",
        "averaged single-qubit probing of an unknown axis yields mean QFI 2/3",
        "2/3".into(),
        format!("{:.12e}", naive),
        "1.0e-9".into(),
        (naive - 2.0 / 3.0).abs() <= 1e-9,
    ));

    let mut rng = sampling::rng_from_seed(seed ^ 0x4c_4f_4f_50);
    let alpha = std::f64::consts::FRAC_PI_3;
    let mut hindsight_fis = Vec::new();
    let mut agnostic_fis = Vec::new();
    let mut positronium_fis = Vec::new();
    let mut max_survival_dev: f64 = 0.0;
    for _ in 0..50 {
        let n = sampling::random_direction(&mut rng);
        let field = FieldSpec::new(n, alpha).expect("unit direction");
        hindsight_fis.push(timeloop::hindsight(&field).expect("valid").fi);
        let ag = timeloop::agnostic(&field).expect("valid");
        agnostic_fis.push(ag.fi);
        max_survival_dev =
            max_survival_dev.max((ag.outcomes[0].1 - (alpha / 2.0).cos().powi(2)).abs());
        positronium_fis.push(timeloop::positronium(&field).expect("valid").fi);
    }
    let dev = |v: &[f64], target: f64| -> f64 {
        v.iter().map(|x| (x - target).abs()).fold(0.0, f64::max)
    };
    let spread = |v: &[f64]| -> f64 {
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    rows.push(row(
        "6b",
        "hindsight sensing extracts FI = 1 (50 random axes)",
        "1".into(),
        format!("max |FI - 1| = {}", fmt(dev(&hindsight_fis, 1.0))),
        "1.0e-6".into(),
        dev(&hindsight_fis, 1.0) <= 1e-6,
    ));
    rows.push(row(
        "6c",
        "agnostic sensing extracts FI = 1 (50 random axes)",
        "1".into(),
        format!("max |FI - 1| = {}", fmt(dev(&agnostic_fis, 1.0))),
        "1.0e-6".into(),
        dev(&agnostic_fis, 1.0) <= 1e-6,
    ));
    rows.push(row(
        "6d",
        "agnostic singlet survival is cos^2(alpha/2)",
        "cos^2(alpha/2)".into(),
        format!("max deviation {}", fmt(max_survival_dev)),
        "1.0e-12".into(),
        max_survival_dev <= 1e-12,
    ));
    rows.push(row(
        "6e",
        "qubit/antiqubit sensing extracts FI = 4 (50 random axes)",
        "4".into(),
        format!("max |FI - 4| = {}", fmt(dev(&positronium_fis, 4.0))),
        "1.0e-6".into(),
        dev(&positronium_fis, 4.0) <= 1e-6,
    ));
    let max_spread = spread(&hindsight_fis)
        .max(spread(&agnostic_fis))
        .max(spread(&positronium_fis));
    rows.push(row(
        "6f",
        "time-loop FI values are axis-independent",
        "spread 0".into(),
        format!("max spread {}", fmt(max_spread)),
        "1.0e-6".into(),
        max_spread <= 1e-6,
    ));
}

fn criterion_7(rows: &mut Vec<CriterionRow>, seed: u64) {
    let mut rng = sampling::rng_from_seed(seed ^ 0x4543_484f_3232);
    let mut max_dev: f64 = 0.0;
    for _ in 0..10 {
        let n = sampling::random_direction(&mut rng);
        let alpha = 0.9;
        let field = FieldSpec::new(n, alpha).expect("unit");
        let v = timeloop::singlet_preparer();
        for pair in [false, true] {
            let h = timeloop::echo_equivalent_generator(&field, pair).expect("unit");
            let spec = EchoSpec::new(
                v.clone(),
                h,
                StateVector::basis(2, 0).tensor(&StateVector::basis(2, 0)),
                alpha,
            )
            .expect("valid spec");
            let [p0, _] = echo::echo_probabilities(&spec, alpha);
            let protocol_p = if pair {
                timeloop::positronium(&field).expect("valid").outcomes[0].1
            } else {
                timeloop::agnostic(&field).expect("valid").outcomes[0].1
            };
            max_dev = max_dev.max((p0 - protocol_p).abs());
        }
    }
    rows.push(row(
        "7",
        "agnostic/positronium distributions replay exactly through the echo pipeline",
        "identical".into(),
        format!("max deviation {}", fmt(max_dev)),
        "1.0e-12".into(),
        max_dev <= 1e-12,
    ));
}

fn criterion_8(rows: &mut Vec<CriterionRow>) {
    let family = ico::depolarizing_family(2);
    let rho = StateVector::basis(2, 0).to_density();
    let grid = [0.05, 0.1, 0.2, 0.5, 0.9, 1.0];
    let mut ordering_ok = true;
    let mut fractions = Vec::new();
    for &r in &grid {
        let cmp = ico::switch_vs_sequential_qfi(&family, &rho, r, 1e-5).expect("valid");
        if cmp.qfi_switch.value < cmp.qfi_seq.value - 1e-6 {
            ordering_ok = false;
        }
        fractions.push(cmp.sequential_fraction());
    }
    rows.push(row(
        "8a",
        "switch QFI dominates sequential QFI across the depolarizing grid",
        "qfi_switch >= qfi_seq".into(),
        format!(
            "fractions {}",
            fractions
                .iter()
                .map(|f| fmt(*f))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        "1.0e-6 slack".into(),
        ordering_ok,
    ));
    let strictly_decreasing = fractions.windows(2).all(|w| w[1] < w[0]);
    let vanishes = fractions[grid.len() - 1].abs() <= 1e-9;
    rows.push(row(
        "8b",
        "sequential-to-switch information ratio falls strictly with r and hits 0 at r = 1",
        "strictly decreasing to 0".into(),
        format!(
            "{} .. {}",
            fmt(fractions[0]),
            fmt(fractions[grid.len() - 1])
        ),
        "strict; |ratio(1)| <= 1e-9".into(),
        strictly_decreasing && vanishes,
    ));
    let unitary_family = ico::ParamChannel::new(|a| {
        let h = HermitianOperator::new(pauli_z().scale(0.5)).expect("Hermitian");
        crate::channels::KrausChannel::from_unitary(exp_neg_i_alpha(h.matrix(), a))
            .expect("unitary")
    });
    let plus_rho = {
        let plus = StateVector::new(
            CVector::from_vec(vec![
                C64::new(1.0 / 2f64.sqrt(), 0.0),
                C64::new(1.0 / 2f64.sqrt(), 0.0),
            ]),
            vec![2],
        )
        .expect("normalized");
        plus.to_density()
    };
    let cmp = ico::switch_vs_sequential_qfi(&unitary_family, &plus_rho, 0.4, 1e-5).expect("valid");
    let eq_dev = (cmp.qfi_switch.value - cmp.qfi_seq.value).abs();
    rows.push(row(
        "8c",
        "commuting-Kraus (unitary) family: switch and sequential QFI coincide",
        "equal".into(),
        format!("|difference| = {}", fmt(eq_dev)),
        "1.0e-9".into(),
        eq_dev <= 1e-9,
    ));
}

fn criterion_9(rows: &mut Vec<CriterionRow>) {
    let h = HermitianOperator::new(pauli_z().scale(0.5)).expect("Hermitian");
    let plus = StateVector::new(
        CVector::from_vec(vec![
            C64::new(1.0 / 2f64.sqrt(), 0.0),
            C64::new(1.0 / 2f64.sqrt(), 0.0),
        ]),
        vec![2],
    )
    .expect("normalized");
    let readout = ico::noise_robust_control_readout(
        move |a| exp_neg_i_alpha(h.matrix(), a),
        &ico::depolarize(1.0, 2).expect("valid"),
        &StateVector::basis(2, 0).to_density(),
        &plus.to_density(),
        0.7,
        1e-5,
    )
    .expect("valid");
    rows.push(row(
        "9a",
        "full depolarization leaves the system marginal uninformative",
        "0".into(),
        format!("qfi_system = {}", fmt(readout.qfi_system.value)),
        "1.0e-9".into(),
        readout.qfi_system.value <= 1e-9,
    ));
    rows.push(row(
        "9b",
        "control-marginal QFI matches the pre-registered direct-assembly oracle value",
        fmt(CONTROL_QFI_FULL_DEPOLARIZATION),
        format!("qfi_control = {}", fmt(readout.qfi_control.value)),
        "1.0e-6".into(),
        (readout.qfi_control.value - CONTROL_QFI_FULL_DEPOLARIZATION).abs() <= 1e-6,
    ));
}

fn criterion_10(rows: &mut Vec<CriterionRow>, seed: u64) {
    let mut rng = sampling::rng_from_seed(seed ^ 0x4f_52_41_43);
    let mut max_pure_mixed_dev: f64 = 0.0;
    for trial in 0..20 {
        let dim = 2 + (trial % 3);
        let h = sampling::random_hermitian(dim, 1.0, &mut rng);
        let psi0 = {
            let u = sampling::random_unitary(dim, &mut rng);
            StateVector::basis(dim, 0).apply(&u).expect("unitary")
        };
        let fam_pure = {
            let h = h.clone();
            let psi0 = psi0.clone();
            PureFamily::new(move |a| {
                psi0.apply(&exp_neg_i_alpha(h.matrix(), a))
                    .expect("unitary")
            })
        };
        let fam_mixed = {
            let h = h.clone();
            let psi0 = psi0.clone();
            MixedFamily::new(move |a| {
                psi0.apply(&exp_neg_i_alpha(h.matrix(), a))
                    .expect("unitary")
                    .to_density()
            })
        };
        let qp = fisher::qfi_pure(&fam_pure, 0.3, 1e-5).expect("valid").value;
        let qm = fisher::qfi_mixed(&fam_mixed, 0.3, 1e-5)
            .expect("valid")
            .value;
        max_pure_mixed_dev = max_pure_mixed_dev.max((qp - qm).abs());
    }
    rows.push(row(
        "10a",
        "mixed-state QFI agrees with the pure-state formula on 20 random pure families",
        "identical".into(),
        format!("max |difference| = {}", fmt(max_pure_mixed_dev)),
        "1.0e-8".into(),
        max_pure_mixed_dev <= 1e-8,
    ));

    let mut max_violation: f64 = 0.0;
    for _ in 0..20 {
        let h = sampling::random_hermitian(2, 1.0, &mut rng);
        // Mixed base state with eigenvalues bounded away from zero.
        let w = 0.1 + 0.8 * rand::Rng::gen::<f64>(&mut rng);
        let u = sampling::random_unitary(2, &mut rng);
        let base = {
            let diag = crate::linalg::CMatrix::from_fn(2, 2, |i, j| {
                if i == j {
                    C64::new(if i == 0 { w } else { 1.0 - w }, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            DensityOperator::new(&u * diag * u.adjoint(), vec![2]).expect("valid")
        };
        let channel = sampling::random_channel(2, 3, &mut rng);
        let fam = {
            let h = h.clone();
            let base = base.clone();
            MixedFamily::new(move |a| {
                let u = exp_neg_i_alpha(h.matrix(), a);
                DensityOperator::new(&u * base.matrix() * u.adjoint(), vec![2])
                    .expect("unitary conjugation")
            })
        };
        let fam_processed = {
            let h = h.clone();
            let base = base.clone();
            let channel = channel.clone();
            MixedFamily::new(move |a| {
                let u = exp_neg_i_alpha(h.matrix(), a);
                let rho = DensityOperator::new(&u * base.matrix() * u.adjoint(), vec![2])
                    .expect("unitary conjugation");
                channel.apply(&rho).expect("matched dims")
            })
        };
        let q = fisher::qfi_mixed(&fam, 0.2, 1e-5).expect("valid").value;
        let q_processed = fisher::qfi_mixed(&fam_processed, 0.2, 1e-5)
            .expect("valid")
            .value;
        max_violation = max_violation.max(q_processed - q);
    }
    rows.push(row(
        "10b",
        "QFI never increases under parameter-independent channels (20 random pairs)",
        "no violation".into(),
        format!("max (processed - original) = {}", fmt(max_violation)),
        "1.0e-6 slack".into(),
        max_violation <= 1e-6,
    ));
}

/// Runs criteria 1-10 and returns their rows, each tagged with its
/// criterion group's wall time.
pub fn checklist(seed: u64) -> Vec<CriterionRow> {
    let mut rows = Vec::new();
    let mut timed = |f: &dyn Fn(&mut Vec<CriterionRow>)| {
        let start = std::time::Instant::now();
        let before = rows.len();
        f(&mut rows);
        let elapsed = start.elapsed();
        for row in &mut rows[before..] {
            row.group_elapsed = elapsed;
        }
    };
    timed(&|rows| criterion_1(rows, seed));
    timed(&criterion_2);
    timed(&criterion_3);
    timed(&criterion_4);
    timed(&criterion_5);
    timed(&|rows| criterion_6(rows, seed));
    timed(&|rows| criterion_7(rows, seed));
    timed(&criterion_8);
    timed(&criterion_9);
    timed(&|rows| criterion_10(rows, seed));
    rows
}

/// Full verification: criteria 1-10 twice (for the determinism row) plus the
/// rendered report.
pub fn verify_paper_numbers(seed: u64) -> (Vec<CriterionRow>, String) {
    let rows_first = checklist(seed);
    let first = render_table(&rows_first);
    let second = render_table(&checklist(seed));
    let deterministic = first == second;
    let mut rows = rows_first;
    rows.push(row(
        "11",
        "rerunning the checklist with the same seed reproduces the report byte for byte",
        "identical bytes".into(),
        if deterministic {
            "identical".into()
        } else {
            "mismatch".into()
        },
        "exact".into(),
        deterministic,
    ));
    let report = render_table(&rows);
    (rows, report)
}

pub fn render_table(rows: &[CriterionRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<4} {:<6} {:<84} {:<36} {:<40} {:<28}\n",
        "id", "status", "claim", "expected", "observed", "tolerance"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<4} {:<6} {:<84} {:<36} {:<40} {:<28}\n",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.claim,
            r.expected,
            r.observed,
            r.tolerance
        ));
    }
    out
}

/// Runs the checklist, writes the report, and returns the rows.
pub fn run_verify(seed: u64, out_dir: &std::path::Path) -> Result<(Vec<CriterionRow>, String)> {
    let (rows, report) = verify_paper_numbers(seed);
    std::fs::create_dir_all(out_dir)?;
    write_atomic(&out_dir.join("verify_report.txt"), &report)?;
    Ok((rows, report))
}
