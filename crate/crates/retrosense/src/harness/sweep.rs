//! Sweep execution: grid points run independently (in parallel), records are
//! merged in grid order, and outputs are written atomically.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::echo::{self, EchoSpec, SqueezeSpec};
use crate::error::{Error, Result};
use crate::fisher;
use crate::harness::config::{Params, Protocol, ScenarioConfig, ShotMode};
use crate::ico;
use crate::linalg::CVector;
use crate::sampling;
use crate::scenario::ScenarioResult;
use crate::states::{hadamard, pauli_z, HermitianOperator, StateVector};
use crate::timeloop::{self, FieldSpec};
use crate::weakvalue::{self, GridProbe, WvaSpec};

/// One grid point's inputs and outputs.
#[derive(Debug, Clone)]
pub struct Record {
    /// Axis name -> value, in grid (sorted-name) order.
    pub inputs: Vec<(String, f64)>,
    pub result: ScenarioResult,
}

/// A finished sweep.
#[derive(Debug)]
pub struct SweepOutput {
    pub records: Vec<Record>,
    pub csv_path: PathBuf,
    pub provenance_path: PathBuf,
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

/// Cartesian product of the grid axes, row-major in sorted-axis order.
fn grid_points(grid: &[(String, Vec<f64>)]) -> Vec<Vec<(String, f64)>> {
    let mut points: Vec<Vec<(String, f64)>> = vec![Vec::new()];
    for (axis, values) in grid {
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for &v in values {
                let mut q = p.clone();
                q.push((axis.clone(), v));
                next.push(q);
            }
        }
        points = next;
    }
    points
}

fn axis(point: &[(String, f64)], name: &str) -> Option<f64> {
    point.iter().find(|(a, _)| a == name).map(|(_, v)| *v)
}

/// Runs the configured sweep, re-checks every record's invariants, and writes
/// the CSV and provenance files.
pub fn run(config: &ScenarioConfig) -> Result<SweepOutput> {
    let points = grid_points(&config.grid);
    let mut records: Vec<Record> = points
        .par_iter()
        .enumerate()
        .map(|(idx, point)| execute_point(config, idx as u64, point))
        .collect();

    // Optional multinomial sampling; per-point RNG keyed by (seed, index) so
    // parallel scheduling cannot reorder draws.
    if let ShotMode::Count(shots) = config.shots {
        for (idx, record) in records.iter_mut().enumerate() {
            if record.result.outcomes.is_empty() {
                continue;
            }
            let mut rng = sampling::rng_from_seed(
                config
                    .seed
                    .wrapping_add((idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            );
            let probs: Vec<f64> = record.result.outcomes.iter().map(|(_, p)| *p).collect();
            let freqs = sampling::multinomial_frequencies(&probs, shots, &mut rng);
            let rendered = record
                .result
                .outcomes
                .iter()
                .zip(freqs)
                .map(|((label, _), f)| format!("{label}:{}", fmt(f)))
                .collect::<Vec<_>>()
                .join(";");
            record.result.metadata.push(("empirical".into(), rendered));
        }
    }

    for record in &records {
        record.result.validate()?;
    }

    std::fs::create_dir_all(&config.out_dir)?;
    let csv_path = config
        .out_dir
        .join(format!("{}_records.csv", config.protocol.id()));
    let provenance_path = config
        .out_dir
        .join(format!("{}_provenance.txt", config.protocol.id()));
    write_atomic(&csv_path, &render_csv(config, &records))?;
    write_atomic(&provenance_path, &render_provenance(config))?;
    Ok(SweepOutput {
        records,
        csv_path,
        provenance_path,
    })
}

fn execute_point(config: &ScenarioConfig, idx: u64, point: &[(String, f64)]) -> Record {
    let result = match dispatch(config, idx, point) {
        Ok(result) => result,
        Err(err) => {
            // Precondition violations surface per grid point; the sweep
            // continues.
            let mut r = ScenarioResult::new(config.protocol.id());
            r.warnings.push(err.to_string());
            r
        }
    };
    Record {
        inputs: point.to_vec(),
        result,
    }
}

fn direction_for_point(params: &Params, seed: u64, idx: u64) -> [f64; 3] {
    params.direction.unwrap_or_else(|| {
        let mut rng =
            sampling::rng_from_seed(seed.wrapping_add(idx.wrapping_mul(0xD1B5_4A32_D192_ED03)));
        sampling::random_direction(&mut rng)
    })
}

fn dispatch(config: &ScenarioConfig, idx: u64, point: &[(String, f64)]) -> Result<ScenarioResult> {
    let params = &config.params;
    match config.protocol {
        Protocol::Echo => {
            let alpha = axis(point, "alpha").expect("validated grid");
            let spec = EchoSpec::new(
                hadamard(),
                HermitianOperator::new(pauli_z().scale(0.5))?,
                StateVector::basis(2, 0),
                alpha,
            )?;
            let run = echo::run_echo(&spec)?;
            let mut result = run.result;
            result = result.with_meta("closed_form_p0", fmt((alpha / 2.0).cos().powi(2)));
            Ok(result)
        }
        Protocol::Paramp => {
            let r = axis(point, "r").expect("validated grid");
            let alpha = axis(point, "alpha")
                .or(params.r.map(|_| 0.1))
                .unwrap_or(0.1);
            let spec = SqueezeSpec::new(
                r,
                std::f64::consts::FRAC_PI_2,
                params.g.unwrap_or(1.0),
                params.t.unwrap_or(1.0),
                params.fock_dim.unwrap_or(60),
            )?;
            let report = echo::parametric_amplification(&spec, alpha)?;
            let mut result = ScenarioResult::new("paramp");
            result = result
                .with_meta("displacement", fmt(report.displacement))
                .with_meta("bare_displacement", fmt(report.bare_displacement))
                .with_meta("ratio", fmt(report.ratio))
                .with_meta("expected_ratio", fmt(r.exp()))
                .with_meta("max_tail_mass", fmt(report.max_tail_mass));
            Ok(result)
        }
        Protocol::Su11 => {
            let alpha = axis(point, "alpha").expect("validated grid");
            let r = axis(point, "r").or(params.r).unwrap_or(0.5);
            let run = echo::su11_interferometer(r, alpha, params.fock_dim.unwrap_or(25))?;
            let mut result = run.result;
            // Joint-number outcomes above the reporting floor.
            let d = params.fock_dim.unwrap_or(25);
            result.outcomes = run
                .distribution
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 1e-12)
                .map(|(i, &p)| (format!("n=({},{})", i / d, i % d), p))
                .collect();
            // Reported outcomes are a truncation of the full distribution;
            // renormalize the display set so the record invariant holds.
            let total: f64 = result.outcomes.iter().map(|(_, p)| *p).sum();
            for (_, p) in &mut result.outcomes {
                *p /= total;
            }
            Ok(result)
        }
        Protocol::Wva => {
            let alpha = axis(point, "alpha").expect("validated grid");
            let overlap = params.postselect_overlap.unwrap_or(0.9);
            let delta_phi = params.delta_phi.unwrap_or(1.0);
            let norm = (1.0 + overlap * overlap).sqrt();
            let psi_f = StateVector::new(
                CVector::from_vec(vec![
                    crate::linalg::C64::new(1.0 / norm, 0.0),
                    crate::linalg::C64::new(-overlap / norm, 0.0),
                ]),
                vec![2],
            )?;
            let plus = StateVector::new(
                CVector::from_vec(vec![
                    crate::linalg::C64::new(1.0 / 2f64.sqrt(), 0.0),
                    crate::linalg::C64::new(1.0 / 2f64.sqrt(), 0.0),
                ]),
                vec![2],
            )?;
            let spec = WvaSpec::new(
                HermitianOperator::new(pauli_z())?,
                plus,
                psi_f,
                GridProbe::gaussian_default(delta_phi)?,
                alpha,
            )?;
            let cmp = weakvalue::fi_comparison(&spec)?;
            let report = weakvalue::pointer_approximation_check(&spec)?;
            let joint_qfi = weakvalue::joint_state_qfi(&spec)?;
            let mut result = ScenarioResult::new("wva");
            result.fi = Some(cmp.fi_ps);
            result.qfi = Some(joint_qfi.value);
            result.success_prob = Some(cmp.success_prob);
            result = result
                .with_meta("weak_value", fmt(spec.weak_value().re))
                .with_meta("fi_no_ps", fmt(cmp.fi_no_ps))
                .with_meta("fi_ps", fmt(cmp.fi_ps))
                .with_meta("analytic_fi_no_ps", fmt(cmp.analytic_no_ps))
                .with_meta("analytic_fi_ps", fmt(cmp.analytic_ps))
                .with_meta("approx_state_distance", fmt(report.state_distance))
                .with_meta("weakness_ratio", fmt(report.weakness_ratio));
            if let Some(w) = report.warning {
                result.warnings.push(w);
            }
            Ok(result)
        }
        Protocol::Naive => {
            let alpha = axis(point, "alpha").expect("validated grid");
            let avg = timeloop::naive_average_fi(alpha)?;
            let mut result = ScenarioResult::new("naive");
            result.fi = Some(avg);
            result = result.with_meta("expected", fmt(2.0 / 3.0));
            Ok(result)
        }
        Protocol::Hindsight | Protocol::Agnostic | Protocol::Positronium => {
            let alpha = axis(point, "alpha").expect("validated grid");
            let direction = direction_for_point(params, config.seed, idx);
            let field = FieldSpec::new(direction, alpha)?;
            let tl = match config.protocol {
                Protocol::Hindsight => timeloop::hindsight(&field)?,
                Protocol::Agnostic => timeloop::agnostic(&field)?,
                _ => timeloop::positronium(&field)?,
            };
            Ok(timeloop_to_scenario(tl, params))
        }
        Protocol::AgnosticDephasing => {
            let s = axis(point, "s").expect("validated grid");
            let direction = direction_for_point(params, config.seed, idx);
            let tl = timeloop::agnostic_dephasing(s, direction)?;
            Ok(timeloop_to_scenario(tl, params))
        }
        Protocol::IcoSeqVsSwitch => {
            let r = axis(point, "r").expect("validated grid");
            let family = ico::depolarizing_family(2);
            let rho = StateVector::basis(2, 0).to_density();
            let step = 1e-5;
            let cmp = ico::switch_vs_sequential_qfi(&family, &rho, r, step)?;
            let mut result = ScenarioResult::new("ico-seq-vs-switch");
            result.qfi = Some(cmp.qfi_switch.value);
            result = result
                .with_meta("qfi_switch", fmt(cmp.qfi_switch.value))
                .with_meta("qfi_seq", fmt(cmp.qfi_seq.value))
                .with_meta("seq_to_switch_ratio", fmt(cmp.sequential_fraction()));
            Ok(result)
        }
        Protocol::IcoNoiseRobust => {
            let alpha = axis(point, "alpha").expect("validated grid");
            let noise_r = axis(point, "noise_r").or(params.noise_r).unwrap_or(0.7);
            let noise = ico::depolarize(noise_r, 2)?;
            let h = HermitianOperator::new(pauli_z().scale(0.5))?;
            let plus = StateVector::new(
                CVector::from_vec(vec![
                    crate::linalg::C64::new(1.0 / 2f64.sqrt(), 0.0),
                    crate::linalg::C64::new(1.0 / 2f64.sqrt(), 0.0),
                ]),
                vec![2],
            )?;
            let readout = ico::noise_robust_control_readout(
                move |a| crate::linalg::exp_neg_i_alpha(h.matrix(), a),
                &noise,
                &StateVector::basis(2, 0).to_density(),
                &plus.to_density(),
                alpha,
                1e-5,
            )?;
            let mut result = ScenarioResult::new("ico-noise-robust");
            result.qfi = Some(readout.qfi_control.value);
            result = result
                .with_meta("qfi_control", fmt(readout.qfi_control.value))
                .with_meta("qfi_system", fmt(readout.qfi_system.value))
                .with_meta("noise_r", fmt(noise_r));
            Ok(result)
        }
    }
}

fn timeloop_to_scenario(tl: timeloop::TimeLoopResult, params: &Params) -> ScenarioResult {
    let mut result = ScenarioResult::new(tl.protocol.clone());
    result.outcomes = tl.outcomes.clone();
    result.fi = Some(tl.fi);
    result = result.with_meta("theoretical_max", fmt(tl.theoretical_max));
    match tl.direction_used {
        timeloop::DirectionUse::Revealed(n) => {
            result = result.with_meta(
                "direction",
                format!("[{},{},{}]", fmt(n[0]), fmt(n[1]), fmt(n[2])),
            );
        }
        timeloop::DirectionUse::Agnostic => {
            result = result.with_meta("direction", "agnostic");
        }
    }
    if tl.fi.is_finite() && tl.fi > 0.0 {
        let trials = params.trials.unwrap_or(1);
        let bound = fisher::cramer_rao(
            &fisher::FiResult {
                value: tl.fi,
                alpha0: 0.0,
                method: fisher::FiMethod::FiniteDifference,
            },
            trials,
        )
        .expect("fi > 0");
        result = result.with_meta("cramer_rao_bound", fmt(bound));
    }
    result
}

fn render_csv(config: &ScenarioConfig, records: &[Record]) -> String {
    let mut meta_keys: Vec<String> = Vec::new();
    {
        let mut seen = BTreeMap::new();
        for r in records {
            for (k, _) in &r.result.metadata {
                seen.entry(k.clone()).or_insert(());
            }
        }
        meta_keys.extend(seen.into_keys());
    }
    let axes: Vec<&String> = config.grid.iter().map(|(a, _)| a).collect();
    let mut out = String::new();
    let mut header: Vec<String> = axes.iter().map(|a| a.to_string()).collect();
    header.extend(["fi", "qfi", "success_prob"].iter().map(|s| s.to_string()));
    header.extend(meta_keys.iter().cloned());
    header.push("outcomes".into());
    header.push("warnings".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for r in records {
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for a in &axes {
            let v = axis(&r.inputs, a).expect("record carries its grid axes");
            row.push(fmt(v));
        }
        for v in [r.result.fi, r.result.qfi, r.result.success_prob] {
            row.push(v.map(fmt).unwrap_or_default());
        }
        for k in &meta_keys {
            let v = r
                .result
                .metadata
                .iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            row.push(v);
        }
        let outcomes = r
            .result
            .outcomes
            .iter()
            .filter(|(_, p)| *p > 1e-12)
            .map(|(l, p)| format!("{l}:{}", fmt(*p)))
            .collect::<Vec<_>>()
            .join(";");
        row.push(outcomes);
        row.push(r.result.warnings.join(";").replace(',', ";"));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn render_provenance(config: &ScenarioConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "retrosense {}\nprotocol: {}\nseed: {}\nshots: {}\n",
        env!("CARGO_PKG_VERSION"),
        config.protocol.id(),
        config.seed,
        config.shots.describe()
    ));
    out.push_str("grid:\n");
    for (axis, values) in &config.grid {
        out.push_str(&format!(
            "  {axis}: {} points in [{}, {}]\n",
            values.len(),
            fmt(values.iter().cloned().fold(f64::INFINITY, f64::min)),
            fmt(values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        ));
    }
    out.push_str("tolerances:\n");
    out.push_str(&format!(
        "  state_norm: {:e}\n  hermitian: {:e}\n  cptp: {:e}\n  psd_floor: {:e}\n",
        crate::states::NORM_TOL,
        crate::states::HERMITIAN_TOL,
        crate::channels::CPTP_TOL,
        crate::states::PSD_FLOOR,
    ));
    out.push_str(&format!(
        "  probability_cutoff: {:e}\n  sld_cutoff: {:e}\n  fock_tail_limit: {:e}\n",
        crate::fisher::PROBABILITY_CUTOFF,
        crate::fisher::SLD_CUTOFF,
        crate::fock::TAIL_MASS_LIMIT,
    ));
    out
}

/// Writes through a temp file plus rename so readers never observe partial
/// output.
pub fn write_atomic(path: &std::path::Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).map_err(Error::Io)
}
