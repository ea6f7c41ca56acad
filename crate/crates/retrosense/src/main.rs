use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use retrosense::harness::{self, config::OUT_DIR_ENV, Protocol, ShotMode};

#[derive(Parser)]
#[command(
    name = "retrosense",
    about = "Parameter sweeps and verification for time-reversal quantum metrology protocols",
    after_help = "Run `retrosense schema` for the scenario config format."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario config (TOML); see `retrosense schema`.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config; $RETROSENSE_OUT overrides both).
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// "exact" or a shot count for multinomial sampling (overrides the config).
    #[arg(long)]
    shots: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Output directory for the verification report.
    #[arg(long, default_value = "runs/verify")]
    out: PathBuf,
    /// RNG seed for the randomized checks.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Hadamard echo: return probability and FI/QFI across alpha.
    Echo(RunArgs),
    /// Squeeze-kick-antisqueeze momentum amplification across r.
    Paramp(RunArgs),
    /// Two-mode SU(1,1) interferometer FI/QFI across alpha.
    Su11(RunArgs),
    /// Weak-value amplification FI comparison across alpha.
    Wva(RunArgs),
    /// Averaged fixed-probe baseline for an unknown field axis.
    Naive(RunArgs),
    /// Entangled probe with the axis revealed before readout.
    Hindsight(RunArgs),
    /// Singlet-survival sensing, axis never used.
    Agnostic(RunArgs),
    /// Qubit/antiqubit singlet sensing (4x agnostic FI).
    Positronium(RunArgs),
    /// Axis-free dephasing-strength estimation.
    #[command(name = "agnostic-dephasing")]
    AgnosticDephasing(RunArgs),
    /// Switch vs fixed-order QFI for the depolarizing family across r.
    #[command(name = "ico-seq-vs-switch")]
    IcoSeqVsSwitch(RunArgs),
    /// Control-only readout of a noisy rotation through the switch.
    #[command(name = "ico-noise-robust")]
    IcoNoiseRobust(RunArgs),
    /// Run the whole verification checklist and write the report.
    Verify(VerifyArgs),
    /// Print the scenario config schema.
    Schema,
}

fn protocol_of(command: &Command) -> Option<(Protocol, &RunArgs)> {
    match command {
        Command::Echo(a) => Some((Protocol::Echo, a)),
        Command::Paramp(a) => Some((Protocol::Paramp, a)),
        Command::Su11(a) => Some((Protocol::Su11, a)),
        Command::Wva(a) => Some((Protocol::Wva, a)),
        Command::Naive(a) => Some((Protocol::Naive, a)),
        Command::Hindsight(a) => Some((Protocol::Hindsight, a)),
        Command::Agnostic(a) => Some((Protocol::Agnostic, a)),
        Command::Positronium(a) => Some((Protocol::Positronium, a)),
        Command::AgnosticDephasing(a) => Some((Protocol::AgnosticDephasing, a)),
        Command::IcoSeqVsSwitch(a) => Some((Protocol::IcoSeqVsSwitch, a)),
        Command::IcoNoiseRobust(a) => Some((Protocol::IcoNoiseRobust, a)),
        Command::Verify(_) | Command::Schema => None,
    }
}

fn run_protocol(protocol: Protocol, args: &RunArgs) -> retrosense::Result<()> {
    let mut config = harness::load_config(&args.config, args.out.as_deref())?;
    if config.protocol != protocol {
        return Err(retrosense::Error::Config {
            path: "protocol".into(),
            message: format!(
                "config is for `{}` but the `{}` subcommand was invoked",
                config.protocol.id(),
                protocol.id()
            ),
        });
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(shots) = &args.shots {
        config.shots = ShotMode::parse(shots)?;
    }
    let output = harness::run(&config)?;
    println!(
        "{} sweep: {} grid points -> {}",
        protocol.id(),
        output.records.len(),
        output.csv_path.display()
    );
    println!(
        "{:<14} {:<14} {:<14} {:<14} warnings",
        config
            .grid
            .iter()
            .map(|(a, _)| a.as_str())
            .collect::<Vec<_>>()
            .join("/"),
        "fi",
        "qfi",
        "success"
    );
    for record in &output.records {
        let inputs = record
            .inputs
            .iter()
            .map(|(_, v)| format!("{v:.6}"))
            .collect::<Vec<_>>()
            .join("/");
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<14} {:<14} {:<14} {:<14} {}",
            inputs,
            cell(record.result.fi),
            cell(record.result.qfi),
            cell(record.result.success_prob),
            record.result.warnings.join("; ")
        );
    }
    println!("provenance: {}", output.provenance_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Schema => {
            print!("{}", harness::CONFIG_SCHEMA);
            ExitCode::SUCCESS
        }
        Command::Verify(args) => {
            let out = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) => PathBuf::from(dir),
                None => args.out.clone(),
            };
            match harness::run_verify(args.seed, &out) {
                Ok((rows, report)) => {
                    print!("{report}");
                    println!("report: {}", out.join("verify_report.txt").display());
                    if rows.iter().all(|r| r.pass) {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::FAILURE
                }
            }
        }
        other => {
            let (protocol, args) = protocol_of(other).expect("protocol subcommand");
            match run_protocol(protocol, args) {
                Ok(()) => ExitCode::SUCCESS,
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
