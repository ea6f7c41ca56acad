//! Declarative sweep configuration: one TOML file per scenario.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Environment variable that overrides the output directory (and nothing else).
pub const OUT_DIR_ENV: &str = "RETROSENSE_OUT";

pub const CONFIG_SCHEMA: &str = r#"retrosense scenario config (TOML)

protocol = "<id>"        # required; one of:
                         #   echo | paramp | su11 | wva | naive | hindsight
                         #   | agnostic | positronium | agnostic-dephasing
                         #   | ico-seq-vs-switch | ico-noise-robust
seed = 42                # optional u64, default 0; drives direction draws
                         # and multinomial sampling
shots = "exact"          # optional; "exact" (default) or a positive integer

[output]
dir = "runs/echo"        # optional, default "runs/<protocol>";
                         # overridden by --out, then by $RETROSENSE_OUT

[grid]                   # at least the protocol's primary axis:
                         #   echo/su11/wva/naive/hindsight/agnostic/
                         #   positronium/ico-noise-robust -> alpha
                         #   paramp/ico-seq-vs-switch     -> r
                         #   agnostic-dephasing           -> s
alpha = { start = 0.1, stop = 1.5, count = 15 }   # inclusive endpoints
# or explicit points:
# alpha = { list = [0.1, 0.2, 0.4] }

[params]                 # optional protocol-specific scalars (defaults):
# fock_dim  = 60         # paramp (60) and su11 (25) truncation
# r         = 1.0        # squeeze strength when not swept (paramp 1.0,
#                        # su11 0.5)
# g         = 1.0        # paramp coupling rate
# t         = 1.0        # paramp kick duration
# delta_phi = 1.0        # wva pointer width
# postselect_overlap = 0.9   # wva: |psi_f> ~ |0> - c|1>, A_w = (1+c)/(1-c)
# direction = [0.0, 0.0, 1.0]  # time-loop field axis; omitted -> one
#                        # seeded random direction per grid point
# noise_r   = 0.7        # ico-noise-robust depolarizing strength
# trials    = 1          # Cramer-Rao trial count reported with FI values

Grid axes are swept in sorted-name order as a cartesian product; every
record in the CSV carries its axis values, the protocol metrics, outcome
probabilities above 1e-12, warnings, and provenance metadata.
"#;

/// Protocol identifiers, one per CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Echo,
    Paramp,
    Su11,
    Wva,
    Naive,
    Hindsight,
    Agnostic,
    Positronium,
    AgnosticDephasing,
    IcoSeqVsSwitch,
    IcoNoiseRobust,
}

impl Protocol {
    pub const ALL: [Protocol; 11] = [
        Protocol::Echo,
        Protocol::Paramp,
        Protocol::Su11,
        Protocol::Wva,
        Protocol::Naive,
        Protocol::Hindsight,
        Protocol::Agnostic,
        Protocol::Positronium,
        Protocol::AgnosticDephasing,
        Protocol::IcoSeqVsSwitch,
        Protocol::IcoNoiseRobust,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Protocol::Echo => "echo",
            Protocol::Paramp => "paramp",
            Protocol::Su11 => "su11",
            Protocol::Wva => "wva",
            Protocol::Naive => "naive",
            Protocol::Hindsight => "hindsight",
            Protocol::Agnostic => "agnostic",
            Protocol::Positronium => "positronium",
            Protocol::AgnosticDephasing => "agnostic-dephasing",
            Protocol::IcoSeqVsSwitch => "ico-seq-vs-switch",
            Protocol::IcoNoiseRobust => "ico-noise-robust",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.id() == id)
    }

    /// The grid axis the protocol sweeps.
    pub fn primary_axis(self) -> &'static str {
        match self {
            Protocol::Paramp | Protocol::IcoSeqVsSwitch => "r",
            Protocol::AgnosticDephasing => "s",
            _ => "alpha",
        }
    }

    fn allowed_axes(self) -> &'static [&'static str] {
        match self {
            Protocol::Paramp => &["r", "alpha"],
            Protocol::Su11 => &["alpha", "r"],
            Protocol::IcoSeqVsSwitch => &["r"],
            Protocol::AgnosticDephasing => &["s"],
            Protocol::IcoNoiseRobust => &["alpha", "noise_r"],
            _ => &["alpha"],
        }
    }
}

/// Exact shots or multinomial sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotMode {
    Exact,
    Count(u64),
}

impl ShotMode {
    pub fn parse(text: &str) -> Result<Self> {
        if text == "exact" {
            return Ok(ShotMode::Exact);
        }
        text.parse::<u64>()
            .map_err(|_| Error::Config {
                path: "shots".into(),
                message: format!("`{text}` is neither \"exact\" nor a positive integer"),
            })
            .and_then(|n| {
                if n == 0 {
                    Err(Error::Config {
                        path: "shots".into(),
                        message: "shot count must be >= 1".into(),
                    })
                } else {
                    Ok(ShotMode::Count(n))
                }
            })
    }

    pub fn describe(&self) -> String {
        match self {
            ShotMode::Exact => "exact".into(),
            ShotMode::Count(n) => n.to_string(),
        }
    }
}

/// Protocol-specific scalar parameters with their defaults resolved at access.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub fock_dim: Option<usize>,
    pub r: Option<f64>,
    pub g: Option<f64>,
    pub t: Option<f64>,
    pub delta_phi: Option<f64>,
    pub postselect_overlap: Option<f64>,
    pub direction: Option<[f64; 3]>,
    pub noise_r: Option<f64>,
    pub trials: Option<u64>,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub protocol: Protocol,
    pub seed: u64,
    pub shots: ShotMode,
    /// Axis name -> sweep values, sorted by name.
    pub grid: Vec<(String, Vec<f64>)>,
    pub params: Params,
    pub out_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    protocol: String,
    seed: Option<u64>,
    shots: Option<toml::Value>,
    grid: Option<BTreeMap<String, RawRange>>,
    params: Option<RawParams>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    fock_dim: Option<usize>,
    r: Option<f64>,
    g: Option<f64>,
    t: Option<f64>,
    delta_phi: Option<f64>,
    postselect_overlap: Option<f64>,
    direction: Option<Vec<f64>>,
    noise_r: Option<f64>,
    trials: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawRange {
    Span { start: f64, stop: f64, count: usize },
    List { list: Vec<f64> },
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

impl RawRange {
    fn resolve(&self, axis: &str) -> Result<Vec<f64>> {
        match self {
            RawRange::Span { start, stop, count } => {
                if *count == 0 {
                    return Err(config_err(
                        &format!("grid.{axis}.count"),
                        "count must be >= 1",
                    ));
                }
                if !start.is_finite() || !stop.is_finite() {
                    return Err(config_err(
                        &format!("grid.{axis}"),
                        "start/stop must be finite",
                    ));
                }
                if *count == 1 {
                    return Ok(vec![*start]);
                }
                let step = (stop - start) / (*count as f64 - 1.0);
                Ok((0..*count).map(|i| start + step * i as f64).collect())
            }
            RawRange::List { list } => {
                if list.is_empty() {
                    return Err(config_err(
                        &format!("grid.{axis}.list"),
                        "list must be nonempty",
                    ));
                }
                if list.iter().any(|v| !v.is_finite()) {
                    return Err(config_err(
                        &format!("grid.{axis}.list"),
                        "entries must be finite",
                    ));
                }
                Ok(list.clone())
            }
        }
    }
}

/// Per-protocol range preconditions, enforced at load time so a sweep never
/// starts with out-of-domain points.
fn validate_axis_values(protocol: Protocol, axis: &str, values: &[f64]) -> Result<()> {
    let path = format!("grid.{axis}");
    let check = |ok: bool, msg: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(config_err(&path, msg))
        }
    };
    match (protocol, axis) {
        (Protocol::Naive, "alpha") => check(
            values.iter().all(|&a| a > 0.0 && a < std::f64::consts::PI),
            "naive averaging needs alpha in (0, pi)",
        ),
        (Protocol::AgnosticDephasing, "s") => check(
            values.iter().all(|&s| (0.0..=1.0).contains(&s)),
            "dephasing strength must lie in [0, 1]",
        ),
        (Protocol::IcoSeqVsSwitch, "r") | (Protocol::IcoNoiseRobust, "noise_r") => check(
            values.iter().all(|&r| (0.0..=1.0).contains(&r)),
            "depolarizing strength must lie in [0, 1]",
        ),
        (Protocol::Paramp, "r") | (Protocol::Su11, "r") => check(
            values.iter().all(|&r| r >= 0.0),
            "squeeze parameter must be >= 0",
        ),
        _ => Ok(()),
    }
}

pub fn parse_config(text: &str, cli_out: Option<&Path>) -> Result<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| config_err("<toml>", e.to_string()))?;
    let protocol = Protocol::from_id(&raw.protocol)
        .ok_or_else(|| config_err("protocol", format!("unknown protocol `{}`", raw.protocol)))?;

    let shots = match raw.shots {
        None => ShotMode::Exact,
        Some(toml::Value::String(s)) => ShotMode::parse(&s)?,
        Some(toml::Value::Integer(n)) if n > 0 => ShotMode::Count(n as u64),
        Some(v) => {
            return Err(config_err(
                "shots",
                format!("`{v}` is neither \"exact\" nor a positive integer"),
            ))
        }
    };

    let grid_map = raw
        .grid
        .ok_or_else(|| config_err("grid", "missing grid table"))?;
    if grid_map.is_empty() {
        return Err(config_err("grid", "grid must define at least one axis"));
    }
    let mut grid = Vec::new();
    for (axis, range) in &grid_map {
        if !protocol.allowed_axes().contains(&axis.as_str()) {
            return Err(config_err(
                &format!("grid.{axis}"),
                format!(
                    "axis `{axis}` is not swept by `{}` (allowed: {})",
                    protocol.id(),
                    protocol.allowed_axes().join(", ")
                ),
            ));
        }
        let values = range.resolve(axis)?;
        validate_axis_values(protocol, axis, &values)?;
        grid.push((axis.clone(), values));
    }
    if !grid.iter().any(|(a, _)| a == protocol.primary_axis()) {
        return Err(config_err(
            "grid",
            format!(
                "protocol `{}` requires the `{}` axis",
                protocol.id(),
                protocol.primary_axis()
            ),
        ));
    }

    let params = match raw.params {
        None => Params::default(),
        Some(p) => {
            let direction = match p.direction {
                None => None,
                Some(v) => {
                    if v.len() != 3 {
                        return Err(config_err(
                            "params.direction",
                            "direction must have exactly 3 components",
                        ));
                    }
                    let d = [v[0], v[1], v[2]];
                    crate::states::pauli_direction(d)
                        .map_err(|e| config_err("params.direction", e.to_string()))?;
                    Some(d)
                }
            };
            if let Some(dp) = p.delta_phi {
                if dp <= 0.0 {
                    return Err(config_err("params.delta_phi", "must be positive"));
                }
            }
            if let Some(c) = p.postselect_overlap {
                if !(0.0..1.0).contains(&c) {
                    return Err(config_err(
                        "params.postselect_overlap",
                        "must lie in [0, 1)",
                    ));
                }
            }
            if let Some(nr) = p.noise_r {
                if !(0.0..=1.0).contains(&nr) {
                    return Err(config_err("params.noise_r", "must lie in [0, 1]"));
                }
            }
            if let Some(d) = p.fock_dim {
                if d < 4 {
                    return Err(config_err("params.fock_dim", "must be >= 4"));
                }
            }
            Params {
                fock_dim: p.fock_dim,
                r: p.r,
                g: p.g,
                t: p.t,
                delta_phi: p.delta_phi,
                postselect_overlap: p.postselect_overlap,
                direction,
                noise_r: p.noise_r,
                trials: p.trials,
            }
        }
    };

    let config_dir = raw
        .output
        .and_then(|o| o.dir)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs").join(protocol.id()));
    let out_dir = match std::env::var_os(OUT_DIR_ENV) {
        Some(env_dir) => PathBuf::from(env_dir),
        None => cli_out.map(Path::to_path_buf).unwrap_or(config_dir),
    };

    Ok(ScenarioConfig {
        protocol,
        seed: raw.seed.unwrap_or(0),
        shots,
        grid,
        params,
        out_dir,
    })
}

pub fn load_config(path: &Path, cli_out: Option<&Path>) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, cli_out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = parse_config(
            "protocol = \"agnostic\"\n[grid]\nalpha = { start = 0.1, stop = 1.5, count = 15 }\n",
            None,
        )
        .unwrap();
        assert_eq!(cfg.protocol, Protocol::Agnostic);
        assert_eq!(cfg.grid[0].1.len(), 15);
        assert!((cfg.grid[0].1[14] - 1.5).abs() < 1e-12);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.shots, ShotMode::Exact);
    }

    #[test]
    fn rejects_empty_grid() {
        let err = parse_config("protocol = \"echo\"\n[grid]\n", None).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "grid"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_primary_axis() {
        let err = parse_config(
            "protocol = \"paramp\"\n[grid]\nalpha = { list = [0.1] }\n",
            None,
        )
        .unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "grid"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_domain_values_with_field_path() {
        let err = parse_config(
            "protocol = \"agnostic-dephasing\"\n[grid]\ns = { list = [0.5, 1.5] }\n",
            None,
        )
        .unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "grid.s"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(parse_config(
            "protocol = \"echo\"\nbogus = 1\n[grid]\nalpha = { list = [0.1] }\n",
            None
        )
        .is_err());
    }

    #[test]
    fn shot_modes() {
        assert_eq!(ShotMode::parse("exact").unwrap(), ShotMode::Exact);
        assert_eq!(ShotMode::parse("500").unwrap(), ShotMode::Count(500));
        assert!(ShotMode::parse("0").is_err());
        assert!(ShotMode::parse("lots").is_err());
    }
}
