//! Scenario configuration, sweep execution, and the verification checklist
//! behind the `retrosense` binary.
//!
//! A scenario is a TOML file naming a protocol, a parameter grid, and
//! protocol-specific scalars (schema: [`config::CONFIG_SCHEMA`]). Sweeps run
//! grid points independently, re-check every record's invariants, and write a
//! CSV plus a provenance file atomically; identical configs and seeds
//! reproduce identical bytes.

pub mod config;
pub mod sweep;
pub mod verify;

pub use config::{load_config, parse_config, Protocol, ScenarioConfig, ShotMode, CONFIG_SCHEMA};
pub use sweep::{run, Record, SweepOutput};
pub use verify::{checklist, run_verify, verify_paper_numbers, CriterionRow};
