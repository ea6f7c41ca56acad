//! retrosense: numerical toolkit for quantum metrology protocols built on
//! effective time reversal.
//!
//! Four protocol families share one dense-linear-algebra core and one
//! Fisher-information toolbox:
//!
//! - [`echo`] — prepare with V, pick up the signal, undo with V-dagger;
//!   includes single-mode parametric amplification, two-mode SU(1,1)
//!   interferometry, and collective-spin twisting on the Dicke ladder.
//! - [`weakvalue`] — von Neumann pointer coupling with postselection and
//!   weak-value amplified Fisher information.
//! - [`timeloop`] — singlet-based sensing of a field with an unknown axis:
//!   hindsight, agnostic, qubit/antiqubit pair, and a dephasing variant.
//! - [`ico`] — the causal-order switch: two channels in a control-qubit
//!   superposition of orderings, with QFI comparisons against fixed-order
//!   strategies and control-only readout.
//!
//! Start from the runnable examples (`cargo run --example <name>`); each one
//! walks through a protocol end to end. The `retrosense` binary drives
//! parameter sweeps from declarative TOML configs and writes CSV records; see
//! [`harness`].

pub mod channels;
pub mod echo;
pub mod error;
pub mod fisher;
pub mod fock;
pub mod harness;
pub mod ico;
pub mod linalg;
pub mod sampling;
pub mod scenario;
pub mod states;
pub mod timeloop;
pub mod weakvalue;

pub use channels::KrausChannel;
pub use error::{Error, Result};
pub use fisher::{
    classical_fi, cramer_rao, default_step, generator_qfi_bound, qfi_mixed, qfi_pure, FiMethod,
    FiResult, MixedFamily, ParamDistribution, PureFamily,
};
pub use fock::FockSpace;
pub use scenario::ScenarioResult;
pub use states::{
    optimal_probe, partial_trace, pauli_direction, unitary_from_generator, DensityOperator,
    HermitianOperator, StateVector,
};
