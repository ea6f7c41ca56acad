use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized: squared norm {norm_sq} deviates from 1 beyond {tol}")]
    NotNormalized { norm_sq: f64, tol: f64 },

    #[error("matrix is not Hermitian: max |M - M^dag| entry is {max_dev}")]
    NotHermitian { max_dev: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| entry is {max_dev}")]
    NotUnitary { max_dev: f64 },

    #[error("Kraus set is not trace preserving: max |sum K^dag K - I| entry is {max_dev}")]
    NotTracePreserving { max_dev: f64 },

    #[error("operator is not positive semidefinite: eigenvalue {min_eigenvalue}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),

    #[error("direction vector is not unit length: |n| = {norm}")]
    NotUnitVector { norm: f64 },

    #[error("Fock truncation violated: top-level mass {tail_mass} exceeds {limit}")]
    FockTruncation { tail_mass: f64, limit: f64 },

    #[error("postselection state is (numerically) orthogonal to the evolved state")]
    OrthogonalPostselection,

    #[error("weak value undefined: |<psi_f|psi_i>| = {overlap} is below 1e-12")]
    WeakValueUndefined { overlap: f64 },

    #[error("Fisher information is zero: parameter unidentifiable")]
    ZeroFisherInformation,

    #[error("probability evaluator returned an invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
