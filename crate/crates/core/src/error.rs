use thiserror::Error;

/// Errors produced by the ground-state engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The bare frequency does not exceed the threshold, so the Hamiltonian
    /// is not bounded below and no ground state exists.
    #[error("threshold violated: omega0 = {omega0} must exceed omega_T = {omega_t}")]
    ThresholdViolation { omega0: f64, omega_t: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("quadrature did not converge: best estimate {estimate} with error {error}")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("grid refinement required: {0}")]
    GridRefinement(String),

    #[error("unresolved singularity: {0}")]
    Refinement(String),

    #[error("numerical differentiation unstable: {0}")]
    Differentiation(String),

    #[error("value out of representable range: {0}")]
    Range(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid discretization rule: {0}")]
    InvalidRule(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this error: 1 config, 2 physics/threshold,
    /// 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::InvalidRule(_) => 1,
            Error::ThresholdViolation { .. }
            | Error::Domain(_)
            | Error::NotApplicable(_)
            | Error::Validation(_) => 2,
            Error::QuadratureFailure { .. }
            | Error::GridRefinement(_)
            | Error::Refinement(_)
            | Error::Differentiation(_)
            | Error::Range(_) => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
