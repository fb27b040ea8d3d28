use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its documented domain (negative temperature,
    /// zero cutoff, empty mode list, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation is not defined for this kind of bath.
    #[error("unsupported bath: {0}")]
    UnsupportedBath(&'static str),

    /// An integrand or intermediate value became NaN or infinite.
    #[error("non-finite value {value} encountered at x = {at}")]
    NonFinite { at: f64, value: f64 },

    /// Adaptive quadrature hit its evaluation cap before meeting tolerance.
    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {error_estimate:e}, target {target:e})")]
    NonConvergence {
        evaluations: usize,
        error_estimate: f64,
        target: f64,
    },

    /// A formula hit a genuine (non-removable) singularity.
    #[error("singular expression: {0}")]
    Singular(String),

    #[error("Hilbert space dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// The truncated thermal state puts too much weight on the top Fock level.
    #[error("Fock truncation too small for mode {mode}: top-level occupancy {occupancy:e} exceeds {limit:e}")]
    Truncation {
        mode: usize,
        occupancy: f64,
        limit: f64,
    },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("parse error at token {index}: {message}")]
    Parse { index: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures of the numerics themselves rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::NonConvergence { .. }
                | Error::Singular(_)
                | Error::Eigen(_)
        )
    }
}
