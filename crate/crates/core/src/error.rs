use thiserror::Error;

use crate::dynamics::Model;
use crate::model::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    #[error("invalid bath specification: {0}")]
    InvalidBath(String),

    #[error("occupation requires a positive frequency, got {0}")]
    NonPositiveFrequency(f64),

    #[error("dephasing rate diverges at zero frequency for spectral exponent {exponent} < 1")]
    DivergentDephasing { exponent: f64 },

    #[error("both baths must share the same statistics")]
    MixedStatistics,

    #[error("rates with {statistics} statistics cannot build a {model} Liouvillian")]
    ModelRatesMismatch {
        model: Model,
        statistics: &'static str,
    },

    #[error("operation requires the {required} model, got {found}")]
    WrongModel {
        required: &'static str,
        found: Model,
    },

    #[error("state is in the {found} basis, expected {expected}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("propagation time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("sum of transition rates is zero; steady state is not unique")]
    ZeroTotalRate,

    #[error("inter-site coupling is zero; quantity is undefined without exchange")]
    NoExchange,

    #[error("closed-form current assumes identical effective spectral densities ({0} vs {1})")]
    SpectralMismatch(f64, f64),

    #[error("steady state is degenerate: null space has dimension {nullity} (singular values {singular_values:?})")]
    DegenerateSteadyState {
        nullity: usize,
        singular_values: Vec<f64>,
    },

    #[error("generator has no numerical null vector: smallest singular value {smallest:e} vs largest {largest:e}")]
    NoNullVector { smallest: f64, largest: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Solve failures that the CLI reports with exit code 2.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSteadyState { .. } | Error::NoNullVector { .. } | Error::ZeroTotalRate
        )
    }
}
