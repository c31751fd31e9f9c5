use num_complex::Complex64;
use thiserror::Error;

use crate::oscillatory::QuadratureResult;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("log-gamma has a pole at z = {0}")]
    GammaPole(Complex64),

    #[error("evaluation point {point} is within {distance:e} of the pole at {pole}")]
    PoleProximity {
        point: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("t = {t} is below the sector threshold {threshold} of the asymptotic gamma ratio")]
    BelowSectorThreshold { t: f64, threshold: f64 },

    #[error("quadrature did not converge after {} panels (partial value {}, estimated error {:e})", .partial.panels, .partial.value, .partial.est_error)]
    NonConvergence { partial: QuadratureResult },

    #[error("{what} needs {required:e} units, budget is {limit:e} (pass an override to proceed)")]
    BudgetExceeded {
        what: String,
        required: f64,
        limit: f64,
    },

    #[error("no nonzero coefficient a_n with n <= {0}")]
    NoResonantIndex(u64),

    #[error("alpha is not resonant with m = {m}: C Q^2 alpha^d = {actual}")]
    ResonanceMismatch { m: u64, actual: f64 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
