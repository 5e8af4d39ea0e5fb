use thiserror::Error;

/// Errors raised by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters are valid mathematically but outside the range the
    /// evaluator has been validated for.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    /// A linear system could not be solved.
    #[error("singular system at time level {level}: {detail}")]
    Singular { level: usize, detail: String },

    /// A computed quantity contradicts a property the theory guarantees.
    #[error("internal consistency violation: {0}")]
    Consistency(String),

    /// Not enough data to perform a fit.
    #[error("insufficient samples: {found} in window, at least {required} required")]
    InsufficientSamples { found: usize, required: usize },

    /// A norm series that is identically zero cannot carry a decay exponent.
    #[error("zero series: {0}")]
    ZeroSeries(String),
}

impl Error {
    /// True for errors caused by invalid input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::UnsupportedRange(_)
                | Error::InsufficientSamples { .. }
                | Error::ZeroSeries(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
