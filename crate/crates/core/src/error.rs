use thiserror::Error;

/// Errors raised by the estimators and the experiment engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: unordered abscissae, non-finite values, length mismatch.
    #[error("invalid input: {0}")]
    Input(String),
    /// An abscissa outside the region where an operation is defined.
    #[error("abscissa {x} outside [{lower}, {upper}]")]
    Domain { x: f64, lower: f64, upper: f64 },
    /// A model specification that violates its assumptions.
    #[error("invalid model: {0}")]
    Model(String),
    /// A rate fit that cannot be computed from the supplied table.
    #[error("rate fit failed: {0}")]
    Fit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn check_domain(x: f64, lower: f64, upper: f64) -> Result<()> {
    if x >= lower && x <= upper {
        Ok(())
    } else {
        Err(Error::Domain { x, lower, upper })
    }
}
