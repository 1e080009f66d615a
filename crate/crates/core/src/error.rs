use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// The observable's signal is (numerically) flat at this working point.
    #[error("degenerate working point at phi = {phi}: |slope| = {slope:e}")]
    DegenerateWorkingPoint { phi: f64, slope: f64 },

    #[error("objective could not be evaluated anywhere on the search domain")]
    NoOptimum,

    #[error("Fock cutoff {cutoff} too small: truncation leakage {leakage:e}")]
    CutoffTooSmall { cutoff: usize, leakage: f64 },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
