use core::fmt;

/// Errors produced by the evaluation and verification routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    Domain { what: &'static str, value: f64 },
    /// A mixture could not be constructed from the given data.
    InvalidMixture(&'static str),
    /// The operation needs a mixture that is not identically zero.
    Degenerate,
    /// Two successive quadrature refinements disagreed by more than the tolerance.
    QuadratureFailure { difference: f64, tolerance: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InvalidMixture(msg) => write!(f, "invalid mixture: {msg}"),
            Error::Degenerate => f.write_str("mixture is identically zero"),
            Error::QuadratureFailure {
                difference,
                tolerance,
            } => write!(
                f,
                "quadrature refinements differ by {difference:e} (tolerance {tolerance:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
