use core::fmt;

/// Errors reported by estimator construction and privatization.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Laplace scale must be positive and finite.
    InvalidScale { scale: f64 },
    /// A parameter is outside its documented domain.
    InvalidParameter { what: &'static str },
    /// An estimator was asked to run on an empty sample.
    EmptySample,
    /// A configuration violates its own invariants (batch counts, horizons, ...).
    InvalidConfiguration { reason: &'static str },
    /// Exhaustive sensitivity enumeration would exceed the state-count guard.
    OracleTooLarge { states: u64, limit: u64 },
    /// A probability vector fails validation.
    InvalidDistribution { reason: &'static str },
    /// The two distributions of a hard pair coincide; no sample floor exists.
    Indistinguishable,
    /// Estimator inputs disagree on the sample size they describe.
    SampleSizeMismatch { expected: u64, got: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidScale { scale } => {
                write!(f, "laplace scale must be positive and finite, got {scale}")
            }
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
            Error::EmptySample => write!(f, "estimator requires a non-empty sample"),
            Error::InvalidConfiguration { reason } => {
                write!(f, "invalid configuration: {reason}")
            }
            Error::OracleTooLarge { states, limit } => write!(
                f,
                "exhaustive oracle refused: {states} datasets exceeds the {limit} guard"
            ),
            Error::InvalidDistribution { reason } => {
                write!(f, "invalid distribution: {reason}")
            }
            Error::Indistinguishable => {
                write!(f, "distributions coincide (zero total variation distance)")
            }
            Error::SampleSizeMismatch { expected, got } => {
                write!(f, "sample size mismatch: configured for n={expected}, input has n={got}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
