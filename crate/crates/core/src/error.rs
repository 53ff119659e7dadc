use thiserror::Error;

pub type Result<T, E = ChronosError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChronosError {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("level index {index} out of range for a spectrum of {levels} levels")]
    IndexOutOfRange { index: usize, levels: usize },

    #[error("no finite period: the spectrum is incommensurate")]
    NoFinitePeriod,

    #[error("period undefined: the spectrum has no nonzero energy difference")]
    UndefinedPeriod,

    #[error("periodic density needs a commensurate spectrum; use the quasiperiodic density instead")]
    NotPeriodic,

    #[error("state has {got} amplitudes but the spectrum has {expected} levels")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state has zero or non-finite norm")]
    ZeroNorm,

    #[error("function is not real-valued: coefficient at -L is not the conjugate of the one at L")]
    NotRealValued,

    #[error("series are defined over different base frequencies")]
    MismatchedBases,

    #[error("approximants were built for a different spectrum")]
    ForeignApproximants,

    #[error("continued fraction expansion exhausted the available precision at depth {0}")]
    PrecisionExhausted(usize),

    #[error("integer overflow in exact label arithmetic")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
