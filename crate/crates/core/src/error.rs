use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a_{index} = {value} is not a positive integer, condition (i)")]
    NonPositiveEntry { index: usize, value: i64 },

    #[error("gcd(a) != 1, condition (ii) (gcd is {gcd})")]
    NotCoprime { gcd: u64 },

    #[error("need at least two entries, got n = {n}, condition (i)")]
    DimensionTooSmall { n: usize },

    #[error("cost vector has length {got}, instance has dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("right-hand side b = {0} is negative")]
    NegativeRhs(i64),

    #[error("weight w_{index} is negative")]
    NegativeWeight { index: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{what} needs {needed} cells, limit is {limit}")]
    BoundTooLarge {
        what: &'static str,
        needed: u128,
        limit: u64,
    },

    #[error("no point of residue class {residue} inside the box [0, {radius}]")]
    NoPointInBox { residue: u64, radius: u64 },

    #[error("beta = {0} must lie strictly between 0 and 1")]
    BetaOutOfRange(String),

    #[error("epsilon = {0} must lie strictly between 0 and 1")]
    BadEpsilon(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient samples: {got} below the required {needed}")]
    InsufficientSamples { got: usize, needed: usize },

    #[error("cannot parse rational {0:?}: expected an integer or p/q")]
    ParseRational(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for refusals caused by a configured resource cap rather than bad input.
    pub fn is_guardrail(&self) -> bool {
        matches!(self, Error::BoundTooLarge { .. })
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_) | Error::Json(_))
    }
}
