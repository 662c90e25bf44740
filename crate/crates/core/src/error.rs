use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("degree bound must be at least 1, got {0}")]
    InvalidDegreeBound(usize),
    #[error("uniformizer index {index} out of range 0..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
    #[error("element is not a unit")]
    NonUnit,
    #[error("valuation {have} is smaller than the required {need}")]
    ValuationTooSmall { need: u64, have: i64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("arithmetic context mismatch")]
    ContextMismatch,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("coefficient of degree {0} is not integral")]
    NonIntegral(usize),
    #[error("equation is not soluble: coefficient of degree {degree} has valuation deficit {deficit}")]
    Insoluble { degree: usize, deficit: u64 },
    #[error("polynomial support is not contained in the powers of p (degree {0})")]
    NotPTypical(usize),
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeExceedsBound { degree: usize, bound: usize },
    #[error("degree bound {bound} differs from the degree {degree} of the polynomial")]
    DegreeMismatch { degree: usize, bound: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn precision(what: impl Into<String>) -> Self {
        Error::PrecisionExhausted(what.into())
    }

    pub(crate) fn inconsistency(what: impl Into<String>) -> Self {
        Error::Inconsistency(what.into())
    }
}
