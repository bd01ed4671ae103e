use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("code is not MDS")]
    NotMds,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("outer distance {outer} is not below inner distance {inner}")]
    DistanceOrderViolated { inner: usize, outer: usize },
    #[error("outer code adds no codeword outside the inner code")]
    NoCandidate,
    #[error("gap is non-positive: K2 = {k2} must exceed K1 = {k1}")]
    GapNonpositive { k1: usize, k2: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("gadget failed verification ({0} violations)")]
    GadgetUnverified(usize),
    #[error("no repetition pair fits the window: {0}")]
    EmptyWindow(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
