use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("bad monomial order `{0}`")]
    BadOrder(String),
    #[error("bad polynomial `{input}`: {reason}")]
    BadPolynomial { input: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("expected 4 multiplicities, got {0}")]
    Arity(usize),
    #[error("multiplicities must be positive")]
    NonPositive,
    #[error("multiplicities must be strictly increasing")]
    NotIncreasing,
    #[error("gcd ≠ 1 (gcd = {0})")]
    GcdNotOne(u64),
    #[error("n{} lies in the semigroup of the others", .0 + 1)]
    Redundant(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid curve: {0}")]
    Spec(#[from] SpecError),
    #[error("search bound {0} exceeded")]
    SearchBoundExceeded(u64),
    #[error("completion budget of {0} pair reductions exceeded")]
    CompletionBudgetExceeded(usize),
    #[error("weak normal form exceeded its reduction budget after {0} steps")]
    ReductionBudgetExceeded(usize),
    #[error("inhomogeneous input polynomial {0}")]
    InhomogeneousInput(String),
    #[error("degree bound {0} is too large")]
    DegreeBoundTooLarge(u32),
    #[error(transparent)]
    Caselaw(#[from] crate::caselaw::CaselawError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
