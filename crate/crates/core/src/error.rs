use thiserror::Error;

/// Errors raised by operators and constructors when a precondition fails.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("population is empty")]
    EmptyPopulation,
    #[error("population size {0} must be even for this strategy")]
    OddPopulation(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("input is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("genotype kind mismatch: expected {expected}, found {found}")]
    IncompatibleGenotype { expected: &'static str, found: &'static str },
    #[error("total fitness is zero")]
    ZeroFitnessSum,
    #[error("schema has no representatives in the population")]
    EmptySchema,
    #[error("parent genotype is infeasible: {0}")]
    InfeasibleParent(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unbound variable x{0}")]
    UnboundVariable(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
