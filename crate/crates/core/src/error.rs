use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a space needs at least one factor")]
    EmptySpace,
    #[error("invalid factor {0}")]
    InvalidFactor(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("term has {found} factor bundles but the space has {expected} factors")]
    Arity { expected: usize, found: usize },
    #[error("{0}")]
    InvalidBundle(String),
    #[error("symbolic psi bundle present: {0}")]
    Symbolic(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("long exact sequence cannot be resolved: {0}")]
    RecursionAmbiguity(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown rank: {0}")]
    UnknownRank(String),
    #[error("{0}")]
    Collection(String),
    #[error("engine inconsistency: {0}")]
    Inconsistent(String),
}
