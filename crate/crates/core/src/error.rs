use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is below the supported minimum of 5")]
    PrimeTooSmall(u32),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("subspace set is not closed under the group action")]
    NotInvariant,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("structure constants are inconsistent: {0}")]
    Inconsistent(String),
    #[error("subgroup is not an ideal")]
    NotIdeal,
    #[error("ring has no definitions for its basis; standardize it first")]
    MissingDefinitions,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(char),
    #[error("presentation defines the zero ring")]
    ZeroRing,
    #[error("ring order exceeds p^{0}")]
    OrderOverflow(usize),
    #[error(
        "target order p^{target} is impossible for a parent of order p^{parent} with multiplicator of rank {rank}"
    )]
    ImpossibleTarget { target: usize, parent: usize, rank: usize },
    #[error("automorphism extension failed: {0}")]
    Extension(String),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("search budget exhausted")]
    BudgetExceeded,
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
