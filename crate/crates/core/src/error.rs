use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0:?} is not a monic irreducible polynomial over the prime field")]
    ReducibleModulus(Vec<u32>),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no root of the subfield modulus found in the target field (bad modulus)")]
    NoEmbeddingRoot,
    #[error("group too large: {context} exceeds cap {limit}")]
    GroupTooLarge { context: String, limit: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not normal: {0}")]
    NotNormal(String),
    #[error("not a {p}-group (order {order})")]
    NotPGroup { p: u32, order: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not surjective: {0}")]
    NotSurjective(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("splitting degree cap exceeded: need m = {needed}, cap is {cap}")]
    SplittingCapExceeded { needed: usize, cap: usize },
    #[error("field {0} does not split the group algebra")]
    NotSplit(String),
    #[error("multiplicity anomaly: {0}")]
    MultiplicityAnomaly(String),
    #[error("conjugate-invariant anomaly: {0}")]
    ConjugateAnomaly(String),
    #[error("kernel not elementary abelian")]
    KernelNotElementaryAbelian,
    #[error("kernel not reduced: {0}")]
    KernelNotReduced(String),
    #[error("inconsistent cover data: {0}")]
    InconsistentCoverData(String),
    #[error("no such dominating cover: transfer produced negative coefficient ({0})")]
    NegativeTransfer(String),
    #[error("H is not a p'-group: p = {p} divides |H| = {order}")]
    NotPPrime { p: u32, order: usize },
    #[error("route divergence: {0}")]
    RouteDivergence(String),
    #[error("engine anomaly: {0}")]
    EngineAnomaly(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
