use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not traceless")]
    NotTraceless,
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("diagonal entries must be nonzero and pairwise distinct")]
    RepeatedOrZeroDiagonal,
    #[error("matrix is not a rank-one nilpotent")]
    NotRankOneNilpotent,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("nonzero nilpotent required")]
    ZeroMatrix,
    #[error("scaling factors must be nonzero")]
    ZeroScalingFactor,
    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,
    #[error("no consistent set of size {n} found in {attempts} attempts")]
    NoConsistentSet { n: usize, attempts: usize },
    #[error("no certified partner after {attempts} attempts; sampled scalings: {candidates:?}")]
    BudgetExhausted {
        attempts: usize,
        candidates: Vec<Vec<String>>,
    },
    #[error("conditions {0:?} of the example are violated")]
    ConditionsViolated(Vec<u8>),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
}
