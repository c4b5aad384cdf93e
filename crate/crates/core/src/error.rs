use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("denominator does not split into the supplied linear forms")]
    UnsupportedDenominator,
    #[error("frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: String, found: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("group closure exceeded {cap} elements")]
    NotClosedWithinBudget { cap: usize },
    #[error("no algebraically independent invariants found: {0}")]
    SearchExhausted(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("catalog data rejected: {0}")]
    Catalog(String),
    #[error("flat system has no solution: {0}")]
    NoFlatSolution(String),
    #[error("flat system is not unique (solution space of dimension {0})")]
    NonUniqueSolution(usize),
    #[error("derivations do not form a certified basis")]
    NotABasis,
    #[error("multiplicity outside the admissible range: {0}")]
    OutOfRange(String),
    #[error("no certified source basis supplied")]
    MissingSourceBasis,
    #[error("window [{k_min}, {k_max}] too small; decomposition needs index {required}")]
    WindowTooSmall { k_min: i64, k_max: i64, required: i64 },
    #[error("polynomial is not invariant")]
    NotInvariant,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
