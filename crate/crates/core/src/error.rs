use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("radicand mismatch: {0} vs {1}")]
    RadicandMismatch(u64, u64),
    #[error("radicand {0} is not square-free")]
    RadicandNotSquareFree(u64),
    #[error("radicand {0} is a perfect square")]
    PerfectSquareRadicand(u64),
    #[error("matrix has non-integral entries")]
    NonIntegralInput,
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("lattices have different covolumes: {0} vs {1}")]
    CovolumeMismatch(String, String),
    #[error("enumeration needs {cells} cells, limit is {limit}")]
    BoxTooLarge { cells: String, limit: u64 },
    #[error("matrix is not triangular with unit diagonal")]
    NotUnipotent,
    #[error("matrix is not integral unimodular")]
    NotUnimodularIntegral,
    #[error("parameter {0} is zero")]
    ZeroParameter(usize),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("internal identity failed: {0}")]
    InternalIdentityFailure(String),
    #[error("constructed witness failed verification: {0}")]
    ConstructionFailed(String),
    #[error("nonzero interior lattice point found in closed box: {0}")]
    MinkowskiViolation(String),
    #[error("dimension must be 2, found {0}")]
    DimensionNot2(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
