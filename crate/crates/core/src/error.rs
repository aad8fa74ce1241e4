use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operator {op} out of range on a {dim}-simplex")]
    IndexOutOfRange { op: String, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("simplicial identity fails: {0}")]
    Identity(String),
    #[error("invalid twisting function: {0}")]
    InvalidTwist(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("presentation has no basepoint")]
    NoBasepoint,
    #[error("presentation is not reduced")]
    NotReduced,
    #[error("presentation is not 1-reduced")]
    NotOneReduced,
    #[error("cobar letter of dimension 0 over a non-reduced set")]
    DegreeZeroLetter,
    #[error("basis is infinite; supply a bound: {0}")]
    Unbounded(String),
    #[error("index sequence {0} is not in S_(n-1)(p)")]
    NotInSnp(String),
    #[error("invalid split of a final interval: {0}")]
    InvalidSplit(String),
    #[error("spectral sequences need field coefficients")]
    NonField,
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
