use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty probability vector")]
    EmptyVector,
    #[error("entry {index} is not a finite number ({value})")]
    NonFiniteEntry { index: usize, value: f64 },
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("entries sum to {sum}, which is not within 1e-9 of 1")]
    NormalizationOutOfTolerance { sum: f64 },
    #[error("Gibbs entry {index} is {value}; Gibbs vectors must be full rank")]
    RankDeficientGibbs { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("y = {0} is outside [0, 1]")]
    YOutOfRange(f64),
    #[error("inverse temperature must be finite, got {0}")]
    NonFiniteBeta(f64),
    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("energy gap must be positive, got {0}")]
    NonPositiveGap(f64),
    #[error("target Hamiltonian is completely degenerate")]
    DegenerateTarget,
    #[error("ground degeneracy {given} does not match the {actual} lowest-energy levels")]
    WrongDegeneracy { given: usize, actual: usize },
    #[error("temperature ratio a = 1 is trivial")]
    TrivialRatio,
    #[error("w = {0} is outside (0, 1]")]
    WOutOfRange(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("root bracketing failed: {0}")]
    BisectionFailure(String),
}
