use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("fractions exceed unity: s + f = {sum}")]
    FractionsExceedUnity { sum: f64 },
    #[error("fraction {name} = {value} is outside [0, 1]")]
    FractionOutOfRange { name: &'static str, value: f64 },
    #[error("at least 2 agents are required, got {0}")]
    TooFewAgents(usize),
    #[error("source supply must be positive, got {0}")]
    NonPositiveSupply(f64),
    #[error("threshold must lie in (0, 1), got {0}")]
    InvalidThreshold(f64),
    #[error("unknown architecture code {0:?}")]
    UnknownArchitecture(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no steady state: the update system is singular to working precision")]
    NoSteadyState,
    #[error("horizon too short: threshold never met within {steps} steps")]
    HorizonTooShort { steps: usize },
    #[error("empty input")]
    Empty,
    #[error("need at least {needed} rows, got {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("table has no variance to decompose")]
    NoVariance,
}
