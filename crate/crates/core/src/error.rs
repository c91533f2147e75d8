use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shift map: {0}")]
    InvalidMap(String),

    #[error("invalid weight rule: {0}")]
    InvalidWeights(String),

    #[error("target {operator}: coefficient a_{index} is zero")]
    ZeroTargetCoefficient { operator: usize, index: u64 },

    #[error("target {operator}: support reaches index {index}, beyond degree M = {degree}")]
    TargetBeyondDegree {
        operator: usize,
        index: String,
        degree: u64,
    },

    #[error("expected {expected} targets, got {got}")]
    TargetCount { expected: usize, got: usize },

    #[error("operator {index} is not a weighted backward shift (map must be m -> m + 1)")]
    NotWeightedShift { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("config: {0}")]
    Config(String),
}
