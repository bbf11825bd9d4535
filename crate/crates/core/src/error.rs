use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {modulus:#x} is reducible; factor {factor:#x}")]
    ReducibleModulus { modulus: u64, factor: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("capacity exceeded: {resource} needs {required}, limit {limit}")]
    Capacity {
        resource: String,
        required: u128,
        limit: u128,
    },
    #[error("parameters outside hypotheses: {0}")]
    Hypothesis(String),
    #[error("structural law violated: {}", .0.join("; "))]
    Structural(Vec<String>),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
