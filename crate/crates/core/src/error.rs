use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field context mismatch")]
    ContextMismatch,
    #[error("degree cap exceeded: degree {degree} > {cap} and no criterion applies")]
    DegreeCap { degree: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("no witness exists: {0}")]
    NoWitness(String),
    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
