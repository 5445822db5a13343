use thiserror::Error;

use crate::words::Alphabet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid letter `{0}`")]
    InvalidLetter(String),
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },
    #[error("expected a word over {expected}, found one over {found}")]
    WrongAlphabet { expected: Alphabet, found: Alphabet },
    #[error("the empty word is not allowed here")]
    EmptyWord,
    #[error("`{0}` is not a Lyndon word")]
    NotLyndon(String),
    #[error("`{0}` has no standard factorization")]
    NotFactorizable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("weight {requested} exceeds the supported maximum {max}")]
    WeightTooLarge { requested: usize, max: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("decomposition did not terminate: {0}")]
    Decomposition(String),
    #[error("inconsistent relation system at weight {weight}: {detail}")]
    Inconsistent { weight: usize, detail: String },
    #[error("numeric check failed: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
