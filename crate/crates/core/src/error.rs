use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: String, found: String },
    #[error("level {level} out of range ({range})")]
    LevelOutOfRange { level: usize, range: String },
    #[error("word has odd a-exponent and is not in the level-1 stabilizer lift")]
    OddACount,
    #[error("word is not in the derived subgroup (exponent sums {0:?})")]
    NotInDerived(Vec<i64>),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("inconsistent power-commutator presentation: {0}")]
    Inconsistent(String),
    #[error("sequence exhausted before the bound was exceeded")]
    Exhausted,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by a resource cap rather than a mathematical verdict.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
