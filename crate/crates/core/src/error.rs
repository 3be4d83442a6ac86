use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: illegal character {ch:?} at column {col}")]
    IllegalChar { line: usize, col: usize, ch: char },

    #[error("line {line}: row has length {found}, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("duplicate hypothesis: rows {first} and {second} are equal")]
    DuplicateHypothesis { first: usize, second: usize },

    #[error("class has no hypotheses")]
    EmptyClass,

    #[error("{what} index {index} out of range (size {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("operation requires a total class but row {row} has undefined entries")]
    PartialClass { row: usize },

    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("{what} exceeded search budget of {budget} steps")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::CapExceeded { .. })
    }

    pub fn is_verification(&self) -> bool {
        matches!(self, Error::Verification(_))
    }
}

pub(crate) fn check_cap(what: &'static str, actual: u64, limit: u64) -> Result<()> {
    if actual > limit {
        Err(Error::CapExceeded {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
