use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("non-invertible matrix")]
    NonInvertible,

    #[error("infinite order: {0}")]
    InfiniteOrder(String),

    #[error("degree must exceed 1 (det = {0})")]
    DegreeTooSmall(String),

    #[error("not expanding: an eigenvalue has modulus at most 1")]
    NotExpanding,

    #[error("level too deep: level {level} needs {cells} cells, budget is {budget}")]
    LevelTooDeep { level: u32, cells: String, budget: u64 },

    #[error("budget exceeded: search visited more than {budget} cells")]
    BudgetExceeded { budget: u64 },

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),

    #[error("malformed portrait: {0}")]
    MalformedPortrait(String),

    #[error("not a Thurston-map orbifold: chi = {0} > 0")]
    NotThurstonOrbifold(String),

    #[error("cap exceeded: no answer up to level {cap}")]
    CapExceeded { cap: u32 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Budget-type failures map to a distinct CLI exit status.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::LevelTooDeep { .. } | Error::BudgetExceeded { .. } | Error::CapExceeded { .. }
        )
    }
}
