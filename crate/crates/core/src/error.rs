use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range user input.
    #[error("invalid input: {0}")]
    Input(String),

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The brute-force Weyl oracle refuses diagrams above its rank cap.
    #[error("rank {rank} exceeds the brute-force limit of {limit}")]
    RankTooLarge { rank: usize, limit: usize },

    /// A parse failure tied to a line of an input file.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A construction produced output that fails its own re-verification.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
