use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("oracle refused: n = {n} exceeds the oracle limit {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("no root on (0, 1] for step {step}: {reason}")]
    NoRoot { step: usize, reason: String },

    #[error("degenerate schedule at step {step}: truncated e^-r evaluates to zero")]
    DegenerateSchedule { step: usize },

    #[error("singular extraction system: |det| = {det} below threshold {threshold}")]
    Singular { det: String, threshold: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
