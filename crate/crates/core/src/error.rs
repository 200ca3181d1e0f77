use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid symbol {0}")]
    InvalidSymbol(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("table-undefined: {0}")]
    TableUndefined(String),

    #[error("no default substitution parameter for {0}; supply one explicitly")]
    NoDefaultParameter(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("iteration cap of {0} exceeded during rigid reduction")]
    IterationCap(usize),

    #[error("coefficient on unknown slot {0}")]
    UnknownSlot(String),

    #[error("singular system")]
    Singular,

    #[error("graph: {0}")]
    Graph(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParams(msg.into()))
}
