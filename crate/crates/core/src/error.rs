use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unbalanced brackets at byte {offset}")]
    Unbalanced { offset: usize },

    #[error("unknown notation `{0}`")]
    UnknownNotation(String),

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("invalid position {0}")]
    InvalidPosition(String),

    #[error("no redex of rule {rule} at position {position}")]
    NotARedex { rule: String, position: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("bit string is not a valid Polish term: {0}")]
    Decode(String),

    #[error("atom `{0}` has no value in the model")]
    MissingValue(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
