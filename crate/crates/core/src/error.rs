use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("containment error: {0}")]
    Containment(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("structure tag error: {0}")]
    Tag(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("case dispatch error: {0}")]
    Dispatch(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failure: {0}")]
    Validation(String),
}
