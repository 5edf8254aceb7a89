use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("empty sheet {0} in cover")]
    EmptySheet(usize),
    #[error("cover does not cover the base: {0}")]
    CoverIncomplete(String),
    #[error("groupoids differ: {0}")]
    GroupoidMismatch(String),
    #[error("anchor mismatch: {0}")]
    AnchorMismatch(String),
    #[error("not a bitorsor: {0}")]
    NotBitorsor(String),
    #[error("section leaves its sheet: {0}")]
    SectionEscapes(String),
    #[error("input is not invariant: {0}")]
    NotInvariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("band limit exceeded: {0}")]
    BandLimit(String),
    #[error("partition of unity fails: {0}")]
    Partition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
