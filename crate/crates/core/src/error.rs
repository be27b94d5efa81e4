use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("disconnected graph")]
    Disconnected,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("genus {0} is too small to stabilize")]
    GenusTooSmall(usize),
    #[error("genus {0} exceeds the supported range")]
    GenusTooLarge(usize),
    #[error("not harmonic: {0}")]
    NotHarmonic(String),
    #[error("invalid dilation: {0}")]
    InvalidDilation(String),
    #[error("disconnected total space")]
    DisconnectedCover,
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("construction violated: {0}")]
    ConstructionViolated(String),
    #[error("cone not branch-pure: {0}")]
    ConeNotBranchPure(String),
    #[error("unmapped variable {0}")]
    UnmappedVariable(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("dependent set")]
    Dependent,
    #[error("unmatched configuration: {0}")]
    UnmatchedConfiguration(String),
    #[error("degenerate gram matrix")]
    DegenerateGram,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
