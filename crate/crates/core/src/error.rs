use thiserror::Error;

use crate::ordinal::OrdinalError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("invalid tree spec: {0}")]
    InvalidSpec(String),
    #[error("invalid address {addr}: {reason}")]
    InvalidAddress { addr: String, reason: String },
    #[error("not a high-ray: {0}")]
    InvalidRay(String),
    #[error("{0}")]
    Parse(#[from] crate::dsl::ParseError),
    #[error("template instance {index} lies outside the tree: {reason}")]
    TemplateOutsideTree { index: u64, reason: String },
    #[error("graph is not uniform at {node}: {reason}")]
    NotUniform { node: String, reason: String },
    #[error("graph does not have finite adhesion at {node}: {reason}")]
    NotFiniteAdhesion { node: String, reason: String },
    #[error("graphs are built on different trees")]
    SpecMismatch,
    #[error("ends are equal")]
    EqualEnds,
    #[error("{0} is a limit node")]
    LimitNode(String),
    #[error("ray prefix leaves the truncation at {0}")]
    PrefixNotInTruncation(String),
    #[error("no sequence templates given")]
    NoTemplates,
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn bad_addr(addr: impl ToString, reason: impl Into<String>) -> Error {
    Error::InvalidAddress { addr: addr.to_string(), reason: reason.into() }
}
