use thiserror::Error;

/// Errors raised by the library.
///
/// The variants follow how callers are expected to react: `Input` and
/// `Json` are user mistakes, `Unsupported`/`Guard` name a scope limit,
/// `Inconclusive` means a bounded search ran out before deciding, and
/// `Invariant` means a computed object contradicted a proven identity.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not full rank")]
    NotFullRank,
    #[error("not a ring: {0}")]
    NotARing(String),
    #[error("does not contain 1")]
    NoIdentity,
    #[error("not finite index in the maximal order")]
    NotFiniteIndex,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("guard exceeded: {what} ({size} > {limit})")]
    Guard { what: String, size: u128, limit: u128 },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
