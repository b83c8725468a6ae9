use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {0:?} as an exact number")]
    Parse(String),

    #[error("series has zero linear coefficient and no compositional inverse")]
    NotInvertible,

    #[error("zero form: valuation is +infinity")]
    ZeroForm,

    #[error("truncation exhausted: no certified answer below truncation order {cap}")]
    TruncationExhausted { cap: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exactness self-check failed. Always a bug or a falsified claim, never noise.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
