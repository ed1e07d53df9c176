use std::path::PathBuf;

/// Failures of the single-repository wire client.
#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("query is empty")]
    EmptyQuery,

    #[error("invalid handle {0:?}: expected digits/alphanumeric-with-dots")]
    InvalidHandle(String),

    #[error("no item with handle {0} on this repository")]
    NotFound(String),

    #[error("repository {repository} unreachable: {reason}")]
    Unreachable { repository: String, reason: String },

    #[error("malformed response: {0}")]
    Protocol(String),

    #[error("server ignored the byte-range request and full-body fallback is disabled")]
    RangeUnsupported,

    #[error("invalid byte range: {0}")]
    InvalidRange(String),

    #[error("item has no file named {0:?}")]
    NoSuchFile(String),

    #[error("{} already exists; pass overwrite to replace it", .0.display())]
    FileExists(PathBuf),

    #[error("i/o failure on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid repository endpoint: {0}")]
    InvalidEndpoint(String),
}

impl ClientError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ClientError::Io {
            path: path.into(),
            source,
        }
    }
}
