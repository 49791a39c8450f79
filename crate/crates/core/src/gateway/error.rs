use thiserror::Error;

use super::BackendError;

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("{what} has an empty description for prompt variant {variant}")]
    EmptyDescription { what: String, variant: String },

    #[error("backend unreachable after {attempts} attempts: {last_error}")]
    BackendUnreachableAfterRetries {
        attempts: u32,
        last_error: BackendError,
    },

    #[error("unknown prompt variant {0:?}")]
    UnknownVariant(String),

    #[error("classification needs at least one startup and one occupation")]
    EmptyInput,

    #[error("cache i/o on {path}: {source}")]
    Cache {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid verdict matrix: {0}")]
    InvalidMatrix(String),
}
