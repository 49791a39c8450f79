use std::path::PathBuf;

use thiserror::Error;

use crate::aggregate::AggregateError;
use crate::analytics::AnalyticsError;
use crate::corpus::CorpusError;
use crate::exposure::ExposureError;
use crate::gateway::GatewayError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Corpus(#[from] CorpusError),

    #[error("corpus validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error(transparent)]
    Gateway(#[from] GatewayError),

    #[error("backend failure: {0}")]
    Backend(String),

    #[error(transparent)]
    Exposure(#[from] ExposureError),

    #[error(transparent)]
    Aggregate(#[from] AggregateError),

    #[error(transparent)]
    Analytics(#[from] AnalyticsError),

    #[error("missing artifact {}; run the upstream stage first", .0.display())]
    MissingArtifact(PathBuf),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// 1 for invalid input or configuration, 2 for backend failure, 3 for a
    /// missing upstream artifact.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::MissingArtifact(_) => 3,
            PipelineError::Backend(_) => 2,
            PipelineError::Gateway(
                GatewayError::BackendUnreachableAfterRetries { .. } | GatewayError::Cache { .. },
            ) => 2,
            _ => 1,
        }
    }
}
