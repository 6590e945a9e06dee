//! Drafting sessions over a loaded definition corpus, and the `/v1` HTTP API.
//!
//! A session holds the sections drafted so far and the definitions the user
//! accepted. Terms are looked up in the corpus; missing ones can be
//! generated from the session's own text. Nothing generated is kept until it
//! is explicitly accepted.

mod http;
mod service;
mod session;
mod store;

use lexforge_core::generation::GenerationError;
use lexforge_core::retrieval::RetrievalError;
use thiserror::Error;

pub use http::{router, serve, ApiError};
pub use service::{CorpusSnapshot, DraftingService, ServiceConfig, DATA_DIR_ENV};
pub use session::{AcceptedDefinition, DraftSession, LookupCase, LookupOutcome, Provenance};
pub use store::{SessionLog, SESSION_FILE};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("invalid draft: {0}")]
    Validation(String),
    #[error("term {0:?} already has an accepted definition")]
    DuplicateTerm(String),
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error("session storage: {0}")]
    Storage(#[from] std::io::Error),
}

impl ServiceError {
    /// Stable machine-readable error code used in API responses.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownSession(_) => "unknown_session",
            ServiceError::Validation(_) => "validation_failure",
            ServiceError::DuplicateTerm(_) => "duplicate_term",
            ServiceError::Generation(e) => match e {
                GenerationError::EmptyContext => "empty_context",
                GenerationError::ContextOverflow { .. } => "context_overflow",
                GenerationError::EndpointFailure { .. } => "endpoint_failure",
                GenerationError::NoJsonFound => "no_json_found",
                GenerationError::MissingKey(_) => "missing_key",
                GenerationError::UnresolvableTarget(_) => "unresolvable_target",
                GenerationError::DuplicateTerm(_) => "duplicate_term",
                GenerationError::Config(_) => "configuration",
            },
            ServiceError::Retrieval(RetrievalError::InvalidK) => "invalid_k",
            ServiceError::Retrieval(_) => "retrieval_failure",
            ServiceError::Storage(_) => "storage_failure",
        }
    }
}
