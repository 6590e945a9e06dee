//! Legal act document model and corpus persistence.

mod celex;
pub mod fetch;
pub mod fragment;
pub mod html;
mod model;
pub mod parse;
mod store;

use thiserror::Error;

pub use celex::{CelexId, Instrument};
pub use fetch::{listed_celex_ids, FetchedAct, Fetcher, RateLimiter, ENERGY_DIRECTORY};
pub use fragment::{fragment_document, fragment_section, fragment_sections, split_sentences};
pub use model::{normalize_descriptors, validate_sections, Document, Draft, Fragment, Paragraph, Section, SectionKind};
pub use parse::{parse_legal_act, ActMetadata, CanonicalAct, CanonicalZone};
pub use store::{load_corpus, save_corpus};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid Celex id {raw:?}: {reason}")]
    InvalidCelex { raw: String, reason: String },
    #[error("malformed act: {0}")]
    MalformedAct(String),
    #[error("empty document")]
    EmptyDocument,
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error("duplicate Celex id {0}")]
    DuplicateCelex(String),
    #[error("storage failure: {0}")]
    Storage(#[from] std::io::Error),
    #[error("schema violation at line {line}: {message}")]
    SchemaViolation { line: usize, message: String },
    #[error("document {0} not found")]
    NotFound(String),
    #[error("document {celex} is not available as HTML (content type {content_type:?})")]
    NonHtmlFormat { celex: String, content_type: String },
    #[error("network failure: {0}")]
    Network(String),
}
