//! Definition elements: extraction from *Definitions* articles, citation
//! parsing, and cross-document reference resolution.

mod citation;
mod extract;
mod resolve;
mod store;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CelexId;

pub use citation::{citation_to_celex, parse_citation, CitationExpr};
pub use extract::{
    element_id, extract_corpus, extract_definitions, locate_definitions_article, Extraction,
    ExtractionWarning,
};
pub use resolve::{
    article_number, resolve_citations, DanglingReason, DanglingReference, ResolutionIndex,
    ResolutionReport,
};
pub use store::{load_definitions, save_definitions, sort_elements};

#[derive(Debug, Error)]
pub enum DefinitionError {
    #[error("explanation is empty")]
    EmptyExplanation,
    #[error("citation {0:?} does not map to a valid Celex id")]
    CelexOutOfRange(String),
    #[error("unsupported instrument letter {0:?}")]
    UnsupportedInstrument(char),
    #[error("storage failure: {0}")]
    Storage(#[from] std::io::Error),
    #[error("schema violation at line {line}: {message}")]
    SchemaViolation { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DefinitionKind {
    /// Self-contained explanation.
    Static,
    /// Explanation defers to another act via "as defined in".
    Dynamic,
}

/// Where a definition element was found.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DefinitionSource {
    pub celex: CelexId,
    pub article_heading: String,
    pub point_label: Option<String>,
    pub section_position: usize,
    pub paragraph_position: usize,
}

/// One extracted definition of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionElement {
    pub id: String,
    /// Normalized term (lowercase, single spaces).
    pub term: String,
    /// Explanation text starting at `means`, without the closing `;` or `.`.
    pub explanation: String,
    /// Ids of directly cited elements; empty for static definitions.
    #[serde(default)]
    pub references: Vec<String>,
    pub kind: DefinitionKind,
    pub source: DefinitionSource,
    /// Shared by terms defined together (`'a' or 'b' means ...`).
    pub aliases_group: String,
}

/// Dynamic iff the explanation contains `as defined in`, ignoring case.
pub fn classify_definition(explanation: &str) -> Result<DefinitionKind, DefinitionError> {
    if explanation.trim().is_empty() {
        return Err(DefinitionError::EmptyExplanation);
    }
    if explanation.to_lowercase().contains("as defined in") {
        Ok(DefinitionKind::Dynamic)
    } else {
        Ok(DefinitionKind::Static)
    }
}


/// Extraction followed by resolution against the extracted elements and the
/// same documents.
pub fn build_definition_corpus(
    documents: &[crate::corpus::Document],
) -> (Vec<DefinitionElement>, ResolutionReport, Vec<ExtractionWarning>) {
    let extraction = extract_corpus(documents);
    let index = ResolutionIndex::from_elements(&extraction.elements).with_documents(documents);
    let (elements, report) = resolve_citations(extraction.elements, &index);
    (elements, report, extraction.warnings)
}
