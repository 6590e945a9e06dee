use std::collections::HashSet;
use std::path::Path;

use super::{CorpusError, Document};
use crate::jsonl::{self, ReadError};

/// Writes one document per line. Fails before touching `destination` if two
/// documents share a Celex id.
pub fn save_corpus(documents: &[Document], destination: &Path) -> Result<usize, CorpusError> {
    let mut seen = HashSet::new();
    for doc in documents {
        if !seen.insert(&doc.celex) {
            return Err(CorpusError::DuplicateCelex(doc.celex.to_string()));
        }
    }
    jsonl::write_records(destination, documents).map_err(CorpusError::Storage)
}

/// Reads a corpus file, re-validating every document.
pub fn load_corpus(source: &Path) -> Result<Vec<Document>, CorpusError> {
    jsonl::read_records(source, |doc: &Document| {
        doc.validate().map_err(|e| e.to_string())
    })
    .map_err(|e| match e {
        ReadError::Io(e) => CorpusError::Storage(e),
        ReadError::Line(line, message) => CorpusError::SchemaViolation { line, message },
    })
}
