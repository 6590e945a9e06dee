//! Term lookup over the definition corpus and lexical fragment retrieval
//! over drafted sections.

mod index;
mod lookup;

use thiserror::Error;

pub use index::{build_index, phrase_count, retrieve_fragments, InvertedIndex, Posting, ScoredFragment, DEFAULT_K};
pub use lookup::{rank_candidates, DefinitionMatch, DefinitionStore, DocumentMeta, RankedDefinition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RetrievalError {
    #[error("duplicate fragment id {0}")]
    DuplicateFragmentId(String),
    #[error("k must be at least 1")]
    InvalidK,
}

const QUOTES: [char; 6] = ['\'', '"', '\u{2018}', '\u{2019}', '\u{201c}', '\u{201d}'];

/// Lowercases, trims, strips surrounding quote pairs and collapses internal
/// whitespace. A quote is only stripped when the string both starts and ends
/// with one, so `status free from "disease"` is left alone.
pub fn normalize_term(raw: &str) -> String {
    let mut s = raw.trim();
    loop {
        let mut chars = s.chars();
        match (chars.next(), chars.next_back()) {
            (Some(a), Some(b)) if QUOTES.contains(&a) && QUOTES.contains(&b) => {
                s = s[a.len_utf8()..s.len() - b.len_utf8()].trim();
            }
            _ => break,
        }
    }
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}
