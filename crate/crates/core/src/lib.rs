//! Drafting engine for *Definitions* articles of EU-style legislative acts.
//!
//! The crate is organised along the pipeline:
//!
//! - [`corpus`]: legal act document model, canonical act parsing, sentence
//!   fragmentation, JSONL corpus persistence and EUR-Lex fetching.
//! - [`definitions`]: *Definitions* article location, definition element
//!   extraction, citation parsing and cross-document resolution.
//! - [`retrieval`]: term lookup with eurovoc ranking, and phrase-frequency
//!   fragment retrieval over drafted sections.
//! - [`generation`]: prompt rendering, the completion endpoint client, response
//!   parsing and article assembly.
//! - [`evaluation`]: tokenisation, sentence-level BLEU and corpus statistics.

pub mod corpus;
pub mod definitions;
pub mod evaluation;
pub mod generation;
pub mod jsonl;
pub mod retrieval;

pub use corpus::{CelexId, Document, Draft, Fragment, Section, SectionKind};
pub use definitions::{CitationExpr, DefinitionElement, DefinitionKind, ResolutionReport};
pub use evaluation::{BleuReport, CorpusStats};
pub use generation::{GenParams, GenerationResult, Generator, MockGenerator, PromptSpec};
pub use retrieval::{DefinitionStore, InvertedIndex, RankedDefinition, ScoredFragment};
