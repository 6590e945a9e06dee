//! Prompt rendering, completion endpoint access and parsing of generated
//! definitions, plus assembly of cited definitions and the final article.

mod client;
mod compose;
mod params;
mod parse;
mod prompt;

use thiserror::Error;

pub use client::{completion_text, generate, generate_definition, Generator, HttpGenerator, MockGenerator, KEY_ENV, URL_ENV};
pub use compose::{compose_cited_definition, draft_definitions_article, union_label};
pub use params::{estimate_tokens, GenParams, MODEL_ENV};
pub use parse::{parse_generation, GenerationResult, MAX_WORDS, MIN_WORDS};
pub use prompt::{build_prompt, fit_to_context, json_escape, template_pieces, PromptSpec, TemplatePiece, PROMPT_TEMPLATE};

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("no fragments mention the term")]
    EmptyContext,
    #[error("prompt needs ~{estimated} tokens, budget is {budget}")]
    ContextOverflow { estimated: usize, budget: usize },
    #[error("endpoint failure (status {status:?}): {message}")]
    EndpointFailure { status: Option<u16>, message: String },
    #[error("no JSON object in the response")]
    NoJsonFound,
    #[error("response JSON lacks key {0:?}")]
    MissingKey(String),
    #[error("cannot cite target: {0}")]
    UnresolvableTarget(String),
    #[error("duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error("configuration: {0}")]
    Config(String),
}
