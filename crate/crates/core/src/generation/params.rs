use std::path::Path;

use serde::{Deserialize, Serialize};

use super::GenerationError;

pub const MODEL_ENV: &str = "LEXFORGE_GEN_MODEL";

/// Decoding parameters sent with every completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub temperature: f64,
    pub top_k: u32,
    pub top_p: f64,
    pub repetition_penalty: f64,
    /// Model context window in tokens.
    pub context_length: usize,
    /// Tokens reserved for the completion inside the context window.
    pub max_tokens: usize,
    pub model_name: String,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            temperature: 0.2,
            top_k: 20,
            top_p: 0.6,
            repetition_penalty: 1.2,
            context_length: 4096,
            max_tokens: 128,
            model_name: "vicuna-7b-v1.5".to_string(),
        }
    }
}

impl GenParams {
    /// Defaults overridden by whichever keys the TOML document sets.
    pub fn from_toml(source: &str) -> Result<Self, GenerationError> {
        toml::from_str(source).map_err(|e| GenerationError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, GenerationError> {
        let source = std::fs::read_to_string(path)
            .map_err(|e| GenerationError::Config(format!("{}: {e}", path.display())))?;
        GenParams::from_toml(&source)
    }

    /// Applies `LEXFORGE_GEN_MODEL` when set.
    pub fn with_env_overrides(mut self) -> Self {
        if let Ok(model) = std::env::var(MODEL_ENV) {
            if !model.trim().is_empty() {
                self.model_name = model;
            }
        }
        self
    }

    /// Prompt tokens available once the completion reserve is taken out.
    pub fn prompt_budget(&self) -> usize {
        self.context_length.saturating_sub(self.max_tokens)
    }
}

/// Conservative token estimate: one token per four characters, rounded up.
pub fn estimate_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}
