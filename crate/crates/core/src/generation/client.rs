//! Completion endpoint clients.

use std::collections::HashMap;
use std::time::Duration;

use serde_json::{json, Value};

use super::params::{estimate_tokens, GenParams};
use super::parse::parse_generation;
use super::{GenerationError, GenerationResult, PromptSpec};

pub const URL_ENV: &str = "LEXFORGE_GEN_URL";
pub const KEY_ENV: &str = "LEXFORGE_GEN_KEY";

/// Something that turns a rendered prompt into raw completion text.
pub trait Generator: Send + Sync {
    fn complete(&self, prompt: &str, params: &GenParams) -> Result<String, GenerationError>;
}

/// OpenAI-compatible chat completion client. The prompt is sent as a single
/// user message.
#[derive(Debug, Clone)]
pub struct HttpGenerator {
    url: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl HttpGenerator {
    /// `base` is either a full `.../completions` URL or an API root such as
    /// `http://host:8000/v1`, to which `/chat/completions` is appended.
    pub fn new(base: &str, api_key: Option<String>) -> Self {
        let base = base.trim_end_matches('/');
        let url = if base.ends_with("/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        };
        HttpGenerator {
            url,
            api_key: api_key.filter(|k| !k.is_empty()),
            agent: ureq::AgentBuilder::new()
                .timeout(Duration::from_secs(300))
                .build(),
        }
    }

    /// Reads `LEXFORGE_GEN_URL` and `LEXFORGE_GEN_KEY`.
    pub fn from_env() -> Result<Self, GenerationError> {
        let url = std::env::var(URL_ENV)
            .map_err(|_| GenerationError::Config(format!("{URL_ENV} is not set")))?;
        Ok(HttpGenerator::new(&url, std::env::var(KEY_ENV).ok()))
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn request_body(prompt: &str, params: &GenParams) -> Value {
        json!({
            "model": params.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "top_p": params.top_p,
            "top_k": params.top_k,
            "repetition_penalty": params.repetition_penalty,
            "max_tokens": params.max_tokens,
        })
    }
}

/// First completion text in a chat (`message.content`) or legacy (`text`)
/// response body.
pub fn completion_text(body: &Value) -> Option<String> {
    let choice = body.get("choices")?.get(0)?;
    choice
        .pointer("/message/content")
        .or_else(|| choice.get("text"))
        .and_then(Value::as_str)
        .map(str::to_string)
}

impl Generator for HttpGenerator {
    fn complete(&self, prompt: &str, params: &GenParams) -> Result<String, GenerationError> {
        let mut request = self.agent.post(&self.url);
        if let Some(key) = &self.api_key {
            request = request.set("Authorization", &format!("Bearer {key}"));
        }
        let response = request
            .send_json(HttpGenerator::request_body(prompt, params))
            .map_err(|e| match e {
                ureq::Error::Status(status, resp) => GenerationError::EndpointFailure {
                    status: Some(status),
                    message: resp.into_string().unwrap_or_default(),
                },
                other => GenerationError::EndpointFailure {
                    status: None,
                    message: other.to_string(),
                },
            })?;
        let body: Value = response.into_json().map_err(|e| GenerationError::EndpointFailure {
            status: None,
            message: format!("invalid response body: {e}"),
        })?;
        completion_text(&body).ok_or_else(|| GenerationError::EndpointFailure {
            status: None,
            message: "response has no completion text".into(),
        })
    }
}

/// Deterministic local generator keyed by the term named in the prompt.
#[derive(Debug, Clone, Default)]
pub struct MockGenerator {
    canned: HashMap<String, String>,
}

impl MockGenerator {
    pub fn new() -> Self {
        MockGenerator::default()
    }

    /// Registers a fixed raw response for `term`.
    pub fn with_response(mut self, term: &str, raw: impl Into<String>) -> Self {
        self.canned.insert(term.to_string(), raw.into());
        self
    }

    /// Term from the `Define the term: ..., based on` line of a prompt.
    pub fn term_in_prompt(prompt: &str) -> Option<&str> {
        let start = prompt.find("Define the term: ")? + "Define the term: ".len();
        let rest = &prompt[start..];
        let end = rest.find(", based on the sentences")?;
        Some(&rest[..end])
    }

    /// The fallback response: a 30-word definition wrapped in a fenced JSON
    /// block with a short preamble, as small chat models tend to answer.
    pub fn default_response(term: &str) -> String {
        let definition = format!(
            "'{term}' means any natural or legal person or body that carries out activities relating to the {term} within the scope of this act, in accordance with the conditions laid down in Union law;"
        );
        let body = json!({"term": term, "definition": definition});
        format!("Sure, here is the definition:\n```json\n{body}\n```")
    }
}

impl Generator for MockGenerator {
    fn complete(&self, prompt: &str, _params: &GenParams) -> Result<String, GenerationError> {
        let term = MockGenerator::term_in_prompt(prompt).unwrap_or("term");
        Ok(self
            .canned
            .get(term)
            .cloned()
            .unwrap_or_else(|| MockGenerator::default_response(term)))
    }
}

/// Sends the rendered prompt after checking it fits the context window.
pub fn generate(
    prompt: &PromptSpec,
    params: &GenParams,
    endpoint: &dyn Generator,
) -> Result<String, GenerationError> {
    let estimated = estimate_tokens(&prompt.rendered);
    if estimated > params.prompt_budget() {
        return Err(GenerationError::ContextOverflow {
            estimated,
            budget: params.prompt_budget(),
        });
    }
    endpoint.complete(&prompt.rendered, params)
}

/// [`generate`] followed by [`parse_generation`], retrying once with the same
/// prompt when the response carries no usable JSON.
pub fn generate_definition(
    prompt: &PromptSpec,
    params: &GenParams,
    endpoint: &dyn Generator,
) -> Result<GenerationResult, GenerationError> {
    let mut attempts = 0;
    loop {
        let raw = generate(prompt, params, endpoint)?;
        match parse_generation(&raw, &prompt.term) {
            Err(e @ (GenerationError::NoJsonFound | GenerationError::MissingKey(_))) if attempts == 0 => {
                log::warn!("unusable generation for {:?} ({e}); retrying", prompt.term);
                attempts += 1;
            }
            other => return other,
        }
    }
}
