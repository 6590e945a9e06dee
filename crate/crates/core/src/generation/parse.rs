use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::GenerationError;
use crate::retrieval::normalize_term;

pub const MIN_WORDS: usize = 25;
pub const MAX_WORDS: usize = 45;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationResult {
    pub term: String,
    pub definition: String,
    pub word_count: usize,
    /// `MIN_WORDS <= word_count <= MAX_WORDS`.
    pub length_ok: bool,
    pub raw_response: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Byte range of the first balanced `{...}` region, skipping braces inside
/// JSON string literals.
fn first_object(raw: &str) -> Option<&str> {
    let start = raw.find('{')?;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in raw[start..].char_indices() {
        if in_string {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&raw[start..start + i + 1]);
                }
            }
            _ => {}
        }
    }
    None
}

static LOOSE_KEY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#""(term|definition)"\s*:\s*("(?:[^"\\]|\\.)*")"#).unwrap());

/// Key/value pairs of an object, tolerating the missing comma that the
/// prompt's own skeleton invites.
fn object_fields(region: &str) -> Vec<(String, String)> {
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(region) {
        return map
            .into_iter()
            .map(|(k, v)| {
                let text = match v {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                (k, text)
            })
            .collect();
    }
    LOOSE_KEY
        .captures_iter(region)
        .filter_map(|c| {
            let value: String = serde_json::from_str(&c[2]).ok()?;
            Some((c[1].to_string(), value))
        })
        .collect()
}

fn strip_fences(text: &str) -> String {
    text.trim().trim_matches('`').trim().to_string()
}

/// Parses the generator's reply for `expected_term`.
pub fn parse_generation(raw: &str, expected_term: &str) -> Result<GenerationResult, GenerationError> {
    let region = first_object(raw).ok_or(GenerationError::NoJsonFound)?;
    let fields = object_fields(region);
    let get = |key: &str| {
        fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| GenerationError::MissingKey(key.to_string()))
    };
    let term = get("term")?;
    let definition = strip_fences(&get("definition")?);
    let word_count = definition.split_whitespace().count();
    let mut warnings = Vec::new();
    if normalize_term(&term) != normalize_term(expected_term) {
        warnings.push(format!("generator returned term {term:?}, expected {expected_term:?}"));
    }
    Ok(GenerationResult {
        term,
        definition,
        word_count,
        length_ok: (MIN_WORDS..=MAX_WORDS).contains(&word_count),
        raw_response: raw.to_string(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn abandoned_land() {
        let raw = r#"{"term": "abandoned land", "definition": "'abandoned land' means land that has been unused or neglected for an extended period of time, often due to economic, environmental, or social reasons;"}"#;
        let r = parse_generation(raw, "abandoned land").unwrap();
        assert_eq!(
            r.definition,
            "'abandoned land' means land that has been unused or neglected for an extended period of time, often due to economic, environmental, or social reasons;"
        );
        assert_eq!(r.word_count, 24);
        assert!(!r.length_ok);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn prose_only() {
        assert!(matches!(
            parse_generation("I cannot help with that.", "x"),
            Err(GenerationError::NoJsonFound)
        ));
    }

    #[test]
    fn missing_definition() {
        match parse_generation(r#"{"term": "x"}"#, "x") {
            Err(GenerationError::MissingKey(k)) => assert_eq!(k, "definition"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decorated_and_fenced() {
        let raw = "Here you go:\n```json\n{\n\"term\": \"grid\"\n\"definition\": \"```a network of {lines}```\"\n}\n```\nHope it helps";
        let r = parse_generation(raw, "Grid").unwrap();
        assert_eq!(r.definition, "a network of {lines}");
        assert_eq!(r.term, "grid");
    }

    #[test]
    fn term_mismatch_is_a_warning() {
        let r = parse_generation(r#"{"term": "y", "definition": "d"}"#, "x").unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn word_bounds() {
        let def = |n: usize| format!(r#"{{"term":"t","definition":"{}"}}"#, vec!["w"; n].join(" "));
        assert!(!parse_generation(&def(24), "t").unwrap().length_ok);
        assert!(parse_generation(&def(25), "t").unwrap().length_ok);
        assert!(parse_generation(&def(45), "t").unwrap().length_ok);
        assert!(!parse_generation(&def(46), "t").unwrap().length_ok);
    }

    proptest! {
        #[test]
        fn never_panics(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
            let raw = String::from_utf8_lossy(&bytes);
            let _ = parse_generation(&raw, "term");
        }

        #[test]
        fn never_panics_on_jsonish(raw in r#"[{}"\\:a-z ,`\n]{0,120}"#) {
            let _ = parse_generation(&raw, "term");
        }

        #[test]
        fn recovers_fields(term in "\\PC{1,30}",
                           definition in r#"[\w'";:{}(),.-][\w '";:{}(),.\\-]{0,150}[\w;.]"#) {
            let raw = serde_json::json!({"term": term, "definition": definition}).to_string();
            let r = parse_generation(&raw, &term).unwrap();
            prop_assert_eq!(r.term, term);
            prop_assert_eq!(r.definition, definition);
        }
    }
}
