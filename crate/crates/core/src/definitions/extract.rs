use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{classify_definition, DefinitionElement, DefinitionSource};
use crate::corpus::fragment::normalize_whitespace;
use crate::corpus::{CelexId, Document, Section, SectionKind};

/// First article whose heading contains the word `definitions`, ignoring case.
pub fn locate_definitions_article(doc: &Document) -> Option<&Section> {
    doc.sections.iter().find(|s| {
        s.kind == SectionKind::Article
            && s.heading.as_deref().is_some_and(|h| {
                h.split(|c: char| !c.is_alphanumeric())
                    .any(|w| w.eq_ignore_ascii_case("definitions"))
            })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionWarning {
    pub celex: CelexId,
    pub paragraph_position: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub elements: Vec<DefinitionElement>,
    pub warnings: Vec<ExtractionWarning>,
}

static POINT_LABEL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:\(([0-9A-Za-z]{1,5})\)|([0-9]{1,3})\.)\s+").unwrap());

const OPEN_QUOTES: [char; 2] = ['\'', '\u{2018}'];
const CLOSE_QUOTES: [char; 2] = ['\'', '\u{2019}'];

/// Parsed shape of one definition point.
#[derive(Debug, PartialEq, Eq)]
struct DefinitionPoint {
    label: Option<String>,
    terms: Vec<String>,
    explanation: String,
}

/// Lowercases, trims and collapses whitespace. Inner quotation marks stay.
pub(crate) fn normalize_extracted_term(raw: &str) -> String {
    normalize_whitespace(raw).to_lowercase()
}

fn starts_with_word(s: &str, word: &str) -> bool {
    s.starts_with(word)
        && s[word.len()..]
            .chars()
            .next()
            .map_or(true, |c| !c.is_alphanumeric())
}

/// Reads a quoted term starting at `text[0]` (an opening quote). Returns the
/// term and the remainder after the closing quote. A closing quote only
/// counts when followed by `or '...` or by `means`, so apostrophes inside a
/// term survive.
fn read_quoted(text: &str) -> Option<(&str, &str)> {
    let open = text.chars().next()?;
    if !OPEN_QUOTES.contains(&open) {
        return None;
    }
    let body = &text[open.len_utf8()..];
    for (idx, c) in body.char_indices() {
        if !CLOSE_QUOTES.contains(&c) {
            continue;
        }
        let rest = &body[idx + c.len_utf8()..];
        let after = rest.trim_start();
        if starts_with_word(after, "means") {
            return Some((&body[..idx], rest));
        }
        if starts_with_word(after, "or")
            && after[2..]
                .trim_start()
                .starts_with(|q: char| OPEN_QUOTES.contains(&q))
        {
            return Some((&body[..idx], rest));
        }
    }
    None
}

fn strip_terminator(explanation: &str) -> &str {
    let mut e = explanation.trim_end();
    for tail in ["; and", "; or", ";", "."] {
        if let Some(stripped) = e.strip_suffix(tail) {
            e = stripped.trim_end();
            break;
        }
    }
    e
}

fn parse_point(paragraph: &str) -> Result<DefinitionPoint, &'static str> {
    let text = normalize_whitespace(paragraph);
    let mut rest: &str = &text;
    let mut label = None;
    if let Some(caps) = POINT_LABEL.captures(rest) {
        label = caps.get(1).or(caps.get(2)).map(|m| m.as_str().to_string());
        rest = &rest[caps.get(0).expect("match").end()..];
    }
    let mut terms = Vec::new();
    loop {
        let (raw, after) = read_quoted(rest).ok_or("no quoted term followed by 'means'")?;
        let term = normalize_extracted_term(raw);
        if term.is_empty() {
            return Err("empty quoted term");
        }
        terms.push(term);
        let after = after.trim_start();
        if starts_with_word(after, "means") {
            rest = after;
            break;
        }
        rest = after[2..].trim_start();
    }
    let explanation = strip_terminator(rest).to_string();
    if explanation.len() <= "means".len() {
        return Err("empty explanation");
    }
    Ok(DefinitionPoint {
        label,
        terms,
        explanation,
    })
}

fn short_hash(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part.as_bytes());
        hasher.update([0x1f]);
    }
    hasher
        .finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Deterministic id from (celex, heading, point label, term). Unlabelled
/// points hash their paragraph position in place of the label.
pub fn element_id(celex: &CelexId, heading: &str, label: &str, term: &str) -> String {
    format!("def-{}", short_hash(&[celex.as_str(), heading, label, term]))
}

/// Extracts definition elements from a *Definitions* article.
///
/// Paragraphs that do not follow the `'term' [or 'term'] means ...` wording
/// become warnings, except an unlabelled lead-in ending in `:`. Extraction
/// itself never fails.
pub fn extract_definitions(section: &Section, celex: &CelexId) -> Extraction {
    let heading = section.heading.clone().unwrap_or_default();
    let mut out = Extraction::default();
    let mut seen = HashSet::new();
    for para in &section.paragraphs {
        if is_lead_in(&para.text) {
            continue;
        }
        let point = match parse_point(&para.text) {
            Ok(point) => point,
            Err(reason) => {
                out.warnings.push(ExtractionWarning {
                    celex: celex.clone(),
                    paragraph_position: para.position,
                    reason: reason.to_string(),
                });
                continue;
            }
        };
        let label_key = point
            .label
            .clone()
            .unwrap_or_else(|| format!("#{}", para.position));
        let group = format!(
            "grp-{}",
            short_hash(&[celex.as_str(), &heading, &label_key])
        );
        let kind = classify_definition(&point.explanation).expect("explanation is non-empty");
        for term in point.terms {
            let id = element_id(celex, &heading, &label_key, &term);
            if !seen.insert(id.clone()) {
                out.warnings.push(ExtractionWarning {
                    celex: celex.clone(),
                    paragraph_position: para.position,
                    reason: format!("term {term:?} repeated in the same point"),
                });
                continue;
            }
            out.elements.push(DefinitionElement {
                id,
                term,
                explanation: point.explanation.clone(),
                references: Vec::new(),
                kind,
                source: DefinitionSource {
                    celex: celex.clone(),
                    article_heading: heading.clone(),
                    point_label: point.label.clone(),
                    section_position: section.position,
                    paragraph_position: para.position,
                },
                aliases_group: group.clone(),
            });
        }
    }
    out
}

fn is_lead_in(text: &str) -> bool {
    text.trim_end().ends_with(':') && !POINT_LABEL.is_match(text)
}

/// Locates and extracts the *Definitions* article of each document.
pub fn extract_corpus(documents: &[Document]) -> Extraction {
    let mut all = Extraction::default();
    for doc in documents {
        if let Some(section) = locate_definitions_article(doc) {
            let Extraction { elements, warnings } = extract_definitions(section, &doc.celex);
            all.elements.extend(elements);
            all.warnings.extend(warnings);
        }
    }
    all
}
