use serde::{Deserialize, Serialize};

use super::params::{estimate_tokens, GenParams};
use super::GenerationError;
use crate::retrieval::ScoredFragment;

/// The stored generation prompt. `{term}` and `{sentences}` are the only
/// placeholders; a `{term}` directly inside a JSON string literal is
/// substituted JSON-escaped.
pub const PROMPT_TEMPLATE: &str = include_str!("prompt_template.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub term: String,
    pub fragments: Vec<String>,
    pub rendered: String,
}

/// A literal run of the template or one of its placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplatePiece<'a> {
    Literal(&'a str),
    Term { json_escaped: bool },
    Sentences,
}

/// Splits the template into literal runs and placeholders.
pub fn template_pieces(template: &str) -> Vec<TemplatePiece<'_>> {
    const TERM: &str = "{term}";
    const SENTENCES: &str = "{sentences}";
    let mut pieces = Vec::new();
    let mut rest = template;
    let mut consumed = 0;
    loop {
        let next = [(rest.find(TERM), TERM), (rest.find(SENTENCES), SENTENCES)]
            .into_iter()
            .filter_map(|(pos, tag)| pos.map(|p| (p, tag)))
            .min_by_key(|(p, _)| *p);
        let Some((pos, tag)) = next else {
            if !rest.is_empty() {
                pieces.push(TemplatePiece::Literal(rest));
            }
            return pieces;
        };
        if pos > 0 {
            pieces.push(TemplatePiece::Literal(&rest[..pos]));
        }
        if tag == TERM {
            let json_escaped = template[..consumed + pos].ends_with('"');
            pieces.push(TemplatePiece::Term { json_escaped });
        } else {
            pieces.push(TemplatePiece::Sentences);
        }
        consumed += pos + tag.len();
        rest = &rest[pos + tag.len()..];
    }
}

/// JSON string escaping without the surrounding quotes.
pub fn json_escape(text: &str) -> String {
    let quoted = serde_json::to_string(text).expect("strings always serialize");
    quoted[1..quoted.len() - 1].to_string()
}

fn render(term: &str, fragments: &[String]) -> String {
    let sentences = fragments.join("\n");
    let mut out = String::with_capacity(PROMPT_TEMPLATE.len() + sentences.len() + 2 * term.len());
    for piece in template_pieces(PROMPT_TEMPLATE) {
        match piece {
            TemplatePiece::Literal(s) => out.push_str(s),
            TemplatePiece::Term { json_escaped: false } => out.push_str(term),
            TemplatePiece::Term { json_escaped: true } => out.push_str(&json_escape(term)),
            TemplatePiece::Sentences => out.push_str(&sentences),
        }
    }
    out
}

/// Renders the prompt for `term` with the fragment texts in retrieval order,
/// one per line.
pub fn build_prompt(term: &str, fragments: &[ScoredFragment]) -> Result<PromptSpec, GenerationError> {
    if fragments.is_empty() {
        return Err(GenerationError::EmptyContext);
    }
    let texts: Vec<String> = fragments.iter().map(|f| f.fragment.text.clone()).collect();
    Ok(PromptSpec {
        term: term.to_string(),
        rendered: render(term, &texts),
        fragments: texts,
    })
}

/// Drops the lowest-ranked fragments until the rendered prompt fits the
/// prompt budget. At least one fragment is kept so an oversized single
/// fragment surfaces as a context overflow rather than an empty context.
pub fn fit_to_context(
    term: &str,
    mut fragments: Vec<ScoredFragment>,
    params: &GenParams,
) -> Vec<ScoredFragment> {
    while fragments.len() > 1 {
        let texts: Vec<String> = fragments.iter().map(|f| f.fragment.text.clone()).collect();
        if estimate_tokens(&render(term, &texts)) <= params.prompt_budget() {
            break;
        }
        fragments.pop();
    }
    fragments
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Fragment;

    fn scored(text: &str, count: usize) -> ScoredFragment {
        ScoredFragment {
            fragment: Fragment {
                fragment_id: format!("draft:0:0:{count}"),
                celex: None,
                section_position: 0,
                paragraph_position: 0,
                sentence_position: count,
                text: text.into(),
            },
            phrase_count: count,
        }
    }

    #[test]
    fn template_has_expected_placeholders() {
        let pieces = template_pieces(PROMPT_TEMPLATE);
        let placeholders: Vec<_> = pieces
            .iter()
            .filter(|p| !matches!(p, TemplatePiece::Literal(_)))
            .collect();
        assert_eq!(
            placeholders,
            [
                &TemplatePiece::Term { json_escaped: false },
                &TemplatePiece::Sentences,
                &TemplatePiece::Term { json_escaped: true }
            ]
        );
    }

    #[test]
    fn renders_fuel_producer() {
        let frags = [
            scored("A fuel producer shall report annually.", 2),
            scored("Each fuel producer keeps records.", 1),
            scored("Fuel producer obligations apply.", 1),
        ];
        let p = build_prompt("fuel producer", &frags).unwrap();
        assert!(p.rendered.starts_with(
            "Act as a Lawyer drafting European Legislative documents to be published on the Eur-Lex website."
        ));
        assert!(p.rendered.contains("Define the term: fuel producer, based on"));
        assert!(p.rendered.contains(
            "---\nA fuel producer shall report annually.\nEach fuel producer keeps records.\nFuel producer obligations apply.\n---"
        ));
        assert!(p.rendered.contains("\"term\": \"fuel producer\""));
        assert_eq!(p.fragments.len(), 3);
    }

    #[test]
    fn empty_context() {
        assert!(matches!(build_prompt("x", &[]), Err(GenerationError::EmptyContext)));
    }

    #[test]
    fn escapes_term_in_json_skeleton() {
        let term = "operator's \"special\" licence";
        let p = build_prompt(term, &[scored("text", 1)]).unwrap();
        assert!(p.rendered.contains(&format!("Define the term: {term}, based")));
        let line = p
            .rendered
            .lines()
            .find(|l| l.starts_with("\"term\":"))
            .unwrap();
        let value: serde_json::Value = serde_json::from_str(&format!("{{{line}}}")).unwrap();
        assert_eq!(value["term"], term);
    }

    #[test]
    fn fitting_drops_lowest_ranked() {
        let params = GenParams {
            context_length: 450,
            max_tokens: 128,
            ..GenParams::default()
        };
        let long = "word ".repeat(60);
        let frags = vec![scored(&long, 3), scored(&long, 2), scored(&long, 1)];
        let kept = fit_to_context("word", frags, &params);
        assert!(!kept.is_empty() && kept.len() < 3);
        assert_eq!(kept[0].phrase_count, 3);
        let texts: Vec<String> = kept.iter().map(|f| f.fragment.text.clone()).collect();
        assert!(estimate_tokens(&render("word", &texts)) <= params.prompt_budget());
    }
}
