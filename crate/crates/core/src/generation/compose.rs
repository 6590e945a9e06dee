use std::collections::HashSet;

use crate::corpus::Instrument;
use crate::definitions::{article_number, CitationExpr, DefinitionElement, DefinitionKind};
use crate::retrieval::normalize_term;

use super::GenerationError;

/// Label printed in brackets after the instrument name. Acts numbered by
/// year/serial from 2010 on are EU acts; earlier ones EC, and EEC before 1993.
pub fn union_label(year: u16) -> &'static str {
    match year {
        y if y >= 2010 => "EU",
        y if y >= 1993 => "EC",
        _ => "EEC",
    }
}

fn citation_for(target: &DefinitionElement) -> Result<CitationExpr, GenerationError> {
    let unresolvable = |why: &str| GenerationError::UnresolvableTarget(format!("{}: {why}", target.id));
    let celex = &target.source.celex;
    let instrument = celex
        .instrument()
        .ok_or_else(|| unresolvable("instrument is not a directive, regulation or decision"))?;
    let article = article_number(&target.source.article_heading)
        .ok_or_else(|| unresolvable("article heading has no number"))?;
    Ok(CitationExpr {
        point: target.source.point_label.as_deref().and_then(|l| l.parse().ok()),
        article,
        instrument,
        union_label: union_label(celex.year()).to_string(),
        year: u32::from(celex.year()),
        serial: celex.serial_number(),
    })
}

/// Wording that defines `term` by citing an existing static definition:
/// `'<term>' means <term> as defined in [point (N) of] Article M of <Instrument> (<label>) <year>/<serial>`.
///
/// A dynamic `target` is replaced by the first of its `resolved_targets`.
/// The text carries no closing punctuation; article assembly adds it.
pub fn compose_cited_definition(
    term: &str,
    target: &DefinitionElement,
    resolved_targets: &[DefinitionElement],
) -> Result<String, GenerationError> {
    let cited = match target.kind {
        DefinitionKind::Static => target,
        DefinitionKind::Dynamic => resolved_targets
            .iter()
            .find(|t| t.kind == DefinitionKind::Static)
            .ok_or_else(|| {
                GenerationError::UnresolvableTarget(format!("{} has no resolved static target", target.id))
            })?,
    };
    let citation = citation_for(cited)?;
    debug_assert!(matches!(
        citation.instrument,
        Instrument::Directive | Instrument::Regulation | Instrument::Decision
    ));
    Ok(format!("'{term}' means {term} as defined in {citation}"))
}

fn strip_terminal_punctuation(text: &str) -> &str {
    text.trim().trim_end_matches([';', '.']).trim_end()
}

/// Assembles accepted definitions into a *Definitions* article: a heading
/// line, then `(n) ...` points in acceptance order, each closed by `;`
/// except the last, closed by `.`.
pub fn draft_definitions_article(
    article_number: u32,
    accepted: &[(String, String)],
) -> Result<String, GenerationError> {
    let mut seen = HashSet::new();
    for (term, _) in accepted {
        let key = normalize_term(term);
        if !seen.insert(key.clone()) {
            return Err(GenerationError::DuplicateTerm(key));
        }
    }
    let mut out = format!("Article {article_number} \u{2014} Definitions\n");
    for (i, (_, text)) in accepted.iter().enumerate() {
        let terminator = if i + 1 == accepted.len() { '.' } else { ';' };
        out.push_str(&format!("({}) {}{}\n", i + 1, strip_terminal_punctuation(text), terminator));
    }
    Ok(out)
}
