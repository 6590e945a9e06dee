use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::DefinitionError;
use crate::corpus::{CelexId, Instrument};

/// A reference such as `point (31) of Article 2 of Directive (EU) 2019/944`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CitationExpr {
    pub point: Option<u32>,
    pub article: u32,
    pub instrument: Instrument,
    pub union_label: String,
    pub year: u32,
    pub serial: u32,
}

impl fmt::Display for CitationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(point) = self.point {
            write!(f, "point ({point}) of ")?;
        }
        write!(
            f,
            "Article {} of {} ({}) {}/{}",
            self.article, self.instrument, self.union_label, self.year, self.serial
        )
    }
}

static CITATION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"\b(?:point\s+\((\d+)\)\s+of\s+)?Article\s+(\d+)\s+of\s+(Directive|Regulation|Decision)\s+\(([A-Za-z]+)\)\s+(\d+)/(\d+)\b",
    )
    .unwrap()
});

// Plural or lettered point qualifiers ("points (a) and (b) of", "point (c) of")
// sit outside the grammar.
static UNSUPPORTED_QUALIFIER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\bpoints?\s+\([^)]*\)(?:\s*(?:,|and|or|to)\s*\([^)]*\))*\s+of\s+$").unwrap()
});

/// A citation match plus whether it was preceded by an out-of-grammar point
/// qualifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ScannedCitation {
    pub expr: CitationExpr,
    pub unsupported_point: bool,
}

pub(crate) fn scan_citations(text: &str) -> Vec<ScannedCitation> {
    CITATION
        .captures_iter(text)
        .filter_map(|caps| {
            let num = |i: usize| caps.get(i).and_then(|m| m.as_str().parse::<u32>().ok());
            let instrument = match &caps[3] {
                "Directive" => Instrument::Directive,
                "Regulation" => Instrument::Regulation,
                _ => Instrument::Decision,
            };
            let expr = CitationExpr {
                point: num(1),
                article: num(2)?,
                instrument,
                union_label: caps[4].to_string(),
                year: num(5)?,
                serial: num(6)?,
            };
            if expr.article == 0 || expr.year == 0 || expr.serial == 0 {
                return None;
            }
            let start = caps.get(0).expect("whole match").start();
            let unsupported_point =
                expr.point.is_none() && UNSUPPORTED_QUALIFIER.is_match(&text[..start]);
            Some(ScannedCitation {
                expr,
                unsupported_point,
            })
        })
        .collect()
}

/// Every citation in `text`, in textual order.
pub fn parse_citation(text: &str) -> Vec<CitationExpr> {
    scan_citations(text).into_iter().map(|s| s.expr).collect()
}

/// Maps a citation to the Celex id of the cited act: sector 3, year,
/// instrument letter, zero-padded serial.
pub fn citation_to_celex(cite: &CitationExpr) -> Result<CelexId, DefinitionError> {
    let year = u16::try_from(cite.year).map_err(|_| DefinitionError::CelexOutOfRange(cite.to_string()))?;
    CelexId::from_parts(3, year, cite.instrument.letter(), cite.serial)
        .map_err(|_| DefinitionError::CelexOutOfRange(cite.to_string()))
}
