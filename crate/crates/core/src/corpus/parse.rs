//! Canonical act formats.
//!
//! Two encodings carry the same zone structure:
//!
//! * JSON ([`CanonicalAct`]): `{"celex", "title", "year", "eurovoc", "zones": [{"kind", "heading", "paragraphs"}]}`
//! * marker text, read by [`parse_legal_act`]: every zone opens with a marker
//!   line such as `== HEADER ==`, `== RECITAL ==`, `== ARTICLE: Article 2 Definitions ==`
//!   or `== ATTACHMENT: ANNEX I ==`; each following non-blank line is one paragraph.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::model::normalize_descriptors;
use super::{CelexId, CorpusError, Document, Section, SectionKind};

/// Title, descriptors and (optionally) year supplied next to the act text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActMetadata {
    pub title: String,
    #[serde(default)]
    pub eurovoc: Vec<String>,
    /// Defaults to the Celex year.
    #[serde(default)]
    pub year: Option<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalZone {
    pub kind: SectionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<String>,
    #[serde(default)]
    pub paragraphs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalAct {
    pub celex: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub year: Option<u16>,
    #[serde(default)]
    pub eurovoc: Vec<String>,
    #[serde(default)]
    pub zones: Vec<CanonicalZone>,
}

impl CanonicalAct {
    pub fn from_json(source: &str) -> Result<Self, CorpusError> {
        if source.trim().is_empty() {
            return Err(CorpusError::EmptyDocument);
        }
        serde_json::from_str(source).map_err(|e| CorpusError::MalformedAct(e.to_string()))
    }

    pub fn into_document(self) -> Result<Document, CorpusError> {
        let celex = CelexId::parse(self.celex.trim())?;
        let meta = ActMetadata {
            title: self.title,
            eurovoc: self.eurovoc,
            year: self.year,
        };
        build_document(celex, meta, self.zones)
    }

    /// Inverse of [`CanonicalAct::into_document`], up to blank paragraphs.
    pub fn from_document(doc: &Document) -> Self {
        CanonicalAct {
            celex: doc.celex.to_string(),
            title: doc.title.clone(),
            year: Some(doc.year),
            eurovoc: doc.eurovoc_descriptors.iter().cloned().collect(),
            zones: doc
                .sections
                .iter()
                .map(|s| CanonicalZone {
                    kind: s.kind,
                    heading: s.heading.clone(),
                    paragraphs: s.paragraphs.iter().map(|p| p.text.clone()).collect(),
                })
                .collect(),
        }
    }
}

static MARKER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^==\s*(header|recital|article|attachment)\s*(?::\s*(.*?))?\s*==$").unwrap()
});

/// Parses the marker-text form of an act into a [`Document`].
pub fn parse_legal_act(
    source_text: &str,
    celex: CelexId,
    metadata: ActMetadata,
) -> Result<Document, CorpusError> {
    if source_text.trim().is_empty() {
        return Err(CorpusError::EmptyDocument);
    }
    let mut zones: Vec<CanonicalZone> = Vec::new();
    for (lineno, line) in source_text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(caps) = MARKER.captures(line) {
            let kind = SectionKind::parse(&caps[1]).expect("regex restricts kinds");
            let heading = caps
                .get(2)
                .map(|m| m.as_str().trim().to_string())
                .filter(|h| !h.is_empty());
            zones.push(CanonicalZone {
                kind,
                heading,
                paragraphs: Vec::new(),
            });
            continue;
        }
        match zones.last_mut() {
            Some(zone) => zone.paragraphs.push(line.to_string()),
            None => {
                return Err(CorpusError::MalformedAct(format!(
                    "line {}: text before the first zone marker",
                    lineno + 1
                )))
            }
        }
    }
    if zones.is_empty() {
        return Err(CorpusError::MalformedAct("no zone markers".into()));
    }
    build_document(celex, metadata, zones)
}

/// Renders a document in marker-text form.
pub fn render_marker_text(doc: &Document) -> String {
    let mut out = String::new();
    for section in &doc.sections {
        let kind = match section.kind {
            SectionKind::Header => "HEADER",
            SectionKind::Recital => "RECITAL",
            SectionKind::Article => "ARTICLE",
            SectionKind::Attachment => "ATTACHMENT",
        };
        match &section.heading {
            Some(h) => out.push_str(&format!("== {kind}: {h} ==\n")),
            None => out.push_str(&format!("== {kind} ==\n")),
        }
        for p in &section.paragraphs {
            out.push_str(&p.text);
            out.push('\n');
        }
    }
    out
}

fn build_document(
    celex: CelexId,
    metadata: ActMetadata,
    zones: Vec<CanonicalZone>,
) -> Result<Document, CorpusError> {
    if zones.is_empty() {
        return Err(CorpusError::MalformedAct("no zones".into()));
    }
    let sections: Vec<Section> = zones
        .into_iter()
        .enumerate()
        .map(|(position, zone)| {
            let paragraphs = zone
                .paragraphs
                .iter()
                .map(|p| p.trim())
                .filter(|p| !p.is_empty())
                .map(str::to_string)
                .collect::<Vec<_>>();
            let heading = zone.heading.filter(|h| !h.trim().is_empty());
            Section::new(position, zone.kind, heading, paragraphs)
        })
        .collect();
    if sections.iter().all(|s| s.paragraphs.is_empty()) {
        return Err(CorpusError::EmptyDocument);
    }
    let doc = Document {
        year: metadata.year.unwrap_or_else(|| celex.year()),
        celex,
        title: metadata.title.trim().to_string(),
        eurovoc_descriptors: normalize_descriptors(&metadata.eurovoc),
        sections,
    };
    doc.validate()
        .map_err(|e| CorpusError::MalformedAct(e.to_string()))?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn celex() -> CelexId {
        CelexId::parse("32017R1369").unwrap()
    }

    const LABELLING_ACT: &str = "\
== HEADER ==
Regulation (EU) 2017/1369 of the European Parliament and of the Council of 4 July 2017 setting a framework for energy labelling and repealing Directive 2010/30/EU
== RECITAL ==
(1) The Union is committed to building an Energy Union with a forward-looking climate policy.
== RECITAL ==
(2) Informing customers about the efficiency of products is an effective instrument.
== ARTICLE: Article 1 Subject matter and scope ==
1. This Regulation lays down a framework that applies to energy-related products.
== ARTICLE: Article 2 Definitions ==
For the purposes of this Regulation, the following definitions apply:
(1) 'energy-related product' or 'product' means a good or system with an impact on energy consumption during use;
== ATTACHMENT: ANNEX I ==
Label requirements.
";

    #[test]
    fn zones_come_out_in_source_order() {
        let meta = ActMetadata {
            title: "setting a framework for energy labelling".into(),
            eurovoc: vec!["Energy Labelling".into()],
            year: None,
        };
        let doc = parse_legal_act(LABELLING_ACT, celex(), meta).unwrap();
        let kinds: Vec<_> = doc.sections.iter().map(|s| s.kind).collect();
        use SectionKind::*;
        assert_eq!(kinds, [Header, Recital, Recital, Article, Article, Attachment]);
        assert_eq!(doc.year, 2017);
        assert!(doc.eurovoc_descriptors.contains("energy labelling"));
        assert_eq!(doc.sections[4].heading.as_deref(), Some("Article 2 Definitions"));
        assert_eq!(doc.sections[4].paragraphs.len(), 2);
    }

    #[test]
    fn minimal_act_has_no_recitals() {
        let src = "== HEADER ==\nTitle\n== ARTICLE: Article 1 ==\nOnly provision.\n";
        let doc = parse_legal_act(src, celex(), ActMetadata::default()).unwrap();
        let kinds: Vec<_> = doc.sections.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, [SectionKind::Header, SectionKind::Article]);
    }

    #[test]
    fn empty_source_is_rejected() {
        assert!(matches!(
            parse_legal_act("", celex(), ActMetadata::default()),
            Err(CorpusError::EmptyDocument)
        ));
        assert!(matches!(
            parse_legal_act("== HEADER ==\n\n", celex(), ActMetadata::default()),
            Err(CorpusError::EmptyDocument)
        ));
    }

    #[test]
    fn unmarked_text_is_malformed() {
        assert!(matches!(
            parse_legal_act("just prose", celex(), ActMetadata::default()),
            Err(CorpusError::MalformedAct(_))
        ));
        assert!(matches!(
            parse_legal_act("prose\n== HEADER ==\nx", celex(), ActMetadata::default()),
            Err(CorpusError::MalformedAct(_))
        ));
    }

    #[test]
    fn article_marker_without_heading_is_malformed() {
        let src = "== ARTICLE ==\ntext";
        assert!(matches!(
            parse_legal_act(src, celex(), ActMetadata::default()),
            Err(CorpusError::MalformedAct(_))
        ));
    }

    #[test]
    fn json_form_matches_marker_form() {
        let meta = ActMetadata {
            title: "t".into(),
            eurovoc: vec![],
            year: Some(2017),
        };
        let from_text = parse_legal_act(LABELLING_ACT, celex(), meta).unwrap();
        let mut act = CanonicalAct::from_document(&from_text);
        act.zones[1].paragraphs.push("   ".into());
        let json = serde_json::to_string(&act).unwrap();
        let from_json = CanonicalAct::from_json(&json).unwrap().into_document().unwrap();
        assert_eq!(from_json, from_text);
    }

    fn zone_strategy() -> impl Strategy<Value = (SectionKind, Vec<String>)> {
        let kind = prop_oneof![
            Just(SectionKind::Recital),
            Just(SectionKind::Article),
            Just(SectionKind::Attachment)
        ];
        (kind, prop::collection::vec("[A-Za-z][A-Za-z0-9 ,;()]{0,40}[a-z.]", 1..4))
    }

    proptest! {
        #[test]
        fn positions_preserve_source_order(zones in prop::collection::vec(zone_strategy(), 1..8)) {
            let mut src = String::from("== HEADER ==\nHead\n");
            let mut expected = vec!["Head".to_string()];
            for (i, (kind, paras)) in zones.iter().enumerate() {
                match kind {
                    SectionKind::Recital => src.push_str("== RECITAL ==\n"),
                    SectionKind::Article => src.push_str(&format!("== ARTICLE: Article {} ==\n", i + 1)),
                    _ => src.push_str("== ATTACHMENT: ANNEX ==\n"),
                }
                for p in paras {
                    src.push_str(p);
                    src.push('\n');
                    expected.push(p.trim().to_string());
                }
            }
            let doc = parse_legal_act(&src, celex(), ActMetadata::default()).unwrap();
            let seen: Vec<String> = doc.sections.iter()
                .flat_map(|s| s.paragraphs.iter().map(|p| p.text.clone()))
                .collect();
            prop_assert_eq!(seen, expected);
            let reparsed = parse_legal_act(&render_marker_text(&doc), celex(), ActMetadata::default()).unwrap();
            prop_assert_eq!(reparsed.sections, doc.sections);
        }
    }
}
