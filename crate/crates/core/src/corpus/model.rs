use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CelexId, CorpusError};

/// The four zones a legal act is structured into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Header,
    Recital,
    Article,
    Attachment,
}

impl SectionKind {
    pub fn parse(label: &str) -> Option<Self> {
        match label.trim().to_ascii_lowercase().as_str() {
            "header" => Some(SectionKind::Header),
            "recital" => Some(SectionKind::Recital),
            "article" => Some(SectionKind::Article),
            "attachment" => Some(SectionKind::Attachment),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub position: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub position: usize,
    pub kind: SectionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<String>,
    pub paragraphs: Vec<Paragraph>,
}

impl Section {
    /// Builds a section with paragraph positions assigned in order.
    pub fn new<I, S>(position: usize, kind: SectionKind, heading: Option<String>, paragraphs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let paragraphs = paragraphs
            .into_iter()
            .enumerate()
            .map(|(position, text)| Paragraph {
                position,
                text: text.into(),
            })
            .collect();
        Section {
            position,
            kind,
            heading,
            paragraphs,
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        for (expected, para) in self.paragraphs.iter().enumerate() {
            if para.position != expected {
                return Err(CorpusError::Invalid(format!(
                    "section {}: paragraph position {} where {} expected",
                    self.position, para.position, expected
                )));
            }
        }
        if self.kind == SectionKind::Article
            && self.heading.as_deref().map_or(true, |h| h.trim().is_empty())
        {
            return Err(CorpusError::Invalid(format!(
                "section {}: article without heading",
                self.position
            )));
        }
        Ok(())
    }
}

/// Checks the ordering invariants shared by documents and drafts: positions
/// 0-based and gap-free, at most one header, every section individually valid.
pub fn validate_sections(sections: &[Section]) -> Result<(), CorpusError> {
    let mut headers = 0;
    for (expected, section) in sections.iter().enumerate() {
        if section.position != expected {
            return Err(CorpusError::Invalid(format!(
                "section position {} where {} expected",
                section.position, expected
            )));
        }
        if section.kind == SectionKind::Header {
            headers += 1;
        }
        section.validate()?;
    }
    if headers > 1 {
        return Err(CorpusError::Invalid(format!("{headers} header sections")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub celex: CelexId,
    pub title: String,
    pub year: u16,
    /// Lowercased descriptor strings.
    #[serde(rename = "eurovoc", default)]
    pub eurovoc_descriptors: BTreeSet<String>,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn validate(&self) -> Result<(), CorpusError> {
        validate_sections(&self.sections)
    }
}

/// A document under drafting: no Celex id yet, sections as written so far.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draft {
    #[serde(default)]
    pub title: String,
    #[serde(rename = "eurovoc", default)]
    pub eurovoc_descriptors: BTreeSet<String>,
    #[serde(default)]
    pub sections: Vec<Section>,
}

impl Draft {
    pub fn validate(&self) -> Result<(), CorpusError> {
        validate_sections(&self.sections)
    }
}

/// Lowercases and trims descriptor strings; empty strings are dropped.
pub fn normalize_descriptors<I, S>(descriptors: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    descriptors
        .into_iter()
        .map(|d| d.as_ref().trim().to_lowercase())
        .filter(|d| !d.is_empty())
        .collect()
}

/// A sentence-level retrieval unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub fragment_id: String,
    /// Owning act; `None` for fragments of a draft that has no identifier yet.
    pub celex: Option<CelexId>,
    pub section_position: usize,
    pub paragraph_position: usize,
    pub sentence_position: usize,
    pub text: String,
}

impl Fragment {
    /// Key that totally orders the fragments of one document.
    pub fn order_key(&self) -> (usize, usize, usize) {
        (
            self.section_position,
            self.paragraph_position,
            self.sentence_position,
        )
    }
}
