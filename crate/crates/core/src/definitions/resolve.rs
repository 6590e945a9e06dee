use std::collections::{HashMap, HashSet};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::citation::{citation_to_celex, scan_citations};
use super::{CitationExpr, DefinitionElement, DefinitionKind};
use crate::corpus::{CelexId, Document};

static ARTICLE_NUMBER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^\s*article\s+(\d+)").unwrap());

/// Article number from a heading such as `Article 2 Definitions`.
pub fn article_number(heading: &str) -> Option<u32> {
    ARTICLE_NUMBER
        .captures(heading)
        .and_then(|c| c[1].parse().ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DanglingReason {
    MissingDocument,
    MissingArticle,
    MissingPoint,
    TermMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DanglingReference {
    pub element_id: String,
    /// `None` when the explanation holds no parseable citation.
    pub citation: Option<CitationExpr>,
    pub reason: DanglingReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub resolved: usize,
    pub dangling: Vec<DanglingReference>,
}

/// Lookup from (celex, article, point) and (celex, article, term) to element ids.
#[derive(Debug, Default)]
pub struct ResolutionIndex {
    documents: HashSet<CelexId>,
    by_point: HashMap<(CelexId, u32, String), Vec<String>>,
    by_article: HashMap<(CelexId, u32), Vec<(String, String)>>,
}

impl ResolutionIndex {
    pub fn from_elements(elements: &[DefinitionElement]) -> Self {
        let mut index = ResolutionIndex::default();
        for e in elements {
            let celex = e.source.celex.clone();
            index.documents.insert(celex.clone());
            let Some(article) = article_number(&e.source.article_heading) else {
                continue;
            };
            if let Some(label) = &e.source.point_label {
                index
                    .by_point
                    .entry((celex.clone(), article, label.clone()))
                    .or_default()
                    .push(e.id.clone());
            }
            index
                .by_article
                .entry((celex, article))
                .or_default()
                .push((e.term.clone(), e.id.clone()));
        }
        index
    }

    /// Registers corpus documents so a citation into an act without
    /// extracted definitions reports `MissingArticle` rather than
    /// `MissingDocument`.
    pub fn with_documents(mut self, documents: &[Document]) -> Self {
        self.documents
            .extend(documents.iter().map(|d| d.celex.clone()));
        self
    }

    fn lookup(&self, cite: &CitationExpr, term: &str) -> Result<Vec<String>, DanglingReason> {
        let celex = citation_to_celex(cite).map_err(|_| DanglingReason::MissingDocument)?;
        if !self.documents.contains(&celex) {
            return Err(DanglingReason::MissingDocument);
        }
        let Some(entries) = self.by_article.get(&(celex.clone(), cite.article)) else {
            return Err(DanglingReason::MissingArticle);
        };
        match cite.point {
            Some(point) => self
                .by_point
                .get(&(celex, cite.article, point.to_string()))
                .cloned()
                .ok_or(DanglingReason::MissingPoint),
            None => {
                let ids: Vec<String> = entries
                    .iter()
                    .filter(|(t, _)| t == term)
                    .map(|(_, id)| id.clone())
                    .collect();
                if ids.is_empty() {
                    Err(DanglingReason::TermMismatch)
                } else {
                    Ok(ids)
                }
            }
        }
    }
}

/// Fills the reference lists of dynamic elements with the ids of the
/// elements they cite. Only direct targets are stored.
pub fn resolve_citations(
    mut elements: Vec<DefinitionElement>,
    index: &ResolutionIndex,
) -> (Vec<DefinitionElement>, ResolutionReport) {
    let mut report = ResolutionReport::default();
    for element in elements.iter_mut() {
        if element.kind != DefinitionKind::Dynamic {
            continue;
        }
        let scanned = scan_citations(&element.explanation);
        if scanned.is_empty() {
            report.dangling.push(DanglingReference {
                element_id: element.id.clone(),
                citation: None,
                reason: DanglingReason::TermMismatch,
            });
            continue;
        }
        let mut references: Vec<String> = Vec::new();
        let mut failure = None;
        for cite in scanned {
            let outcome = if cite.unsupported_point {
                Err(DanglingReason::TermMismatch)
            } else {
                index.lookup(&cite.expr, &element.term)
            };
            match outcome {
                Ok(ids) => {
                    for id in ids {
                        if id != element.id && !references.contains(&id) {
                            references.push(id);
                        }
                    }
                }
                Err(reason) => {
                    failure.get_or_insert((cite.expr, reason));
                }
            }
        }
        element.references = references;
        match failure {
            None => report.resolved += 1,
            Some((citation, reason)) => report.dangling.push(DanglingReference {
                element_id: element.id.clone(),
                citation: Some(citation),
                reason,
            }),
        }
    }
    (elements, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Section, SectionKind};
    use crate::definitions::extract_definitions;

    fn extract(celex: &str, heading: &str, paras: &[&str]) -> Vec<DefinitionElement> {
        let section = Section::new(3, SectionKind::Article, Some(heading.into()), paras.iter().copied());
        extract_definitions(&section, &CelexId::parse(celex).unwrap()).elements
    }

    #[test]
    fn heading_numbers() {
        assert_eq!(article_number("Article 2 Definitions"), Some(2));
        assert_eq!(article_number("ARTICLE 17"), Some(17));
        assert_eq!(article_number("Definitions"), None);
    }

    #[test]
    fn no_dynamic_elements() {
        let elements = extract("32019L0944", "Article 2", &["(1) 'a' means b;"]);
        let index = ResolutionIndex::from_elements(&elements);
        let (out, report) = resolve_citations(elements.clone(), &index);
        assert_eq!(out, elements);
        assert_eq!(report, ResolutionReport::default());
    }

    #[test]
    fn missing_document() {
        let elements = extract(
            "32019R0943",
            "Article 2 Definitions",
            &["(1) 'x' means x as defined in point (3) of Article 2 of Directive (EU) 2018/2001;"],
        );
        let index = ResolutionIndex::from_elements(&elements);
        let (out, report) = resolve_citations(elements, &index);
        assert_eq!(report.resolved, 0);
        assert_eq!(report.dangling[0].reason, DanglingReason::MissingDocument);
        assert!(out[0].references.is_empty());
    }

    #[test]
    fn missing_article_point_and_term() {
        let mut elements = extract("32019L0944", "Article 2 Definitions", &["(1) 'grid' means a network;"]);
        elements.extend(extract(
            "32019R0943",
            "Article 2 Definitions",
            &[
                "(1) 'a' means a as defined in Article 9 of Directive (EU) 2019/944;",
                "(2) 'b' means b as defined in point (7) of Article 2 of Directive (EU) 2019/944;",
                "(3) 'c' means c as defined in Article 2 of Directive (EU) 2019/944;",
                "(4) 'grid' means grid as defined in Article 2 of Directive (EU) 2019/944;",
                "(5) 'd' means d as defined in points (a) and (b) of Article 2 of Directive (EU) 2019/944;",
                "(6) 'e' means as defined in the relevant act;",
            ],
        ));
        let index = ResolutionIndex::from_elements(&elements);
        let (out, report) = resolve_citations(elements, &index);
        let reasons: Vec<_> = report.dangling.iter().map(|d| d.reason).collect();
        use DanglingReason::*;
        assert_eq!(reasons, [MissingArticle, MissingPoint, TermMismatch, TermMismatch, TermMismatch]);
        assert_eq!(report.resolved, 1);
        assert!(report.dangling[4].citation.is_none());
        let grid = out.iter().find(|e| e.term == "grid" && e.kind == DefinitionKind::Dynamic).unwrap();
        assert_eq!(grid.references, [out[0].id.clone()]);
    }

    #[test]
    fn registered_document_without_definitions_is_missing_article() {
        let elements = extract(
            "32019R0943",
            "Article 2",
            &["(1) 'x' means x as defined in Article 2 of Directive (EU) 2018/2001;"],
        );
        let doc = Document {
            celex: CelexId::parse("32018L2001").unwrap(),
            title: String::new(),
            year: 2018,
            eurovoc_descriptors: Default::default(),
            sections: vec![],
        };
        let index = ResolutionIndex::from_elements(&elements).with_documents(&[doc]);
        let (_, report) = resolve_citations(elements, &index);
        assert_eq!(report.dangling[0].reason, DanglingReason::MissingArticle);
    }
}
