use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::normalize_term;
use crate::corpus::{CelexId, Document};
use crate::definitions::{DefinitionElement, DefinitionKind};

/// A looked-up element together with the static elements it cites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionMatch {
    pub element: DefinitionElement,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<DefinitionElement>,
}

/// Immutable in-memory definition corpus keyed by normalized term.
#[derive(Debug, Clone, Default)]
pub struct DefinitionStore {
    elements: Vec<DefinitionElement>,
    by_term: HashMap<String, Vec<usize>>,
    by_id: HashMap<String, usize>,
}

impl DefinitionStore {
    pub fn new(elements: Vec<DefinitionElement>) -> Self {
        let mut by_term: HashMap<String, Vec<usize>> = HashMap::new();
        let mut by_id = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            by_term.entry(normalize_term(&e.term)).or_default().push(i);
            by_id.insert(e.id.clone(), i);
        }
        DefinitionStore {
            elements,
            by_term,
            by_id,
        }
    }

    pub fn elements(&self) -> &[DefinitionElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&DefinitionElement> {
        self.by_id.get(id).map(|&i| &self.elements[i])
    }

    /// Static elements reachable from `element` through references, following
    /// dynamic targets until a static one is found. Cycles are cut.
    pub fn static_targets(&self, element: &DefinitionElement) -> Vec<DefinitionElement> {
        let mut out = Vec::new();
        let mut visited = BTreeSet::new();
        let mut stack: Vec<&str> = element.references.iter().rev().map(String::as_str).collect();
        while let Some(id) = stack.pop() {
            if !visited.insert(id) {
                continue;
            }
            let Some(target) = self.get(id) else { continue };
            match target.kind {
                DefinitionKind::Static => out.push(target.clone()),
                DefinitionKind::Dynamic => {
                    stack.extend(target.references.iter().rev().map(String::as_str))
                }
            }
        }
        out
    }

    /// Every element whose term normalizes to the same key as `term`, in
    /// store order. Dynamic elements carry their static targets.
    pub fn lookup_definitions(&self, term: &str) -> Vec<DefinitionMatch> {
        let key = normalize_term(term);
        self.by_term
            .get(&key)
            .map(|idxs| {
                idxs.iter()
                    .map(|&i| {
                        let element = self.elements[i].clone();
                        let targets = match element.kind {
                            DefinitionKind::Static => Vec::new(),
                            DefinitionKind::Dynamic => self.static_targets(&element),
                        };
                        DefinitionMatch { element, targets }
                    })
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Descriptors and year of each corpus document.
#[derive(Debug, Clone, Default)]
pub struct DocumentMeta {
    entries: HashMap<CelexId, (BTreeSet<String>, u16)>,
}

impl DocumentMeta {
    pub fn from_documents(documents: &[Document]) -> Self {
        let entries = documents
            .iter()
            .map(|d| (d.celex.clone(), (d.eurovoc_descriptors.clone(), d.year)))
            .collect();
        DocumentMeta { entries }
    }

    pub fn insert(&mut self, celex: CelexId, descriptors: BTreeSet<String>, year: u16) {
        self.entries.insert(celex, (descriptors, year));
    }

    pub fn descriptors(&self, celex: &CelexId) -> Option<&BTreeSet<String>> {
        self.entries.get(celex).map(|(d, _)| d)
    }

    /// Document year, or the Celex year for unknown acts.
    pub fn year(&self, celex: &CelexId) -> u16 {
        self.entries.get(celex).map_or_else(|| celex.year(), |(_, y)| *y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDefinition {
    pub element: DefinitionElement,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<DefinitionElement>,
    pub descriptor_overlap: usize,
    pub descriptor_union: usize,
    /// overlap / union, or 0 when the union is empty.
    pub jaccard: f64,
    pub source_year: u16,
}

fn compare(a: &RankedDefinition, b: &RankedDefinition) -> Ordering {
    // jaccard compared exactly as a rational: a.o / a.u vs b.o / b.u
    let jaccard = |r: &RankedDefinition| (r.descriptor_overlap, r.descriptor_union.max(1));
    let (ao, au) = jaccard(a);
    let (bo, bu) = jaccard(b);
    b.descriptor_overlap
        .cmp(&a.descriptor_overlap)
        .then_with(|| (bo * au).cmp(&(ao * bu)))
        .then_with(|| b.source_year.cmp(&a.source_year))
        .then_with(|| a.element.source.celex.cmp(&b.element.source.celex))
        .then_with(|| a.element.id.cmp(&b.element.id))
}

/// Orders candidates by descriptor overlap with the draft, then Jaccard
/// similarity, then recency, then Celex id (element id last, so the order is
/// total).
pub fn rank_candidates(
    candidates: Vec<DefinitionMatch>,
    draft_descriptors: &BTreeSet<String>,
    meta: &DocumentMeta,
) -> Vec<RankedDefinition> {
    let draft: BTreeSet<String> = draft_descriptors
        .iter()
        .map(|d| d.trim().to_lowercase())
        .collect();
    let empty = BTreeSet::new();
    let mut ranked: Vec<RankedDefinition> = candidates
        .into_iter()
        .map(|m| {
            let celex = &m.element.source.celex;
            let descriptors = meta.descriptors(celex).unwrap_or(&empty);
            let overlap = draft.intersection(descriptors).count();
            let union = draft.union(descriptors).count();
            RankedDefinition {
                source_year: meta.year(celex),
                jaccard: if union == 0 { 0.0 } else { overlap as f64 / union as f64 },
                descriptor_overlap: overlap,
                descriptor_union: union,
                targets: m.targets,
                element: m.element,
            }
        })
        .collect();
    ranked.sort_by(compare);
    ranked
}
