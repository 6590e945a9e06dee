use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tokenize;
use crate::corpus::Document;
use crate::definitions::{locate_definitions_article, DefinitionElement};

pub const HISTOGRAM_WIDTH: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBucket {
    /// Inclusive lower bound in words.
    pub start: usize,
    /// Inclusive upper bound in words.
    pub end: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub documents_total: usize,
    pub documents_html: usize,
    pub documents_with_definitions: usize,
    pub elements_total: usize,
    pub terms_total: usize,
    pub single_element_terms: usize,
    pub multi_element_terms: usize,
    pub multi_element_elements: usize,
    /// Absent for an empty definition corpus.
    pub definition_length_mean: Option<f64>,
    pub definition_length_stddev: Option<f64>,
    pub histogram: Vec<HistogramBucket>,
}

/// Counts over the document and definition corpora.
///
/// `non_html_skipped` is the number of crawled acts that were reported as
/// non-HTML and therefore never entered `documents`. Definition lengths are
/// token counts of explanations; the standard deviation is the population one.
pub fn corpus_stats(
    documents: &[Document],
    elements: &[DefinitionElement],
    non_html_skipped: usize,
) -> CorpusStats {
    let mut per_term: BTreeMap<&str, usize> = BTreeMap::new();
    for e in elements {
        *per_term.entry(e.term.as_str()).or_insert(0) += 1;
    }
    let single_element_terms = per_term.values().filter(|&&n| n == 1).count();
    let multi_element_terms = per_term.len() - single_element_terms;
    let multi_element_elements = per_term.values().filter(|&&n| n > 1).sum();

    let lengths: Vec<usize> = elements
        .iter()
        .map(|e| tokenize(&e.explanation).len())
        .collect();
    let (mean, stddev) = if lengths.is_empty() {
        (None, None)
    } else {
        let n = lengths.len() as f64;
        let mean = lengths.iter().sum::<usize>() as f64 / n;
        let var = lengths
            .iter()
            .map(|&l| (l as f64 - mean).powi(2))
            .sum::<f64>()
            / n;
        (Some(mean), Some(var.sqrt()))
    };

    let mut histogram = Vec::new();
    if let Some(&max) = lengths.iter().max() {
        let buckets = max / HISTOGRAM_WIDTH + 1;
        histogram = (0..buckets)
            .map(|b| HistogramBucket {
                start: b * HISTOGRAM_WIDTH,
                end: b * HISTOGRAM_WIDTH + HISTOGRAM_WIDTH - 1,
                count: 0,
            })
            .collect();
        for l in &lengths {
            histogram[l / HISTOGRAM_WIDTH].count += 1;
        }
    }

    CorpusStats {
        documents_total: documents.len() + non_html_skipped,
        documents_html: documents.len(),
        documents_with_definitions: documents
            .iter()
            .filter(|d| locate_definitions_article(d).is_some())
            .count(),
        elements_total: elements.len(),
        terms_total: per_term.len(),
        single_element_terms,
        multi_element_terms,
        multi_element_elements,
        definition_length_mean: mean,
        definition_length_stddev: stddev,
        histogram,
    }
}

/// `start,end,count` rows with a header line.
pub fn histogram_csv(stats: &CorpusStats) -> String {
    let mut out = String::from("start,end,count\n");
    for b in &stats.histogram {
        out.push_str(&format!("{},{},{}\n", b.start, b.end, b.count));
    }
    out
}
