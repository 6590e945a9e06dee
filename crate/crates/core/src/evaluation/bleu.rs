use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{tokenize, EvaluationError};

pub const MAX_ORDER: usize = 4;

/// Sentence-level cumulative BLEU for orders 1..=max_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// Cumulative score per order.
    pub bleu: BTreeMap<usize, f64>,
    /// Modified precision per order (after smoothing).
    pub precisions: BTreeMap<usize, f64>,
    /// Clipped n-gram matches per order, before smoothing.
    pub matches: BTreeMap<usize, usize>,
    /// Candidate n-gram count per order.
    pub totals: BTreeMap<usize, usize>,
    pub brevity_penalty: f64,
    pub candidate_length: usize,
    pub reference_length: usize,
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Scores `candidate` against a single `reference`.
///
/// Precisions are clipped by reference counts. For orders >= 2 a zero match
/// count is smoothed to `1 / (total + 1)`; order 1 is never smoothed. The
/// brevity penalty is `min(1, exp(1 - r/c))`.
pub fn bleu(candidate: &str, reference: &str, max_n: usize) -> Result<BleuReport, EvaluationError> {
    if !(1..=MAX_ORDER).contains(&max_n) {
        return Err(EvaluationError::InvalidOrder(max_n));
    }
    let cand = tokenize(candidate);
    let refr = tokenize(reference);
    if refr.is_empty() {
        return Err(EvaluationError::EmptyReference);
    }
    let (c, r) = (cand.len(), refr.len());
    let brevity_penalty = if c == 0 {
        0.0
    } else if c >= r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    };

    let mut precisions = BTreeMap::new();
    let mut matches = BTreeMap::new();
    let mut totals = BTreeMap::new();
    for n in 1..=max_n {
        let cand_counts = ngram_counts(&cand, n);
        let ref_counts = ngram_counts(&refr, n);
        let total = c.saturating_sub(n - 1);
        let matched: usize = cand_counts
            .iter()
            .map(|(gram, &count)| count.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
        let p = if n >= 2 && matched == 0 {
            1.0 / (total as f64 + 1.0)
        } else if total == 0 {
            0.0
        } else {
            matched as f64 / total as f64
        };
        precisions.insert(n, p);
        matches.insert(n, matched);
        totals.insert(n, total);
    }

    let mut scores = BTreeMap::new();
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let p = precisions[&n];
        log_sum += if p > 0.0 { p.ln() } else { f64::NEG_INFINITY };
        let score = if log_sum.is_finite() {
            brevity_penalty * (log_sum / n as f64).exp()
        } else {
            0.0
        };
        scores.insert(n, score);
    }

    Ok(BleuReport {
        bleu: scores,
        precisions,
        matches,
        totals,
        brevity_penalty,
        candidate_length: c,
        reference_length: r,
    })
}

/// One generated/ground-truth pair, as stored in `pairs.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    #[serde(default)]
    pub term: String,
    pub generated: String,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub celex: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub term: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<BleuReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Macro-averaged BLEU over a batch. Model-based scores are not computed
/// here; the optional fields let externally computed values be merged in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub pairs_scored: usize,
    pub pairs_skipped: usize,
    /// Absent when no pair could be scored.
    pub bleu: Option<BTreeMap<usize, f64>>,
    pub per_pair: Vec<PairScore>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bertscore_f1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bleurt: Option<f64>,
}

pub fn evaluate_batch(pairs: &[EvalPair]) -> BatchReport {
    let per_pair: Vec<PairScore> = pairs
        .iter()
        .map(|pair| match bleu(&pair.generated, &pair.reference, MAX_ORDER) {
            Ok(report) => PairScore {
                term: pair.term.clone(),
                report: Some(report),
                error: None,
            },
            Err(e) => PairScore {
                term: pair.term.clone(),
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let scored: Vec<&BleuReport> = per_pair.iter().filter_map(|p| p.report.as_ref()).collect();
    let bleu = (!scored.is_empty()).then(|| {
        (1..=MAX_ORDER)
            .map(|n| {
                let sum: f64 = scored.iter().map(|r| r.bleu[&n]).sum();
                (n, sum / scored.len() as f64)
            })
            .collect()
    });
    BatchReport {
        pairs_scored: scored.len(),
        pairs_skipped: pairs.len() - scored.len(),
        bleu,
        per_pair,
        bertscore_f1: None,
        bleurt: None,
    }
}
