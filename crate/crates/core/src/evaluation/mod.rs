//! Definition quality and corpus statistics.

mod bleu;
mod stats;

use thiserror::Error;

pub use bleu::{bleu, evaluate_batch, BatchReport, BleuReport, EvalPair, PairScore, MAX_ORDER};
pub use stats::{corpus_stats, histogram_csv, CorpusStats, HistogramBucket, HISTOGRAM_WIDTH};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvaluationError {
    #[error("reference has no tokens")]
    EmptyReference,
    #[error("n-gram order {0} outside 1..=4")]
    InvalidOrder(usize),
}

/// Lowercases, splits on whitespace and strips leading and trailing
/// non-alphanumeric characters from each token. Empty tokens are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_rules() {
        assert_eq!(tokenize("'bidding zone' means..."), ["bidding", "zone", "means"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("A  B"), ["a", "b"]);
        assert_eq!(tokenize("(EU) 2019/944; --"), ["eu", "2019/944"]);
        assert_eq!(tokenize("\u{2018}renewable energy\u{2019}"), ["renewable", "energy"]);
    }
}
