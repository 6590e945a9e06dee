use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{normalize_term, RetrievalError};
use crate::corpus::{fragment_sections, Fragment, Section};
use crate::evaluation::tokenize;

/// Default number of fragments handed to the generator.
pub const DEFAULT_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub fragment_id: String,
    pub term_frequency: usize,
}

/// Token to postings map over a fixed set of fragments.
#[derive(Debug, Clone, Default)]
pub struct InvertedIndex {
    postings: BTreeMap<String, Vec<Posting>>,
    fragments: Vec<Fragment>,
    tokens: Vec<Vec<String>>,
    by_id: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredFragment {
    pub fragment: Fragment,
    pub phrase_count: usize,
}

/// Indexes fragments, keeping their input order as document order.
pub fn build_index(fragments: Vec<Fragment>) -> Result<InvertedIndex, RetrievalError> {
    let mut by_id = HashMap::with_capacity(fragments.len());
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    let mut tokens = Vec::with_capacity(fragments.len());
    for (i, fragment) in fragments.iter().enumerate() {
        if by_id.insert(fragment.fragment_id.clone(), i).is_some() {
            return Err(RetrievalError::DuplicateFragmentId(fragment.fragment_id.clone()));
        }
        let toks = tokenize(&fragment.text);
        let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &toks {
            *tf.entry(t.as_str()).or_insert(0) += 1;
        }
        for (token, term_frequency) in tf {
            postings.entry(token.to_string()).or_default().push(Posting {
                fragment_id: fragment.fragment_id.clone(),
                term_frequency,
            });
        }
        tokens.push(toks);
    }
    for list in postings.values_mut() {
        list.sort_by(|a, b| a.fragment_id.cmp(&b.fragment_id));
    }
    Ok(InvertedIndex {
        postings,
        fragments,
        tokens,
        by_id,
    })
}

/// Non-overlapping occurrences of `phrase` in `tokens`, matched token-wise.
pub fn phrase_count(tokens: &[String], phrase: &[String]) -> usize {
    if phrase.is_empty() || phrase.len() > tokens.len() {
        return 0;
    }
    let mut count = 0;
    let mut i = 0;
    while i + phrase.len() <= tokens.len() {
        if tokens[i..i + phrase.len()] == *phrase {
            count += 1;
            i += phrase.len();
        } else {
            i += 1;
        }
    }
    count
}

impl InvertedIndex {
    pub fn postings(&self, token: &str) -> &[Posting] {
        self.postings.get(token).map_or(&[], Vec::as_slice)
    }

    pub fn fragment(&self, id: &str) -> Option<&Fragment> {
        self.by_id.get(id).map(|&i| &self.fragments[i])
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn vocabulary_len(&self) -> usize {
        self.postings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Fragments containing the whole phrase, ranked by phrase count (desc)
    /// then document order, truncated to `k`.
    pub fn retrieve(&self, term: &str, k: usize) -> Result<Vec<ScoredFragment>, RetrievalError> {
        if k == 0 {
            return Err(RetrievalError::InvalidK);
        }
        let phrase = tokenize(&normalize_term(term));
        let Some((first, rest)) = phrase.split_first() else {
            return Ok(Vec::new());
        };
        let mut candidates: HashSet<&str> = self
            .postings(first)
            .iter()
            .map(|p| p.fragment_id.as_str())
            .collect();
        for token in rest {
            let ids: HashSet<&str> = self
                .postings(token)
                .iter()
                .map(|p| p.fragment_id.as_str())
                .collect();
            candidates.retain(|id| ids.contains(id));
        }
        let mut scored: Vec<(usize, usize)> = candidates
            .into_iter()
            .map(|id| self.by_id[id])
            .map(|i| (i, phrase_count(&self.tokens[i], &phrase)))
            .filter(|&(_, count)| count > 0)
            .collect();
        scored.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.truncate(k);
        Ok(scored
            .into_iter()
            .map(|(i, phrase_count)| ScoredFragment {
                fragment: self.fragments[i].clone(),
                phrase_count,
            })
            .collect())
    }
}

/// Fragments the drafted sections and retrieves the top `k` for `term`.
pub fn retrieve_fragments(
    term: &str,
    draft_sections: &[Section],
    k: usize,
) -> Result<Vec<ScoredFragment>, RetrievalError> {
    build_index(fragment_sections(draft_sections, None))?.retrieve(term, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frag(id: &str, text: &str) -> Fragment {
        Fragment {
            fragment_id: id.into(),
            celex: None,
            section_position: 0,
            paragraph_position: 0,
            sentence_position: 0,
            text: text.into(),
        }
    }

    fn ids(postings: &[Posting]) -> Vec<(&str, usize)> {
        postings.iter().map(|p| (p.fragment_id.as_str(), p.term_frequency)).collect()
    }

    #[test]
    fn builds_postings() {
        let index = build_index(vec![frag("f1", "a b"), frag("f2", "b c")]).unwrap();
        assert_eq!(ids(index.postings("a")), [("f1", 1)]);
        assert_eq!(ids(index.postings("b")), [("f1", 1), ("f2", 1)]);
        assert_eq!(ids(index.postings("c")), [("f2", 1)]);
        assert_eq!(index.vocabulary_len(), 3);
    }

    #[test]
    fn empty_index() {
        let index = build_index(Vec::new()).unwrap();
        assert!(index.is_empty());
        assert!(index.retrieve("x", 3).unwrap().is_empty());
    }

    #[test]
    fn repeated_token_frequency() {
        let index = build_index(vec![frag("f1", "b b")]).unwrap();
        assert_eq!(ids(index.postings("b")), [("f1", 2)]);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = build_index(vec![frag("f1", "a"), frag("f1", "b")]).unwrap_err();
        assert_eq!(err, RetrievalError::DuplicateFragmentId("f1".into()));
    }

    #[test]
    fn phrase_counting_is_non_overlapping() {
        let t = tokenize("a a a");
        assert_eq!(phrase_count(&t, &tokenize("a a")), 1);
        assert_eq!(phrase_count(&t, &tokenize("a")), 3);
        assert_eq!(phrase_count(&tokenize("ozone zone"), &tokenize("zone")), 1);
    }

    #[test]
    fn zero_k_rejected() {
        let index = build_index(vec![frag("f1", "a")]).unwrap();
        assert_eq!(index.retrieve("a", 0), Err(RetrievalError::InvalidK));
    }
}
