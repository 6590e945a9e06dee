//! BLEU checked against a brute-force counter written independently of the
//! library (plain loops, no maps), plus closed-form hand values.

use lexforge_core::evaluation::{bleu, evaluate_batch, EvalPair};
use proptest::prelude::*;

fn words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn occurrences(tokens: &[String], gram: &[String]) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i + gram.len() <= tokens.len() {
        if &tokens[i..i + gram.len()] == gram {
            count += 1;
        }
        i += 1;
    }
    count
}

/// Cumulative BLEU-1..max_n, add-one smoothing for zero matches at n >= 2.
fn oracle(candidate: &str, reference: &str, max_n: usize) -> Vec<f64> {
    let c = words(candidate);
    let r = words(reference);
    if c.is_empty() {
        return vec![0.0; max_n];
    }
    let bp = if c.len() >= r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / c.len() as f64).exp()
    };
    let mut precisions = Vec::new();
    for n in 1..=max_n {
        let total = if c.len() >= n { c.len() - n + 1 } else { 0 };
        let mut matched = 0;
        // Each distinct candidate gram is counted once, at its first position.
        for i in 0..total {
            let gram = &c[i..i + n];
            let first = (0..i).all(|j| &c[j..j + n] != gram);
            if first {
                matched += occurrences(&c, gram).min(occurrences(&r, gram));
            }
        }
        let p = if n >= 2 && matched == 0 {
            1.0 / (total as f64 + 1.0)
        } else if total == 0 {
            0.0
        } else {
            matched as f64 / total as f64
        };
        precisions.push(p);
    }
    (1..=max_n)
        .map(|n| {
            let product: f64 = precisions[..n].iter().product();
            if product == 0.0 {
                0.0
            } else {
                bp * product.powf(1.0 / n as f64)
            }
        })
        .collect()
}

const PAIRS: [(&str, &str); 6] = [
    ("the cat sat", "the cat sat on the mat"),
    ("the the the", "the cat"),
    (
        "'bidding zone' means the largest geographical area in which market participants exchange energy",
        "'bidding zone' means the largest geographical area within which market participants are able to exchange energy without capacity allocation",
    ),
    (
        "a fuel producer is an undertaking that produces renewable liquid or gaseous transport fuels",
        "'fuel producer' means an economic operator producing renewable liquid and gaseous transport fuels of non-biological origin",
    ),
    ("energy storage means deferring use", "energy storage means deferring the final use of electricity"),
    ("completely unrelated words here", "the reference sentence"),
];

#[test]
fn hand_values() {
    let e_inv = (-1f64).exp();
    let r = bleu("the cat sat", "the cat sat on the mat", 4).unwrap();
    for n in 1..=4 {
        assert!((r.bleu[&n] - e_inv).abs() < 1e-12, "n={n}");
    }

    let r = bleu("the the the", "the cat", 4).unwrap();
    assert!((r.precisions[&1] - 1.0 / 3.0).abs() < 1e-12);
    assert!((r.bleu[&1] - 1.0 / 3.0).abs() < 1e-12);
    assert!((r.bleu[&2] - 1.0 / 3.0).abs() < 1e-12);
    assert!((r.bleu[&3] - (1.0f64 / 18.0).cbrt()).abs() < 1e-12);
}

#[test]
fn matches_oracle_within_tolerance() {
    for (cand, refr) in PAIRS {
        for max_n in 1..=4 {
            let got = bleu(cand, refr, max_n).unwrap();
            let want = oracle(cand, refr, max_n);
            for n in 1..=max_n {
                assert!(
                    (got.bleu[&n] - want[n - 1]).abs() < 1e-9,
                    "{cand:?} n={n}: {} vs {}",
                    got.bleu[&n],
                    want[n - 1]
                );
            }
        }
    }
}

#[test]
fn identity_is_exactly_one() {
    for (_, refr) in PAIRS {
        let r = bleu(refr, refr, 4).unwrap();
        for n in 1..=4 {
            assert_eq!(r.bleu[&n], 1.0);
        }
    }
}

#[test]
fn batch_is_macro_average_of_oracle() {
    let pairs: Vec<EvalPair> = PAIRS
        .iter()
        .map(|(g, r)| EvalPair {
            term: String::new(),
            generated: g.to_string(),
            reference: r.to_string(),
            celex: None,
        })
        .collect();
    let report = evaluate_batch(&pairs);
    assert_eq!(report.pairs_scored, PAIRS.len());
    let means = report.bleu.unwrap();
    for n in 1..=4 {
        let want: f64 = PAIRS.iter().map(|(g, r)| oracle(g, r, 4)[n - 1]).sum::<f64>() / PAIRS.len() as f64;
        assert!((means[&n] - want).abs() < 1e-9);
    }
}

#[test]
fn asymmetric_in_general() {
    let (a, b) = PAIRS[0];
    assert_ne!(bleu(a, b, 4).unwrap().bleu[&1], bleu(b, a, 4).unwrap().bleu[&1]);
}

/// Smoothing can lift a higher-order score above a lower one; this pins the
/// known counterexample so a change in smoothing policy is noticed.
#[test]
fn smoothed_scores_are_not_always_monotone() {
    let r = bleu("the the the", "the cat", 3).unwrap();
    assert!(r.bleu[&3] > r.bleu[&1]);
}

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "the", "zone", "means"]), 0..14)
        .prop_map(|w| w.join(" "))
}

proptest! {
    #[test]
    fn oracle_equivalence(cand in sentence(), refr in sentence()) {
        prop_assume!(!words(&refr).is_empty());
        let got = bleu(&cand, &refr, 4).unwrap();
        let want = oracle(&cand, &refr, 4);
        for n in 1..=4 {
            prop_assert!((got.bleu[&n] - want[n - 1]).abs() < 1e-9);
        }
    }

    #[test]
    fn brevity_penalty_is_one_for_long_candidates(cand in sentence(), refr in sentence()) {
        prop_assume!(!words(&refr).is_empty());
        let r = bleu(&cand, &refr, 4).unwrap();
        if r.candidate_length >= r.reference_length {
            prop_assert_eq!(r.brevity_penalty, 1.0);
        }
        prop_assert!(r.bleu.values().all(|b| (0.0..=1.0).contains(b)));
    }

    #[test]
    fn appending_a_foreign_token_never_adds_matches(cand in sentence(), refr in sentence()) {
        prop_assume!(!words(&refr).is_empty());
        let before = bleu(&cand, &refr, 4).unwrap();
        let after = bleu(&format!("{cand} xyzzy"), &refr, 4).unwrap();
        for n in 1..=4 {
            prop_assert!(after.matches[&n] <= before.matches[&n]);
        }
    }

    /// Without smoothing in play and with non-increasing precisions, the
    /// cumulative scores are non-increasing.
    #[test]
    fn monotone_when_unsmoothed(cand in sentence(), refr in sentence()) {
        prop_assume!(!words(&refr).is_empty());
        let r = bleu(&cand, &refr, 4).unwrap();
        let unsmoothed = (1..=4).all(|n| r.matches[&n] > 0);
        let decreasing = (2..=4).all(|n| r.precisions[&n] <= r.precisions[&(n - 1)]);
        if unsmoothed && decreasing {
            for n in 2..=4 {
                prop_assert!(r.bleu[&n] <= r.bleu[&(n - 1)] + 1e-12);
            }
        }
    }
}
