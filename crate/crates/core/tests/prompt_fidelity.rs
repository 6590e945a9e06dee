//! Rendered prompts differ from the stored template only where the term and
//! the sentences are substituted.

use lexforge_core::corpus::Fragment;
use lexforge_core::generation::build_prompt;
use lexforge_core::ScoredFragment;
use proptest::prelude::*;

fn stored_template() -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/src/generation/prompt_template.txt");
    std::fs::read_to_string(path).unwrap()
}

fn scored(i: usize, text: String) -> ScoredFragment {
    ScoredFragment {
        fragment: Fragment {
            fragment_id: format!("draft:0:{i}:0"),
            celex: None,
            section_position: 0,
            paragraph_position: i,
            sentence_position: 0,
            text,
        },
        phrase_count: 1,
    }
}

/// Walks the template, consuming literal text verbatim and each placeholder
/// by its expected substitution. Returns the byte ranges that differ.
fn substitution_sites(template: &str, rendered: &str, term: &str, sentences: &str) -> Result<usize, String> {
    let json_term = serde_json::to_string(term).unwrap();
    let json_term = &json_term[1..json_term.len() - 1];
    let mut t = template;
    let mut r = rendered;
    let mut sites = 0;
    loop {
        let next = [t.find("{term}"), t.find("{sentences}")].into_iter().flatten().min();
        let Some(at) = next else {
            return if t == r { Ok(sites) } else { Err(format!("tail differs: {t:?} vs {r:?}")) };
        };
        let literal = &t[..at];
        if !r.starts_with(literal) {
            return Err(format!("literal {literal:?} not reproduced"));
        }
        r = &r[literal.len()..];
        let (placeholder, value) = if t[at..].starts_with("{term}") {
            let quoted = literal.ends_with('"');
            ("{term}", if quoted { json_term } else { term })
        } else {
            ("{sentences}", sentences)
        };
        if !r.starts_with(value) {
            return Err(format!("{placeholder} not substituted by {value:?}"));
        }
        r = &r[value.len()..];
        t = &t[at + placeholder.len()..];
        sites += 1;
    }
}

#[test]
fn fuel_producer_prompt() {
    let frags = vec![scored(0, "A fuel producer may count electricity.".into())];
    let spec = build_prompt("fuel producer", &frags).unwrap();
    let sites = substitution_sites(&stored_template(), &spec.rendered, "fuel producer", &frags[0].fragment.text);
    assert_eq!(sites, Ok(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn only_substitution_sites_change(
        term in "[a-zA-Z'\" -]{1,30}",
        texts in prop::collection::vec("[A-Za-z0-9 ,.;'()\"-]{1,120}", 1..6),
    ) {
        let frags: Vec<ScoredFragment> = texts.iter().cloned().enumerate().map(|(i, t)| scored(i, t)).collect();
        let spec = build_prompt(&term, &frags).unwrap();
        let sentences = texts.join("\n");
        prop_assert_eq!(substitution_sites(&stored_template(), &spec.rendered, &term, &sentences), Ok(3));
    }
}
