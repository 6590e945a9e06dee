#![allow(dead_code)]

use std::path::PathBuf;

use lexforge_core::corpus::{CanonicalAct, Draft};
use lexforge_core::definitions::build_definition_corpus;
use lexforge_core::{DefinitionElement, Document};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_documents() -> Vec<Document> {
    let mut paths: Vec<_> = std::fs::read_dir(fixtures_dir().join("acts"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).unwrap();
            CanonicalAct::from_json(&text).unwrap().into_document().unwrap()
        })
        .collect()
}

pub fn fixture_document(celex: &str) -> Document {
    fixture_documents()
        .into_iter()
        .find(|d| d.celex.as_str() == celex)
        .unwrap()
}

pub fn fixture_elements() -> Vec<DefinitionElement> {
    let (elements, report, warnings) = build_definition_corpus(&fixture_documents());
    assert!(warnings.is_empty(), "{warnings:?}");
    assert!(report.dangling.is_empty(), "{:?}", report.dangling);
    elements
}

pub fn fixture_draft() -> Draft {
    let text = std::fs::read_to_string(fixtures_dir().join("draft-32023R1184.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}
