#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use lexforge_core::corpus::{CanonicalAct, Draft};
use lexforge_core::definitions::build_definition_corpus;
use lexforge_core::{Document, MockGenerator};
use lexforge_service::{CorpusSnapshot, DraftingService, ServiceConfig};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn documents() -> Vec<Document> {
    let mut paths: Vec<_> = std::fs::read_dir(fixtures_dir().join("acts"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| CanonicalAct::from_json(&std::fs::read_to_string(p).unwrap()).unwrap().into_document().unwrap())
        .collect()
}

pub fn snapshot() -> CorpusSnapshot {
    let docs = documents();
    let (elements, _, _) = build_definition_corpus(&docs);
    CorpusSnapshot::new(elements, &docs)
}

pub fn draft() -> Draft {
    serde_json::from_str(&std::fs::read_to_string(fixtures_dir().join("draft-32023R1184.json")).unwrap()).unwrap()
}

pub fn service(dir: &Path, deterministic: bool) -> DraftingService {
    let mut config = ServiceConfig::new(dir);
    config.deterministic = deterministic;
    DraftingService::open(config, snapshot(), Arc::new(MockGenerator::new())).unwrap()
}
