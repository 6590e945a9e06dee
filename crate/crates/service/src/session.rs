use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use lexforge_core::{RankedDefinition, Section};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Cites an existing definition of another act.
    Cited,
    Generated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptedDefinition {
    pub term: String,
    pub text: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftSession {
    pub session_id: String,
    pub title: String,
    #[serde(rename = "eurovoc", default)]
    pub eurovoc_descriptors: BTreeSet<String>,
    pub sections: Vec<Section>,
    #[serde(default)]
    pub accepted_definitions: Vec<AcceptedDefinition>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LookupCase {
    NotFound,
    Single,
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LookupOutcome {
    pub case: LookupCase,
    pub candidates: Vec<RankedDefinition>,
}

impl LookupOutcome {
    pub fn from_candidates(candidates: Vec<RankedDefinition>) -> Self {
        let case = match candidates.len() {
            0 => LookupCase::NotFound,
            1 => LookupCase::Single,
            _ => LookupCase::Multiple,
        };
        LookupOutcome { case, candidates }
    }
}
