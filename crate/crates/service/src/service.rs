use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, TimeDelta, Utc};
use lexforge_core::corpus::{fragment_sections, validate_sections};
use lexforge_core::generation::{
    build_prompt, draft_definitions_article, fit_to_context, generate_definition, GenParams, Generator,
};
use lexforge_core::retrieval::{build_index, normalize_term, rank_candidates, DocumentMeta, DEFAULT_K};
use lexforge_core::{DefinitionElement, DefinitionStore, Document, GenerationResult, InvertedIndex, Section};

use crate::session::{AcceptedDefinition, DraftSession, LookupOutcome, Provenance};
use crate::store::SessionLog;
use crate::ServiceError;

pub const DATA_DIR_ENV: &str = "LEXFORGE_DATA_DIR";

/// Definition corpus and per-act metadata shared by all sessions.
#[derive(Debug, Default)]
pub struct CorpusSnapshot {
    pub definitions: DefinitionStore,
    pub meta: DocumentMeta,
}

impl CorpusSnapshot {
    pub fn new(elements: Vec<DefinitionElement>, documents: &[Document]) -> Self {
        CorpusSnapshot {
            definitions: DefinitionStore::new(elements),
            meta: DocumentMeta::from_documents(documents),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub params: GenParams,
    /// Sequential session ids and a logical clock, so identical request
    /// sequences give identical responses.
    pub deterministic: bool,
    /// Number given to the exported *Definitions* article.
    pub article_number: u32,
}

impl ServiceConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            data_dir: data_dir.into(),
            params: GenParams::default(),
            deterministic: false,
            article_number: 2,
        }
    }

    /// Data directory from `LEXFORGE_DATA_DIR`, else `./lexforge-data`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(DATA_DIR_ENV).map_or_else(|| PathBuf::from("lexforge-data"), PathBuf::from);
        ServiceConfig::new(dir)
    }
}

struct Entry {
    session: DraftSession,
    index: Arc<InvertedIndex>,
}

fn index_sections(sections: &[Section]) -> Result<Arc<InvertedIndex>, ServiceError> {
    Ok(Arc::new(build_index(fragment_sections(sections, None))?))
}

pub struct DraftingService {
    config: ServiceConfig,
    sessions: RwLock<HashMap<String, Arc<Mutex<Entry>>>>,
    log: Mutex<SessionLog>,
    corpus: RwLock<Arc<CorpusSnapshot>>,
    generator: Arc<dyn Generator>,
    counter: AtomicU64,
}

impl std::fmt::Debug for DraftingService {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DraftingService")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl DraftingService {
    /// Opens the session store in `config.data_dir` and replays it.
    pub fn open(
        config: ServiceConfig,
        corpus: CorpusSnapshot,
        generator: Arc<dyn Generator>,
    ) -> Result<Self, ServiceError> {
        let (log, stored) = SessionLog::open(&config.data_dir)?;
        let mut sessions = HashMap::new();
        // The logical clock resumes past every stored id and timestamp.
        let mut resume = 0u64;
        for session in stored {
            let id_number = session
                .session_id
                .strip_prefix("session-")
                .and_then(|n| n.parse::<u64>().ok())
                .unwrap_or(0);
            let seconds = u64::try_from(session.updated_at.timestamp()).unwrap_or(0);
            resume = resume.max(id_number).max(seconds);
            let index = index_sections(&session.sections)?;
            sessions.insert(session.session_id.clone(), Arc::new(Mutex::new(Entry { session, index })));
        }
        log::info!("loaded {} sessions from {}", sessions.len(), log.path().display());
        let counter = AtomicU64::new(if config.deterministic { resume } else { 0 });
        Ok(DraftingService {
            config,
            sessions: RwLock::new(sessions),
            log: Mutex::new(log),
            corpus: RwLock::new(Arc::new(corpus)),
            generator,
            counter,
        })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    /// Replaces the corpus snapshot. Requests already running keep the old one.
    pub fn reload_corpus(&self, corpus: CorpusSnapshot) {
        *self.corpus.write().expect("corpus lock") = Arc::new(corpus);
    }

    pub fn corpus(&self) -> Arc<CorpusSnapshot> {
        Arc::clone(&self.corpus.read().expect("corpus lock"))
    }

    fn tick(&self) -> u64 {
        self.counter.fetch_add(1, Ordering::SeqCst) + 1
    }

    fn now(&self) -> DateTime<Utc> {
        if self.config.deterministic {
            DateTime::UNIX_EPOCH + TimeDelta::seconds(self.counter.load(Ordering::SeqCst) as i64)
        } else {
            Utc::now()
        }
    }

    fn fresh_id(&self) -> String {
        if self.config.deterministic {
            format!("session-{:06}", self.tick())
        } else {
            uuid::Uuid::new_v4().to_string()
        }
    }

    fn entry(&self, session_id: &str) -> Result<Arc<Mutex<Entry>>, ServiceError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(session_id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(session_id.to_string()))
    }

    fn persist(&self, session: &DraftSession) -> Result<(), ServiceError> {
        self.log.lock().expect("log lock").append(session)?;
        Ok(())
    }

    pub fn create_session(
        &self,
        title: &str,
        descriptors: BTreeSet<String>,
        sections: Vec<Section>,
    ) -> Result<DraftSession, ServiceError> {
        validate_sections(&sections).map_err(|e| ServiceError::Validation(e.to_string()))?;
        let index = index_sections(&sections)?;
        let session_id = self.fresh_id();
        let now = self.now();
        let session = DraftSession {
            session_id: session_id.clone(),
            title: title.to_string(),
            eurovoc_descriptors: lexforge_core::corpus::normalize_descriptors(descriptors),
            sections,
            accepted_definitions: Vec::new(),
            created_at: now,
            updated_at: now,
        };
        self.persist(&session)?;
        let entry = Entry {
            session: session.clone(),
            index,
        };
        self.sessions
            .write()
            .expect("session map lock")
            .insert(session_id, Arc::new(Mutex::new(entry)));
        Ok(session)
    }

    pub fn get_session(&self, session_id: &str) -> Result<DraftSession, ServiceError> {
        let entry = self.entry(session_id)?;
        let guard = entry.lock().expect("session lock");
        Ok(guard.session.clone())
    }

    pub fn list_sessions(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().expect("session map lock").keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn update_sections(&self, session_id: &str, sections: Vec<Section>) -> Result<DraftSession, ServiceError> {
        validate_sections(&sections).map_err(|e| ServiceError::Validation(e.to_string()))?;
        let entry = self.entry(session_id)?;
        let mut guard = entry.lock().expect("session lock");
        let index = index_sections(&sections)?;
        let mut updated = guard.session.clone();
        updated.sections = sections;
        self.tick();
        updated.updated_at = self.now().max(updated.created_at);
        self.persist(&updated)?;
        guard.session = updated.clone();
        guard.index = index;
        Ok(updated)
    }

    pub fn lookup_term(&self, session_id: &str, term: &str) -> Result<LookupOutcome, ServiceError> {
        let descriptors = self.get_session(session_id)?.eurovoc_descriptors;
        let corpus = self.corpus();
        let matches = corpus.definitions.lookup_definitions(term);
        Ok(LookupOutcome::from_candidates(rank_candidates(
            matches,
            &descriptors,
            &corpus.meta,
        )))
    }

    /// Retrieves fragments of the session's sections for `term` and asks the
    /// generator for a definition. The result is only a proposal.
    pub fn generate_for_term(
        &self,
        session_id: &str,
        term: &str,
        k: Option<usize>,
    ) -> Result<GenerationResult, ServiceError> {
        let index = {
            let entry = self.entry(session_id)?;
            let guard = entry.lock().expect("session lock");
            Arc::clone(&guard.index)
        };
        let params = &self.config.params;
        let hits = index.retrieve(term, k.unwrap_or(DEFAULT_K))?;
        let fitted = fit_to_context(term, hits, params);
        let prompt = build_prompt(term, &fitted)?;
        Ok(generate_definition(&prompt, params, self.generator.as_ref())?)
    }

    pub fn accept_definition(
        &self,
        session_id: &str,
        term: &str,
        text: &str,
        provenance: Provenance,
    ) -> Result<DraftSession, ServiceError> {
        let entry = self.entry(session_id)?;
        let mut guard = entry.lock().expect("session lock");
        let key = normalize_term(term);
        if key.is_empty() {
            return Err(ServiceError::Validation("term is empty".into()));
        }
        if text.trim().is_empty() {
            return Err(ServiceError::Validation("definition text is empty".into()));
        }
        if guard
            .session
            .accepted_definitions
            .iter()
            .any(|d| normalize_term(&d.term) == key)
        {
            return Err(ServiceError::DuplicateTerm(key));
        }
        let mut updated = guard.session.clone();
        updated.accepted_definitions.push(AcceptedDefinition {
            term: term.trim().to_string(),
            text: text.trim().to_string(),
            provenance,
        });
        self.tick();
        updated.updated_at = self.now().max(updated.created_at);
        self.persist(&updated)?;
        guard.session = updated.clone();
        Ok(updated)
    }

    pub fn export_article(&self, session_id: &str) -> Result<String, ServiceError> {
        let session = self.get_session(session_id)?;
        let accepted: Vec<(String, String)> = session
            .accepted_definitions
            .into_iter()
            .map(|d| (d.term, d.text))
            .collect();
        Ok(draft_definitions_article(self.config.article_number, &accepted)?)
    }
}
