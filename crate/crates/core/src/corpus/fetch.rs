//! Polite EUR-Lex crawling.

use std::collections::HashSet;
use std::sync::{LazyLock, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use regex::Regex;

use super::html;
use super::parse::CanonicalAct;
use super::{CelexId, CorpusError};

pub const DEFAULT_ENDPOINT: &str = "https://eur-lex.europa.eu";
pub const ENDPOINT_ENV: &str = "LEXFORGE_EURLEX_BASE";
/// Directory code of the Energy chapter of the legislation-in-force listing.
pub const ENERGY_DIRECTORY: &str = "12";

static LISTED_CELEX: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"CELEX(?::|%3A)(3\d{4}[LRD]\d{4})").unwrap());

/// Directives, regulations and decisions linked from a listing page, in
/// order of first appearance.
pub fn listed_celex_ids(page: &str) -> Vec<CelexId> {
    let mut seen = HashSet::new();
    LISTED_CELEX
        .captures_iter(page)
        .filter_map(|c| CelexId::parse(&c[1]).ok())
        .filter(|id| seen.insert(id.clone()))
        .collect()
}

/// Enforces a minimum spacing between consecutive requests, process-wide
/// for whoever shares the limiter.
#[derive(Debug)]
pub struct RateLimiter {
    min_interval: Duration,
    last: Mutex<Option<Instant>>,
}

impl RateLimiter {
    pub fn new(min_interval: Duration) -> Self {
        RateLimiter {
            min_interval,
            last: Mutex::new(None),
        }
    }

    /// Blocks until a request may be issued and records it.
    pub fn acquire(&self) {
        let mut last = self.last.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(prev) = *last {
            let elapsed = prev.elapsed();
            if elapsed < self.min_interval {
                thread::sleep(self.min_interval - elapsed);
            }
        }
        *last = Some(Instant::now());
    }
}

#[derive(Debug, Clone)]
pub struct FetchedAct {
    pub celex: CelexId,
    pub html: String,
    pub title: String,
    pub eurovoc: Vec<String>,
}

impl FetchedAct {
    pub fn to_canonical(&self) -> CanonicalAct {
        let mut act = html::normalize_html(&self.html, self.celex.as_str());
        if act.title.is_empty() {
            act.title = self.title.clone();
        }
        act
    }
}

#[derive(Debug)]
pub struct Fetcher {
    base: String,
    agent: ureq::Agent,
    limiter: RateLimiter,
    retries: u32,
    backoff: Duration,
}

impl Fetcher {
    /// One request per second, three retries starting at a 1 s backoff.
    pub fn new(base: impl Into<String>) -> Self {
        Fetcher::with_policy(base, Duration::from_secs(1), 3, Duration::from_secs(1))
    }

    /// Endpoint from `LEXFORGE_EURLEX_BASE`, falling back to the public site.
    pub fn from_env() -> Self {
        Fetcher::new(std::env::var(ENDPOINT_ENV).unwrap_or_else(|_| DEFAULT_ENDPOINT.to_string()))
    }

    pub fn with_policy(
        base: impl Into<String>,
        min_interval: Duration,
        retries: u32,
        backoff: Duration,
    ) -> Self {
        Fetcher {
            base: base.into().trim_end_matches('/').to_string(),
            agent: ureq::AgentBuilder::new()
                .timeout(Duration::from_secs(30))
                .build(),
            limiter: RateLimiter::new(min_interval),
            retries,
            backoff,
        }
    }

    pub fn document_url(&self, celex: &CelexId) -> String {
        format!("{}/legal-content/EN/TXT/HTML/?uri=CELEX:{}", self.base, celex)
    }

    /// Page `page` (1-based) of the legislation-in-force listing for a
    /// directory code.
    pub fn listing_url(&self, directory: &str, page: usize) -> String {
        format!(
            "{}/search.html?type=named&name=browse-by:legislation-in-force&CC_1_CODED={directory}&displayProfile=allRelAllConsDocProfile&page={page}",
            self.base
        )
    }

    /// Walks the listing until a page adds no new ids or `max_pages` is hit.
    pub fn list_in_force(&self, directory: &str, max_pages: usize) -> Result<Vec<CelexId>, CorpusError> {
        let mut all = Vec::new();
        let mut seen = HashSet::new();
        for page in 1..=max_pages {
            let body = self.get(&self.listing_url(directory, page))?.into_string().map_err(|e| CorpusError::Network(e.to_string()))?;
            let fresh: Vec<CelexId> = listed_celex_ids(&body)
                .into_iter()
                .filter(|id| seen.insert(id.clone()))
                .collect();
            if fresh.is_empty() {
                break;
            }
            all.extend(fresh);
        }
        Ok(all)
    }

    pub fn fetch_document(&self, celex: &CelexId) -> Result<FetchedAct, CorpusError> {
        match self.get(&self.document_url(celex)) {
            Ok(resp) => self.accept(celex, resp),
            Err(CorpusError::NotFound(_)) => Err(CorpusError::NotFound(celex.to_string())),
            Err(e) => Err(e),
        }
    }

    /// GET with rate limiting; transport errors, 429 and 5xx are retried
    /// with exponential backoff.
    fn get(&self, url: &str) -> Result<ureq::Response, CorpusError> {
        let mut delay = self.backoff;
        let mut attempt = 0;
        loop {
            self.limiter.acquire();
            match self.agent.get(url).call() {
                Ok(resp) => return Ok(resp),
                Err(ureq::Error::Status(404, _)) => return Err(CorpusError::NotFound(url.to_string())),
                Err(ureq::Error::Status(code, _)) if code != 429 && code < 500 => {
                    return Err(CorpusError::Network(format!("{url}: HTTP {code}")))
                }
                Err(err) => {
                    if attempt >= self.retries {
                        return Err(CorpusError::Network(format!("{url}: {err}")));
                    }
                    log::warn!("GET {url} failed ({err}); retrying in {delay:?}");
                    thread::sleep(delay);
                    delay *= 2;
                    attempt += 1;
                }
            }
        }
    }

    fn accept(&self, celex: &CelexId, resp: ureq::Response) -> Result<FetchedAct, CorpusError> {
        let content_type = resp.content_type().to_ascii_lowercase();
        if !content_type.contains("html") {
            return Err(CorpusError::NonHtmlFormat {
                celex: celex.to_string(),
                content_type,
            });
        }
        let body = resp
            .into_string()
            .map_err(|e| CorpusError::Network(e.to_string()))?;
        if !body.to_ascii_lowercase().contains("<p") {
            return Err(CorpusError::NonHtmlFormat {
                celex: celex.to_string(),
                content_type,
            });
        }
        let (title, eurovoc) = html::extract_metadata(&body);
        Ok(FetchedAct {
            celex: celex.clone(),
            html: body,
            title,
            eurovoc,
        })
    }
}
