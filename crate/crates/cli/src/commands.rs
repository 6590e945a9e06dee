use std::collections::BTreeSet;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use lexforge_core::corpus::{html::normalize_html, load_corpus, save_corpus, CanonicalAct, CorpusError, Draft, Fetcher};
use lexforge_core::definitions::{
    extract_corpus, load_definitions, resolve_citations, save_definitions, ResolutionIndex,
};
use lexforge_core::evaluation::{corpus_stats, evaluate_batch, histogram_csv, EvalPair};
use lexforge_core::generation::{
    build_prompt, compose_cited_definition, fit_to_context, generate_definition, GenParams, Generator, HttpGenerator,
};
use lexforge_core::jsonl::read_records;
use lexforge_core::retrieval::{rank_candidates, retrieve_fragments, DocumentMeta};
use lexforge_core::{CelexId, DefinitionStore, Document, MockGenerator};
use lexforge_service::{CorpusSnapshot, DraftingService, ServiceConfig};

use crate::Command;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest { inputs, out } => ingest(&inputs, &out),
        Command::Fetch { celex, list, in_force, max_pages, out, raw } => {
            fetch(celex, list.as_deref(), in_force.as_deref().map(|d| (d, max_pages)), &out, raw.as_deref())
        }
        Command::Extract { corpus, out } => extract(&corpus, &out),
        Command::Resolve { defs, corpus, out, report } => resolve(&defs, corpus.as_deref(), &out, report.as_deref()),
        Command::Lookup { defs, term, descriptors, corpus } => lookup(&defs, &term, descriptors, corpus.as_deref()),
        Command::Cite { defs, id, term } => cite(&defs, &id, term.as_deref()),
        Command::Retrieve { draft, term, k } => {
            let draft = read_draft(&draft)?;
            print_json(&retrieve_fragments(&term, &draft.sections, k)?)
        }
        Command::Define { draft, term, k, config, mock, prompt_only } => {
            define(&draft, &term, k, config.as_deref(), mock, prompt_only)
        }
        Command::Eval { pairs, out } => eval(&pairs, out.as_deref()),
        Command::Stats { corpus, defs, out, histogram, non_html } => {
            let documents = load_corpus(&corpus)?;
            let elements = load_definitions(&defs)?;
            let stats = corpus_stats(&documents, &elements, non_html);
            if let Some(path) = histogram {
                fs::write(&path, histogram_csv(&stats)).with_context(|| format!("writing {}", path.display()))?;
            }
            write_json(&stats, out.as_deref())
        }
        Command::Serve { port, host, corpus, defs, data_dir, config, mock_generator, deterministic } => {
            let documents = match corpus {
                Some(path) => load_corpus(&path)?,
                None => Vec::new(),
            };
            let elements = load_definitions(&defs)?;
            let mut service_config = ServiceConfig::new(data_dir);
            service_config.params = params(config.as_deref())?;
            service_config.deterministic = deterministic;
            let service = DraftingService::open(
                service_config,
                CorpusSnapshot::new(elements, &documents),
                generator(mock_generator)?,
            )?;
            let addr: SocketAddr = format!("{host}:{port}").parse().context("invalid host/port")?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(lexforge_service::serve(addr, Arc::new(service)))?;
            Ok(())
        }
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn write_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, serde_json::to_string_pretty(value)? + "\n")
                .with_context(|| format!("writing {}", path.display()))
        }
        None => print_json(value),
    }
}

fn read_draft(path: &Path) -> Result<Draft> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let draft: Draft = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    draft.validate()?;
    Ok(draft)
}

fn params(config: Option<&Path>) -> Result<GenParams> {
    let params = match config {
        Some(path) => GenParams::from_file(path)?,
        None => GenParams::default(),
    };
    Ok(params.with_env_overrides())
}

fn generator(mock: bool) -> Result<Arc<dyn Generator>> {
    if mock {
        Ok(Arc::new(MockGenerator::new()))
    } else {
        Ok(Arc::new(HttpGenerator::from_env()?))
    }
}

fn act_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            found.retain(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "html" | "htm")));
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

fn ingest(inputs: &[PathBuf], out: &Path) -> Result<()> {
    let mut documents = Vec::new();
    for path in act_files(inputs)? {
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let act = match path.extension().and_then(|e| e.to_str()) {
            Some("html" | "htm") => {
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                normalize_html(&text, stem)
            }
            _ => CanonicalAct::from_json(&text)?,
        };
        let doc = act.into_document().with_context(|| format!("converting {}", path.display()))?;
        documents.push(doc);
    }
    let n = save_corpus(&documents, out)?;
    log::info!("wrote {n} documents to {}", out.display());
    Ok(())
}

fn fetch(
    mut ids: Vec<String>,
    list: Option<&Path>,
    in_force: Option<(&str, usize)>,
    out: &Path,
    raw: Option<&Path>,
) -> Result<()> {
    if let Some(list) = list {
        let text = fs::read_to_string(list)?;
        ids.extend(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from));
    }
    let fetcher = Fetcher::from_env();
    if let Some((directory, max_pages)) = in_force {
        let listed = fetcher.list_in_force(directory, max_pages)?;
        log::info!("{} acts listed in force under directory {directory}", listed.len());
        ids.extend(listed.into_iter().map(|c| c.to_string()));
    }
    if ids.is_empty() {
        bail!("no Celex ids given");
    }
    if let Some(dir) = raw {
        fs::create_dir_all(dir)?;
    }
    let mut documents: Vec<Document> = Vec::new();
    let mut non_html = 0;
    for id in ids {
        let celex = CelexId::parse(&id)?;
        match fetcher.fetch_document(&celex) {
            Ok(act) => {
                if let Some(dir) = raw {
                    fs::write(dir.join(format!("{celex}.html")), &act.html)?;
                }
                match act.to_canonical().into_document() {
                    Ok(doc) => documents.push(doc),
                    Err(e) => log::warn!("{celex}: {e}"),
                }
            }
            Err(CorpusError::NonHtmlFormat { .. }) => {
                non_html += 1;
                log::warn!("{celex}: no HTML rendition, skipped");
            }
            Err(e) => log::warn!("{celex}: {e}"),
        }
    }
    let n = save_corpus(&documents, out)?;
    log::info!("wrote {n} documents to {} ({non_html} non-HTML skipped)", out.display());
    Ok(())
}

fn extract(corpus: &Path, out: &Path) -> Result<()> {
    let documents = load_corpus(corpus)?;
    let extraction = extract_corpus(&documents);
    for w in &extraction.warnings {
        log::warn!("{} paragraph {}: {}", w.celex, w.paragraph_position, w.reason);
    }
    let n = save_definitions(&extraction.elements, out)?;
    log::info!("wrote {n} definition elements to {}", out.display());
    Ok(())
}

fn resolve(defs: &Path, corpus: Option<&Path>, out: &Path, report_path: Option<&Path>) -> Result<()> {
    let elements = load_definitions(defs)?;
    let mut index = ResolutionIndex::from_elements(&elements);
    if let Some(corpus) = corpus {
        index = index.with_documents(&load_corpus(corpus)?);
    }
    let (resolved, report) = resolve_citations(elements, &index);
    save_definitions(&resolved, out)?;
    log::info!("{} citations resolved, {} dangling", report.resolved, report.dangling.len());
    if let Some(path) = report_path {
        write_json(&report, Some(path))?;
    }
    Ok(())
}

fn lookup(defs: &Path, term: &str, descriptors: Vec<String>, corpus: Option<&Path>) -> Result<()> {
    let store = DefinitionStore::new(load_definitions(defs)?);
    let meta = match corpus {
        Some(path) => DocumentMeta::from_documents(&load_corpus(path)?),
        None => DocumentMeta::default(),
    };
    let draft: BTreeSet<String> = lexforge_core::corpus::normalize_descriptors(descriptors);
    print_json(&rank_candidates(store.lookup_definitions(term), &draft, &meta))
}

fn cite(defs: &Path, id: &str, term: Option<&str>) -> Result<()> {
    let store = DefinitionStore::new(load_definitions(defs)?);
    let Some(element) = store.get(id) else {
        bail!("no definition element with id {id:?}");
    };
    let targets = store.static_targets(element);
    emit(&(compose_cited_definition(term.unwrap_or(&element.term), element, &targets)? + "\n"))
}

fn define(draft: &Path, term: &str, k: usize, config: Option<&Path>, mock: bool, prompt_only: bool) -> Result<()> {
    let draft = read_draft(draft)?;
    let params = params(config)?;
    let hits = retrieve_fragments(term, &draft.sections, k)?;
    let prompt = build_prompt(term, &fit_to_context(term, hits, &params))?;
    if prompt_only {
        return emit(&prompt.rendered);
    }
    let generator = generator(mock)?;
    print_json(&generate_definition(&prompt, &params, generator.as_ref())?)
}

fn eval(pairs: &Path, out: Option<&Path>) -> Result<()> {
    let pairs: Vec<EvalPair> = read_records(pairs, |_: &EvalPair| Ok(()))
        .map_err(|e| anyhow::anyhow!("{}: {e:?}", pairs.display()))?;
    let report = evaluate_batch(&pairs);
    if report.pairs_skipped > 0 {
        log::warn!("{} pairs skipped (empty reference)", report.pairs_skipped);
    }
    write_json(&report, out)
}
