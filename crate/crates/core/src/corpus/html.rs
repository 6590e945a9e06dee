//! Best-effort conversion of EUR-Lex HTML into the canonical act form.
//!
//! Both the current (`oj-*` classes) and the older (`ti-art`, `sti-art`,
//! `normal`) markup are recognised. Recital boundaries are inferred from the
//! `Whereas:` lead-in and `(n)` labels, which is a heuristic.

use std::sync::LazyLock;

use regex::Regex;
use scraper::{Html, Selector};

use super::fragment::normalize_whitespace;
use super::parse::{CanonicalAct, CanonicalZone};
use super::SectionKind;

static PARAGRAPHS: LazyLock<Selector> = LazyLock::new(|| Selector::parse("p").unwrap());
static TITLE_PARTS: LazyLock<Selector> =
    LazyLock::new(|| Selector::parse("p.oj-doc-ti, p.doc-ti").unwrap());
static PAGE_TITLE: LazyLock<Selector> = LazyLock::new(|| Selector::parse("title").unwrap());
static SUBJECT_META: LazyLock<Selector> =
    LazyLock::new(|| Selector::parse(r#"meta[name="DC.subject"], meta[name="eurovoc"]"#).unwrap());
static LABEL_ONLY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:\(\w{1,4}\)|\d{1,3}\.)$").unwrap());
static RECITAL_LABEL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\(\d+\)\s").unwrap());

/// Title and eurovoc descriptors found in the page head or document title block.
pub fn extract_metadata(html: &str) -> (String, Vec<String>) {
    let page = Html::parse_document(html);
    let from_block: Vec<String> = page
        .select(&TITLE_PARTS)
        .map(|p| normalize_whitespace(&p.text().collect::<String>()))
        .filter(|t| !t.is_empty())
        .take_while(|t| !t.starts_with("ANNEX"))
        .collect();
    let title = if from_block.is_empty() {
        page.select(&PAGE_TITLE)
            .next()
            .map(|t| normalize_whitespace(&t.text().collect::<String>()))
            .unwrap_or_default()
    } else {
        from_block.join(" ")
    };
    let descriptors = page
        .select(&SUBJECT_META)
        .filter_map(|m| m.value().attr("content"))
        .flat_map(|c| c.split([';', ',']))
        .map(|d| d.trim().to_lowercase())
        .filter(|d| !d.is_empty())
        .collect();
    (title, descriptors)
}

#[derive(PartialEq)]
enum Zone {
    Header,
    Recitals,
    Body,
}

/// Converts an act page to [`CanonicalAct`]. Paragraph order is preserved and
/// every non-empty `<p>` lands in exactly one zone.
pub fn normalize_html(html: &str, celex: &str) -> CanonicalAct {
    let page = Html::parse_document(html);
    let (title, eurovoc) = extract_metadata(html);

    let mut zones: Vec<CanonicalZone> = vec![CanonicalZone {
        kind: SectionKind::Header,
        heading: None,
        paragraphs: Vec::new(),
    }];
    let mut state = Zone::Header;
    let mut pending_label: Option<String> = None;
    let mut expect_subtitle = false;

    for p in page.select(&PARAGRAPHS) {
        let class = p.value().attr("class").unwrap_or("");
        let text = normalize_whitespace(&p.text().collect::<String>());
        if text.is_empty() {
            continue;
        }
        let has = |needle: &str| class.split_whitespace().any(|c| c.ends_with(needle));

        if has("ti-art") && !has("sti-art") {
            zones.push(CanonicalZone {
                kind: SectionKind::Article,
                heading: Some(text),
                paragraphs: Vec::new(),
            });
            state = Zone::Body;
            expect_subtitle = true;
            continue;
        }
        if has("sti-art") && expect_subtitle {
            let zone = zones.last_mut().expect("article pushed");
            let heading = zone.heading.get_or_insert_with(String::new);
            heading.push(' ');
            heading.push_str(&text);
            expect_subtitle = false;
            continue;
        }
        expect_subtitle = false;
        if has("ti-annex") || (state == Zone::Body && text.starts_with("ANNEX")) {
            zones.push(CanonicalZone {
                kind: SectionKind::Attachment,
                heading: Some(text),
                paragraphs: Vec::new(),
            });
            continue;
        }
        if LABEL_ONLY.is_match(&text) {
            pending_label = Some(text);
            continue;
        }
        let text = match pending_label.take() {
            Some(label) => format!("{label} {text}"),
            None => text,
        };
        if state == Zone::Header && text.trim_end_matches(':').eq_ignore_ascii_case("whereas") {
            zones[0].paragraphs.push(text);
            state = Zone::Recitals;
            continue;
        }
        if state == Zone::Recitals && RECITAL_LABEL.is_match(&text) {
            zones.push(CanonicalZone {
                kind: SectionKind::Recital,
                heading: None,
                paragraphs: Vec::new(),
            });
        }
        zones.last_mut().expect("header zone").paragraphs.push(text);
    }
    if let Some(label) = pending_label {
        zones.last_mut().expect("header zone").paragraphs.push(label);
    }

    CanonicalAct {
        celex: celex.to_string(),
        title,
        year: None,
        eurovoc,
        zones,
    }
}
