use super::{CelexId, Document, Fragment, Section};

/// Collapses runs of whitespace to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Splits text into sentences.
///
/// A boundary is a `.`, `?` or `!` outside parentheses, followed by whitespace
/// and then an uppercase letter or a digit. Semicolons and colons never split.
pub fn split_sentences(text: &str) -> Vec<String> {
    let text = normalize_whitespace(text);
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut depth = 0usize;
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            '.' | '?' | '!' if depth == 0 => {
                // normalized text has at most one space between tokens
                if chars.get(i + 1) == Some(&' ')
                    && chars
                        .get(i + 2)
                        .is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
                {
                    sentences.push(chars[start..=i].iter().collect::<String>());
                    start = i + 2;
                    i += 1;
                }
            }
            _ => {}
        }
        i += 1;
    }
    if start < chars.len() {
        sentences.push(chars[start..].iter().collect::<String>());
    }
    sentences.retain(|s| !s.trim().is_empty());
    sentences
}

/// Splits every paragraph of `section` into sentence fragments.
///
/// Fragment ids are `<celex>:<section>:<paragraph>:<sentence>`, with `draft`
/// standing in for a missing Celex id.
pub fn fragment_section(section: &Section, celex: Option<&CelexId>) -> Vec<Fragment> {
    let owner = celex.map_or_else(|| "draft".to_string(), CelexId::to_string);
    let mut out = Vec::new();
    for para in &section.paragraphs {
        for (sentence_position, text) in split_sentences(&para.text).into_iter().enumerate() {
            out.push(Fragment {
                fragment_id: format!(
                    "{owner}:{}:{}:{}",
                    section.position, para.position, sentence_position
                ),
                celex: celex.cloned(),
                section_position: section.position,
                paragraph_position: para.position,
                sentence_position,
                text,
            });
        }
    }
    out
}

/// Fragments of a list of sections, in document order.
pub fn fragment_sections(sections: &[Section], celex: Option<&CelexId>) -> Vec<Fragment> {
    sections
        .iter()
        .flat_map(|s| fragment_section(s, celex))
        .collect()
}

pub fn fragment_document(doc: &Document) -> Vec<Fragment> {
    fragment_sections(&doc.sections, Some(&doc.celex))
}
