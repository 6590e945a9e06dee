use std::cmp::Ordering;
use std::path::Path;

use super::{DefinitionElement, DefinitionError};
use crate::jsonl::{self, ReadError};

fn label_cmp(a: Option<&str>, b: Option<&str>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => match (a.parse::<u32>(), b.parse::<u32>()) {
            (Ok(x), Ok(y)) => x.cmp(&y),
            (Ok(_), Err(_)) => Ordering::Less,
            (Err(_), Ok(_)) => Ordering::Greater,
            (Err(_), Err(_)) => a.cmp(b),
        },
    }
}

/// Orders by (celex, section position, point label, paragraph, term); numeric
/// point labels compare numerically.
pub fn sort_elements(elements: &mut [DefinitionElement]) {
    elements.sort_by(|a, b| {
        a.source
            .celex
            .cmp(&b.source.celex)
            .then(a.source.section_position.cmp(&b.source.section_position))
            .then_with(|| label_cmp(a.source.point_label.as_deref(), b.source.point_label.as_deref()))
            .then(a.source.paragraph_position.cmp(&b.source.paragraph_position))
            .then_with(|| a.term.cmp(&b.term))
            .then_with(|| a.id.cmp(&b.id))
    });
}

pub fn save_definitions(elements: &[DefinitionElement], path: &Path) -> Result<usize, DefinitionError> {
    let mut sorted = elements.to_vec();
    sort_elements(&mut sorted);
    Ok(jsonl::write_records(path, &sorted)?)
}

pub fn load_definitions(path: &Path) -> Result<Vec<DefinitionElement>, DefinitionError> {
    jsonl::read_records(path, |e: &DefinitionElement| {
        if e.term.is_empty() {
            return Err("empty term".into());
        }
        if e.explanation.trim().is_empty() {
            return Err("empty explanation".into());
        }
        Ok(())
    })
    .map_err(|e| match e {
        ReadError::Io(e) => DefinitionError::Storage(e),
        ReadError::Line(line, message) => DefinitionError::SchemaViolation { line, message },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CelexId, Section, SectionKind};
    use crate::definitions::extract_definitions;

    #[test]
    fn saved_in_deterministic_order() {
        let section = Section::new(
            2,
            SectionKind::Article,
            Some("Article 2".into()),
            ["(10) 'b' means b;", "(2) 'z' or 'a' means z;"],
        );
        let elements = extract_definitions(&section, &CelexId::parse("32019L0944").unwrap()).elements;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("defs.jsonl");
        save_definitions(&elements, &path).unwrap();
        let loaded = load_definitions(&path).unwrap();
        let terms: Vec<_> = loaded.iter().map(|e| e.term.as_str()).collect();
        assert_eq!(terms, ["a", "z", "b"]);
    }

    #[test]
    fn numeric_labels_before_letters() {
        assert_eq!(label_cmp(Some("9"), Some("10")), Ordering::Less);
        assert_eq!(label_cmp(Some("a"), Some("1")), Ordering::Greater);
        assert_eq!(label_cmp(None, Some("1")), Ordering::Less);
    }
}
