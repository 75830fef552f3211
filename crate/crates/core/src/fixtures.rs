//! Built-in spec documents, addressable by name.

use crate::spec_file::{parse_spec, ManifoldSpec};

const DOCUMENTS: [(&str, &str); 5] = [
    ("ex1-printed", include_str!("../fixtures/ex1-printed.json")),
    ("ex1-corrected", include_str!("../fixtures/ex1-corrected.json")),
    ("ex2", include_str!("../fixtures/ex2.json")),
    ("ex3", include_str!("../fixtures/ex3.json")),
    ("flat-abelian", include_str!("../fixtures/flat-abelian.json")),
];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    DOCUMENTS.iter().map(|(name, _)| *name)
}

pub fn fixture_document(name: &str) -> Option<&'static str> {
    DOCUMENTS.iter().find(|(n, _)| *n == name).map(|(_, doc)| *doc)
}

/// Parsed built-in fixture.
///
/// # Panics
/// Never for the bundled names; the documents are checked by the tests below.
pub fn fixture(name: &str) -> Option<ManifoldSpec> {
    fixture_document(name).map(|doc| parse_spec(doc).expect("bundled fixtures parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_under_its_own_name() {
        for name in fixture_names() {
            let spec = fixture(name).unwrap();
            assert_eq!(spec.name, name);
        }
        assert!(fixture("ex4").is_none());
    }

    #[test]
    fn printed_and_corrected_differ_only_in_phi() {
        let (mut a, b) = (fixture("ex1-printed").unwrap(), fixture("ex1-corrected").unwrap());
        assert_ne!(a.phi, b.phi);
        a.phi = b.phi.clone();
        a.name = b.name.clone();
        assert_eq!(a, b);
    }
}
