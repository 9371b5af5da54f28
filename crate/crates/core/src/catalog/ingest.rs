use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use crate::canon::{code_canonical, CanonicalForm};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::lincode::LinearCode;
use crate::records::split_records;

/// Distinct designs from a record file, in order of first appearance.
#[derive(Clone, Debug, Default)]
pub struct IngestedDesigns {
    pub designs: Vec<Design>,
    pub fingerprints: Vec<CanonicalForm>,
    /// How many records fell into each design's class.
    pub copies: Vec<usize>,
    /// One error per rejected record, carrying its line number.
    pub errors: Vec<Error>,
}

impl IngestedDesigns {
    pub fn duplicates(&self) -> usize {
        self.copies.iter().map(|c| c - 1).sum()
    }
}

pub fn ingest_designs(path: &Path) -> Result<IngestedDesigns> {
    Ok(ingest_designs_text(&fs::read_to_string(path)?))
}

pub fn ingest_designs_text(text: &str) -> IngestedDesigns {
    let mut out = IngestedDesigns::default();
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    for record in split_records(text) {
        let design = match record.and_then(|r| Design::from_record(&r)) {
            Ok(d) => d,
            Err(e) => {
                out.errors.push(e);
                continue;
            }
        };
        let fp = design.canonical_form();
        match index.get(&fp) {
            Some(&i) => out.copies[i] += 1,
            None => {
                index.insert(fp.clone(), out.designs.len());
                out.designs.push(design);
                out.fingerprints.push(fp);
                out.copies.push(1);
            }
        }
    }
    out
}

/// Codes read from a record file, with per-record errors.
#[derive(Clone, Debug, Default)]
pub struct IngestedCodes {
    pub codes: Vec<LinearCode>,
    pub errors: Vec<Error>,
}

pub fn ingest_codes(path: &Path) -> Result<IngestedCodes> {
    Ok(ingest_codes_text(&fs::read_to_string(path)?, false))
}

/// Like [`ingest_codes`], rejecting every record that is not self-dual.
pub fn ingest_selfdual(path: &Path) -> Result<IngestedCodes> {
    Ok(ingest_codes_text(&fs::read_to_string(path)?, true))
}

pub fn ingest_codes_text(text: &str, self_dual_only: bool) -> IngestedCodes {
    let mut out = IngestedCodes::default();
    for record in split_records(text) {
        let parsed = record.and_then(|r| {
            let code = LinearCode::from_record(&r)?;
            if self_dual_only && code != code.dual() {
                return Err(r.error(
                    Error::NotSelfDual(format!(
                        "({},{}) code differs from its dual",
                        code.length(),
                        code.dimension()
                    ))
                    .to_string(),
                ));
            }
            Ok(code)
        });
        match parsed {
            Ok(c) => out.codes.push(c),
            Err(e) => out.errors.push(e),
        }
    }
    out
}

/// Classes of the cross-sections of `codes` at every coordinate, sorted by
/// fingerprint. Applied to the self-dual codes of length `n + 1` this gives
/// the self-orthogonal `(n, n/2)` codes.
pub fn cross_section_classes(codes: &[LinearCode]) -> Result<BTreeMap<CanonicalForm, LinearCode>> {
    let mut classes = BTreeMap::new();
    for code in codes {
        for j in 0..code.length() {
            let section = code.cross_section(j)?;
            classes.entry(code_canonical(&section)).or_insert(section);
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::pairs_design_421;

    #[test]
    fn row_permuted_copies_collapse() {
        let d = pairs_design_421();
        let p = d.permuted(&[2, 0, 3, 1], &[5, 4, 3, 2, 1, 0]);
        let text = format!("{}\n{}", d.to_record(), p.to_record());
        let got = ingest_designs_text(&text);
        assert_eq!(got.designs.len(), 1);
        assert_eq!(got.copies, vec![2]);
        assert_eq!(got.duplicates(), 1);
        assert!(got.errors.is_empty());
    }

    #[test]
    fn bad_records_are_reported_with_lines() {
        let text = format!(
            "4 6 3 2 1\n110000\n101000\n011000\n000111\n\n{}",
            pairs_design_421().to_record()
        );
        let got = ingest_designs_text(&text);
        assert_eq!(got.designs.len(), 1);
        assert_eq!(got.errors.len(), 1);
        assert!(matches!(got.errors[0], Error::Parse { line: 1, .. }));
    }

    #[test]
    fn self_dual_check() {
        let got = ingest_codes_text("2 1\n11\n\n2 1\n10\n", true);
        assert_eq!(got.codes.len(), 1);
        assert_eq!(got.errors.len(), 1);
        assert!(matches!(got.errors[0], Error::Parse { line: 4, .. }));
    }

    #[test]
    fn extended_hamming_sections_give_one_class() {
        let got = ingest_codes_text("8 4\n11110000\n00111100\n00001111\n01010101\n", true);
        assert!(got.errors.is_empty());
        let classes = cross_section_classes(&got.codes).unwrap();
        assert_eq!(classes.len(), 1);
        let c = classes.values().next().unwrap();
        assert_eq!(c.weight_distribution().unwrap().to_sparse(), "0:1,4:7");
    }
}
