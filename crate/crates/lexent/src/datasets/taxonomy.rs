//! The 79-subcategory relation taxonomy with per-direction entailment bits.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// One subcategory: its id (e.g. `8f`), category and subcategory names, an
/// example pair, and whether each direction of the relation entails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonomyEntry {
    pub id: String,
    pub category: String,
    pub subcategory: String,
    pub example: String,
    pub a_entails_b: bool,
    pub b_entails_a: bool,
}

/// The full taxonomy. Construction checks the shipped invariants: exactly
/// 79 unique subcategories, 25 entailing forward and 12 backward.
#[derive(Debug, Clone)]
pub struct RelationTaxonomy {
    entries: Vec<TaxonomyEntry>,
    index: HashMap<String, usize>,
}

const EXPECTED_ENTRIES: usize = 79;
const EXPECTED_FORWARD: usize = 25;
const EXPECTED_BACKWARD: usize = 12;

impl RelationTaxonomy {
    pub fn new(entries: Vec<TaxonomyEntry>) -> Result<Self> {
        if entries.len() != EXPECTED_ENTRIES {
            return Err(Error::Input(format!(
                "taxonomy must have exactly {EXPECTED_ENTRIES} entries, found {}",
                entries.len()
            )));
        }
        let forward = entries.iter().filter(|e| e.a_entails_b).count();
        let backward = entries.iter().filter(|e| e.b_entails_a).count();
        if forward != EXPECTED_FORWARD || backward != EXPECTED_BACKWARD {
            return Err(Error::Input(format!(
                "taxonomy entailment totals must be {EXPECTED_FORWARD} forward / \
                 {EXPECTED_BACKWARD} backward, found {forward} / {backward}"
            )));
        }
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate taxonomy id: {}", e.id)));
            }
        }
        Ok(RelationTaxonomy { entries, index })
    }

    /// The taxonomy shipped with the crate.
    pub fn embedded() -> &'static RelationTaxonomy {
        static EMBEDDED: OnceLock<RelationTaxonomy> = OnceLock::new();
        EMBEDDED.get_or_init(|| {
            Self::parse(include_str!("../../data/taxonomy.tsv"), "<embedded>")
                .expect("embedded taxonomy is valid")
        })
    }

    /// Load from `id<TAB>category<TAB>subcategory<TAB>example<TAB>ab<TAB>ba`
    /// lines; `#` comments and blank lines are skipped.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let parse_err = |message: String| Error::Parse {
                path: origin.to_owned(),
                line: lineno + 1,
                message,
            };
            if fields.len() != 6 {
                return Err(parse_err(format!(
                    "expected 6 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let bit = |s: &str| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(parse_err(format!("entailment bit must be 0 or 1: {other}"))),
            };
            entries.push(TaxonomyEntry {
                id: fields[0].to_owned(),
                category: fields[1].to_owned(),
                subcategory: fields[2].to_owned(),
                example: fields[3].to_owned(),
                a_entails_b: bit(fields[4])?,
                b_entails_a: bit(fields[5])?,
            });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[TaxonomyEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&TaxonomyEntry> {
        self.index.get(id).map(|&i| &self.entries[i])
    }

    pub fn require(&self, id: &str) -> Result<&TaxonomyEntry> {
        self.get(id).ok_or_else(|| Error::Lookup {
            term: format!("taxonomy id {id}"),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_satisfies_totals() {
        let tax = RelationTaxonomy::embedded();
        assert_eq!(tax.len(), 79);
        assert_eq!(tax.entries().iter().filter(|e| e.a_entails_b).count(), 25);
        assert_eq!(tax.entries().iter().filter(|e| e.b_entails_a).count(), 12);
        // exactly two symmetric subcategories
        let both: Vec<&str> = tax
            .entries()
            .iter()
            .filter(|e| e.a_entails_b && e.b_entails_a)
            .map(|e| e.id.as_str())
            .collect();
        assert_eq!(both, vec!["3a", "9e"]);
    }

    #[test]
    fn spot_checked_rows() {
        let tax = RelationTaxonomy::embedded();
        let e8f = tax.require("8f").unwrap();
        assert_eq!(e8f.example, "anesthetic:numbness");
        assert!(e8f.a_entails_b && !e8f.b_entails_a);
        let e2i = tax.require("2i").unwrap();
        assert!(!e2i.a_entails_b && !e2i.b_entails_a);
        let e1a = tax.require("1a").unwrap();
        assert!(!e1a.a_entails_b && e1a.b_entails_a);
    }

    #[test]
    fn unknown_id_is_a_lookup_error() {
        assert!(RelationTaxonomy::embedded().require("99z").is_err());
    }

    #[test]
    fn wrong_totals_rejected() {
        let mut entries = RelationTaxonomy::embedded().entries().to_vec();
        entries[0].a_entails_b = true; // 1a is 0/1 in the table
        assert!(RelationTaxonomy::new(entries).is_err());
    }
}
