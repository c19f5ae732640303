//! Dataset I/O, the relation taxonomy with entailment directions, and the
//! rated-pairs-to-entailment construction pipeline.

mod io;
mod jmth;
mod split;
mod taxonomy;

pub use io::{
    load_pairs, load_rated_pairs, save_pairs, save_rated_pairs, validate_profile, DatasetProfile,
    BBDS_PROFILE, KDSZ_PROFILE,
};
pub use jmth::{balance_classes, jmth_transform, mapping_label, JmthReport};
pub use split::{split_dev_test, split_dev_test_with, SplitReport, ThreeWaySplit};
pub use taxonomy::{RelationTaxonomy, TaxonomyEntry};

/// A word pair with its entailment label and optional relation metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPair {
    pub a: String,
    pub b: String,
    pub label: u8,
    pub relation_id: Option<String>,
}

impl LabeledPair {
    pub fn new(a: impl Into<String>, b: impl Into<String>, label: u8) -> Self {
        LabeledPair {
            a: a.into(),
            b: b.into(),
            label,
            relation_id: None,
        }
    }

    pub fn with_relation(mut self, relation_id: impl Into<String>) -> Self {
        self.relation_id = Some(relation_id.into());
        self
    }
}

/// A prototypicality-rated word pair from a relation subcategory.
#[derive(Debug, Clone, PartialEq)]
pub struct RatedPair {
    pub a: String,
    pub b: String,
    pub subcategory_id: String,
    pub rating: f64,
}
