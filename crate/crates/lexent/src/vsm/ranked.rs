//! Ranked per-word feature sets extracted from PPMI rows.

use crate::error::{Error, Result};

use super::ppmi::PpmiMatrix;

/// One feature of a ranked set: a context column and its PPMI weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedFeature {
    pub col: usize,
    pub weight: f64,
}

/// The nonzero contexts of one word, ranked by descending PPMI weight.
/// Rank is 1-based; ties are broken deterministically at construction
/// (ascending context-key order when built from a matrix).
#[derive(Debug, Clone)]
pub struct FeatureSet {
    word: String,
    ranked: Vec<RankedFeature>,
    // (col, 0-based rank) sorted by col, for O(log n) membership tests
    by_col: Vec<(usize, usize)>,
}

impl FeatureSet {
    /// Build from an already-ranked list. Weights must be positive, finite
    /// and nonincreasing.
    pub fn from_ranked(word: impl Into<String>, ranked: Vec<RankedFeature>) -> Result<Self> {
        for pair in ranked.windows(2) {
            if pair[1].weight > pair[0].weight {
                return Err(Error::Input(
                    "feature weights must be sorted nonincreasing".into(),
                ));
            }
        }
        for f in &ranked {
            if f.weight <= 0.0 || !f.weight.is_finite() {
                return Err(Error::Input(format!(
                    "feature weights must be positive and finite, got {}",
                    f.weight
                )));
            }
        }
        let mut by_col: Vec<(usize, usize)> = ranked
            .iter()
            .enumerate()
            .map(|(rank0, f)| (f.col, rank0))
            .collect();
        by_col.sort_by_key(|&(col, _)| col);
        for pair in by_col.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Input(format!(
                    "duplicate feature column {}",
                    pair[0].0
                )));
            }
        }
        Ok(FeatureSet {
            word: word.into(),
            ranked,
            by_col,
        })
    }

    /// Build from unordered `(col, weight)` pairs, ranking by descending
    /// weight with ties broken by ascending column id.
    pub fn from_weights(word: impl Into<String>, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        Self::from_ranked(
            word,
            pairs
                .into_iter()
                .map(|(col, weight)| RankedFeature { col, weight })
                .collect(),
        )
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn features(&self) -> &[RankedFeature] {
        &self.ranked
    }

    /// 1-based rank and weight of a column, if present.
    pub fn rank_weight(&self, col: usize) -> Option<(usize, f64)> {
        self.by_col
            .binary_search_by_key(&col, |&(c, _)| c)
            .ok()
            .map(|i| {
                let (_, rank0) = self.by_col[i];
                (rank0 + 1, self.ranked[rank0].weight)
            })
    }

    pub fn contains(&self, col: usize) -> bool {
        self.rank_weight(col).is_some()
    }

    pub fn total_weight(&self) -> f64 {
        self.ranked.iter().map(|f| f.weight).sum()
    }

    /// Keep only the `max_f` highest-ranking features.
    pub fn truncated(&self, max_f: usize) -> FeatureSet {
        if self.ranked.len() <= max_f {
            return self.clone();
        }
        FeatureSet::from_ranked(self.word.clone(), self.ranked[..max_f].to_vec())
            .expect("prefix of a valid ranking is valid")
    }
}

/// Extract the ranked feature set of `word` from its PPMI row, truncated to
/// `max_f` entries when given. Ties in weight are ordered by ascending
/// context-key order (which equals ascending column id, since columns are
/// stored in canonical key order).
pub fn row_features(matrix: &PpmiMatrix, word: &str, max_f: Option<usize>) -> Result<FeatureSet> {
    let row = matrix.vocabulary().require(word)?;
    let mut pairs: Vec<(usize, f64)> = matrix.row(row).to_vec();
    pairs.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| matrix.context_keys()[a.0].cmp(&matrix.context_keys()[b.0]))
    });
    if let Some(cap) = max_f {
        pairs.truncate(cap);
    }
    FeatureSet::from_ranked(
        word,
        pairs
            .into_iter()
            .map(|(col, weight)| RankedFeature { col, weight })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vsm::ppmi::PpmiMatrix;
    use crate::vsm::vocab::{ContextKey, PosClass, Side, Vocabulary};

    fn ppmi_row(weights: &[(usize, f64)], cols: usize) -> PpmiMatrix {
        let vocab = Vocabulary::new(["w"]).unwrap();
        let keys = (0..cols)
            .map(|j| ContextKey::new(format!("c{j}"), Side::Left, PosClass::Any))
            .collect();
        let mut row = weights.to_vec();
        row.sort_by_key(|&(c, _)| c);
        PpmiMatrix::from_parts(vocab, keys, vec![row]).unwrap()
    }

    #[test]
    fn ranked_by_descending_weight() {
        let m = ppmi_row(&[(0, 0.5), (1, 0.9)], 2);
        let fs = row_features(&m, "w", None).unwrap();
        assert_eq!(fs.features()[0].col, 1);
        assert_eq!(fs.features()[1].col, 0);
        assert_eq!(fs.rank_weight(1), Some((1, 0.9)));
        assert_eq!(fs.rank_weight(0), Some((2, 0.5)));
    }

    #[test]
    fn max_f_truncates() {
        let m = ppmi_row(&[(0, 0.5), (1, 0.9)], 2);
        let fs = row_features(&m, "w", Some(1)).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs.features()[0].col, 1);
    }

    #[test]
    fn empty_row_gives_empty_set() {
        let m = ppmi_row(&[], 2);
        let fs = row_features(&m, "w", None).unwrap();
        assert!(fs.is_empty());
    }

    #[test]
    fn ties_broken_by_context_key_order() {
        let m = ppmi_row(&[(2, 0.7), (0, 0.7), (1, 0.7)], 3);
        let fs = row_features(&m, "w", None).unwrap();
        let order: Vec<usize> = fs.features().iter().map(|f| f.col).collect();
        assert_eq!(order, vec![0, 1, 2]);
        // stable under repetition
        let again = row_features(&m, "w", None).unwrap();
        let order2: Vec<usize> = again.features().iter().map(|f| f.col).collect();
        assert_eq!(order, order2);
    }

    #[test]
    fn unknown_word_is_a_lookup_error() {
        let m = ppmi_row(&[], 1);
        assert!(row_features(&m, "nope", None).is_err());
    }

    #[test]
    fn truncation_never_grows() {
        let fs = FeatureSet::from_weights("w", vec![(0, 3.0), (1, 2.0), (2, 1.0)]).unwrap();
        for cap in 0..5 {
            assert!(fs.truncated(cap).len() <= fs.len());
            assert!(fs.truncated(cap).len() <= cap.max(0));
        }
    }
}
