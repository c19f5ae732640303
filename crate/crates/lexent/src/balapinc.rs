//! The balAPinc asymmetric similarity measure and its threshold classifier.
//!
//! `balAPinc(u, v) = sqrt(APinc(u, v) * LIN(u, v))`, where APinc is an
//! average-precision-style inclusion score over the ranked feature set of
//! `u` and LIN is a weight-overlap similarity. Scores a word pair by the
//! degree to which the contexts of `u` are included among the contexts
//! of `v`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::eval::metrics::{weighted_f, ConfusionMatrix};
use crate::eval::PairScorer;
use crate::par;
use crate::vsm::{row_features, FeatureSet, PpmiMatrix};

/// Scoring and classification parameters: the per-word feature cap and the
/// decision threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalapincParams {
    pub max_f: Option<usize>,
    pub t: f64,
}

impl BalapincParams {
    pub fn new(max_f: Option<usize>, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Parameter(format!(
                "threshold T must lie in [0, 1], got {t}"
            )));
        }
        Ok(BalapincParams { max_f, t })
    }
}

/// A scored word pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScore {
    pub a: String,
    pub b: String,
    pub score: f64,
}

/// Normalized rank importance of feature column `col` in `fw`:
/// `1 - rank/(|fw| + 1)` when present, 0 otherwise.
pub fn rel(col: usize, fw: &FeatureSet) -> f64 {
    match fw.rank_weight(col) {
        Some((rank, _)) => 1.0 - rank as f64 / (fw.len() as f64 + 1.0),
        None => 0.0,
    }
}

/// Average-precision-style inclusion of `fu`'s ranked features in `fv`.
/// Returns 0 when `fu` is empty.
pub fn apinc(fu: &FeatureSet, fv: &FeatureSet) -> f64 {
    if fu.is_empty() {
        return 0.0;
    }
    let mut included = 0usize;
    let mut sum = 0.0;
    for (idx, feature) in fu.features().iter().enumerate() {
        let r = idx + 1;
        if fv.contains(feature.col) {
            included += 1;
            // p(r) * rel(f_ur, fv); features absent from fv contribute 0
            sum += (included as f64 / r as f64) * rel(feature.col, fv);
        }
    }
    sum / fu.len() as f64
}

/// Weight-overlap similarity: shared weight mass over total weight mass.
/// Returns 0 when both sets are empty.
pub fn lin(fu: &FeatureSet, fv: &FeatureSet) -> f64 {
    let denom = fu.total_weight() + fv.total_weight();
    if denom == 0.0 {
        return 0.0;
    }
    let (small, large) = if fu.len() <= fv.len() {
        (fu, fv)
    } else {
        (fv, fu)
    };
    let mut shared = 0.0;
    for feature in small.features() {
        if let Some((_, w_other)) = large.rank_weight(feature.col) {
            shared += feature.weight + w_other;
        }
    }
    shared / denom
}

/// Geometric mean of [`apinc`] and [`lin`].
pub fn balapinc(fu: &FeatureSet, fv: &FeatureSet) -> f64 {
    (apinc(fu, fv) * lin(fu, fv)).sqrt()
}

/// 1 (entails) iff `score >= T`; the strict `score < T` case is class 0.
pub fn classify(score: f64, params: &BalapincParams) -> u8 {
    u8::from(score >= params.t)
}

/// Choose the threshold maximizing the weighted F-measure. Candidates are
/// the midpoints between consecutive distinct scores plus one sentinel
/// below the minimum and one above the maximum; ties go to the smallest
/// candidate.
pub fn tune_threshold(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Input(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if !labels.contains(&0) || !labels.contains(&1) {
        return Err(Error::Training(
            "threshold tuning needs at least one example of each class".into(),
        ));
    }

    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();

    let mut candidates = Vec::with_capacity(distinct.len() + 1);
    candidates.push(distinct[0] - 1.0);
    for pair in distinct.windows(2) {
        candidates.push((pair[0] + pair[1]) / 2.0);
    }
    candidates.push(distinct[distinct.len() - 1] + 1.0);

    let mut best_t = candidates[0];
    let mut best_f = f64::NEG_INFINITY;
    for &t in &candidates {
        let mut confusion = ConfusionMatrix::default();
        for (&score, &label) in scores.iter().zip(labels) {
            confusion.add(label, u8::from(score >= t));
        }
        let f = weighted_f(&confusion);
        if f > best_f {
            best_f = f;
            best_t = t;
        }
    }
    Ok(best_t)
}

/// Feature sets precomputed for a word list under one `max_f` cap. Words
/// absent from the matrix get the empty set, which scores 0 against
/// everything.
#[derive(Debug, Clone)]
pub struct FeatureCache {
    sets: HashMap<String, FeatureSet>,
    max_f: Option<usize>,
}

impl FeatureCache {
    pub fn build<'a>(
        matrix: &PpmiMatrix,
        words: impl IntoIterator<Item = &'a str>,
        max_f: Option<usize>,
    ) -> Self {
        let mut unique: Vec<&str> = words.into_iter().collect();
        unique.sort_unstable();
        unique.dedup();
        let sets = par::map_slice(&unique, |word| {
            row_features(matrix, word, max_f)
                .unwrap_or_else(|_| FeatureSet::from_ranked(*word, Vec::new()).unwrap())
        });
        FeatureCache {
            sets: unique.into_iter().map(str::to_owned).zip(sets).collect(),
            max_f,
        }
    }

    /// Every vocabulary row of the matrix.
    pub fn build_full(matrix: &PpmiMatrix, max_f: Option<usize>) -> Self {
        let words: Vec<&str> = matrix.vocabulary().iter().map(|(_, t)| t).collect();
        Self::build(matrix, words, max_f)
    }

    pub fn max_f(&self) -> Option<usize> {
        self.max_f
    }

    /// Derive a cache with a (tighter) feature cap applied to every set.
    pub fn truncated(&self, max_f: Option<usize>) -> FeatureCache {
        match max_f {
            None => self.clone(),
            Some(cap) => FeatureCache {
                sets: self
                    .sets
                    .iter()
                    .map(|(w, fs)| (w.clone(), fs.truncated(cap)))
                    .collect(),
                max_f: Some(cap),
            },
        }
    }

    pub fn get(&self, word: &str) -> Option<&FeatureSet> {
        self.sets.get(word)
    }

    fn empty() -> FeatureSet {
        FeatureSet::from_ranked("", Vec::new()).unwrap()
    }

    /// balAPinc of a pair, with the empty-set convention for missing words.
    pub fn score(&self, a: &str, b: &str) -> f64 {
        let empty = Self::empty();
        let fu = self.get(a).unwrap_or(&empty);
        let fv = self.get(b).unwrap_or(&empty);
        balapinc(fu, fv)
    }
}

/// Score many pairs against one cache, in input order.
pub fn score_pairs(cache: &FeatureCache, pairs: &[(String, String)]) -> Vec<PairScore> {
    par::map_slice(pairs, |(a, b)| PairScore {
        a: a.clone(),
        b: b.clone(),
        score: cache.score(a, b),
    })
}

/// Write `a<TAB>b<TAB>score<TAB>label?` lines with the scoring parameters
/// echoed in a leading comment line.
pub fn write_scored_pairs(
    path: &std::path::Path,
    rows: &[(PairScore, Option<u8>)],
    params_line: &str,
) -> Result<()> {
    let mut out = format!("# {params_line}\n");
    for (pair, label) in rows {
        out.push_str(&format!("{}\t{}\t{:.16e}", pair.a, pair.b, pair.score));
        if let Some(l) = label {
            out.push_str(&format!("\t{l}"));
        }
        out.push('\n');
    }
    crate::vsm::io::write_atomic(path, &out)
}

/// Inverse of [`write_scored_pairs`]; comment lines are skipped.
pub fn read_scored_pairs(path: &std::path::Path) -> Result<Vec<(PairScore, Option<u8>)>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let parse_err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message,
        };
        if fields.len() < 3 || fields.len() > 4 {
            return Err(parse_err(format!(
                "expected 3 or 4 fields, found {}",
                fields.len()
            )));
        }
        let score: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("bad score: {}", fields[2])))?;
        let label = match fields.get(3) {
            None => None,
            Some(&"0") => Some(0),
            Some(&"1") => Some(1),
            Some(other) => return Err(parse_err(format!("label must be 0 or 1, got {other}"))),
        };
        rows.push((
            PairScore {
                a: fields[0].to_owned(),
                b: fields[1].to_owned(),
                score,
            },
            label,
        ));
    }
    Ok(rows)
}

/// A tuned balAPinc classifier over a shared feature cache.
#[derive(Debug, Clone)]
pub struct BalapincScorer {
    cache: Arc<FeatureCache>,
    params: BalapincParams,
}

impl BalapincScorer {
    pub fn new(cache: Arc<FeatureCache>, params: BalapincParams) -> Self {
        BalapincScorer { cache, params }
    }

    pub fn params(&self) -> BalapincParams {
        self.params
    }
}

impl PairScorer for BalapincScorer {
    fn score(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.cache.score(a, b))
    }

    fn classify(&self, score: f64) -> u8 {
        classify(score, &self.params)
    }
}
