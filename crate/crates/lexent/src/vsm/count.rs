//! Sliding-window co-occurrence counting over a tagged corpus.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::par;

use super::corpus::Sentence;
use super::vocab::{ContextKey, PosClass, Side, Vocabulary};

/// Which context tokens become columns.
///
/// `General` keeps every context token, distinguished by side. `Domain`
/// keeps only noun contexts and `Function` only verb contexts; both need a
/// tagged corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextPolicy {
    General,
    Domain,
    Function,
}

impl ContextPolicy {
    fn pos_class(self) -> PosClass {
        match self {
            ContextPolicy::General => PosClass::Any,
            ContextPolicy::Domain => PosClass::Noun,
            ContextPolicy::Function => PosClass::Verb,
        }
    }
}

impl fmt::Display for ContextPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextPolicy::General => "general",
            ContextPolicy::Domain => "domain",
            ContextPolicy::Function => "function",
        })
    }
}

impl std::str::FromStr for ContextPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(ContextPolicy::General),
            "domain" => Ok(ContextPolicy::Domain),
            "function" => Ok(ContextPolicy::Function),
            other => Err(Error::Parameter(format!("unknown context policy: {other}"))),
        }
    }
}

/// Sparse word-context matrix of raw co-occurrence counts. Only nonzero
/// counts are stored; rows are ordered by the vocabulary and columns
/// canonically by [`ContextKey`] order.
#[derive(Debug, Clone)]
pub struct CoMatrix {
    rows: Vocabulary,
    cols: Vec<ContextKey>,
    entries: Vec<Vec<(usize, u64)>>,
}

impl CoMatrix {
    pub(crate) fn from_parts(
        rows: Vocabulary,
        cols: Vec<ContextKey>,
        entries: Vec<Vec<(usize, u64)>>,
    ) -> Result<Self> {
        if entries.len() != rows.len() {
            return Err(Error::Input(format!(
                "row entry count {} does not match vocabulary size {}",
                entries.len(),
                rows.len()
            )));
        }
        for row in &entries {
            for &(col, count) in row {
                if col >= cols.len() {
                    return Err(Error::Input(format!(
                        "column id {col} out of range ({} columns)",
                        cols.len()
                    )));
                }
                if count == 0 {
                    return Err(Error::Input("stored zero count".into()));
                }
            }
        }
        Ok(CoMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.rows
    }

    pub fn context_keys(&self) -> &[ContextKey] {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Sorted `(column, count)` pairs of one row.
    pub fn row(&self, row: usize) -> &[(usize, u64)] {
        &self.entries[row]
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.entries[row]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map(|i| self.entries[row][i].1)
            .unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn total(&self) -> u64 {
        self.entries
            .iter()
            .flat_map(|r| r.iter().map(|&(_, c)| c))
            .sum()
    }
}

/// Tallies reported alongside a counting run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountSummary {
    pub sentences: usize,
    pub tokens: usize,
    /// Matched occurrences of vocabulary terms.
    pub occurrences: usize,
    /// Token positions not covered by any vocabulary occurrence.
    pub oov_tokens: usize,
}

impl CountSummary {
    fn merge(mut self, other: CountSummary) -> CountSummary {
        self.sentences += other.sentences;
        self.tokens += other.tokens;
        self.occurrences += other.occurrences;
        self.oov_tokens += other.oov_tokens;
        self
    }
}

/// Vocabulary terms tokenized for matching, grouped by first token.
struct TermMatcher {
    by_first: HashMap<String, Vec<(usize, Vec<String>)>>,
}

impl TermMatcher {
    fn new(vocab: &Vocabulary) -> Self {
        let mut by_first: HashMap<String, Vec<(usize, Vec<String>)>> = HashMap::new();
        for (id, term) in vocab.iter() {
            let toks: Vec<String> = term.split_whitespace().map(str::to_owned).collect();
            if let Some(first) = toks.first() {
                by_first.entry(first.clone()).or_default().push((id, toks));
            }
        }
        by_first
            .values_mut()
            .for_each(|v| v.sort_by_key(|(id, _)| *id));
        TermMatcher { by_first }
    }

    /// All vocabulary occurrences starting at `start`: `(row id, end)`.
    fn matches_at(&self, words: &[&str], start: usize) -> Vec<(usize, usize)> {
        let Some(cands) = self.by_first.get(words[start]) else {
            return Vec::new();
        };
        let mut found = Vec::new();
        for (id, toks) in cands {
            let end = start + toks.len();
            if end <= words.len() && toks.iter().zip(&words[start..end]).all(|(a, b)| a == b) {
                found.push((*id, end));
            }
        }
        found
    }
}

type PartialCounts = HashMap<(usize, ContextKey), u64>;

fn count_sentence(
    partial: &mut PartialCounts,
    summary: &mut CountSummary,
    matcher: &TermMatcher,
    sentence: &Sentence,
    window: usize,
    policy: ContextPolicy,
) {
    let words: Vec<&str> = sentence.tokens.iter().map(|t| t.word.as_str()).collect();
    let n = words.len();
    summary.sentences += 1;
    summary.tokens += n;
    let mut covered = vec![false; n];

    let pos_class = policy.pos_class();
    for start in 0..n {
        for (row, end) in matcher.matches_at(&words, start) {
            summary.occurrences += 1;
            covered[start..end].iter_mut().for_each(|c| *c = true);

            let left_from = start.saturating_sub(window);
            for (pos, side) in (left_from..start)
                .map(|p| (p, Side::Left))
                .chain((end..(end + window).min(n)).map(|p| (p, Side::Right)))
            {
                let tok = &sentence.tokens[pos];
                let keep = match policy {
                    ContextPolicy::General => true,
                    ContextPolicy::Domain => tok.is_noun(),
                    ContextPolicy::Function => tok.is_verb(),
                };
                if keep {
                    let key = ContextKey::new(tok.word.clone(), side, pos_class);
                    *partial.entry((row, key)).or_insert(0) += 1;
                }
            }
        }
    }
    summary.oov_tokens += covered.iter().filter(|&&c| !c).count();
}

/// Count `(word, context)` co-occurrences within `window` tokens on either
/// side of every vocabulary occurrence. Multi-token vocabulary entries
/// match as n-grams; their window extends from the n-gram boundaries.
///
/// Sentences are sharded and the partial counts merged, so the result is
/// independent of execution order.
pub fn count_cooccurrences(
    corpus: &[Sentence],
    vocab: &Vocabulary,
    window: usize,
    policy: ContextPolicy,
) -> Result<(CoMatrix, CountSummary)> {
    if window == 0 {
        return Err(Error::Parameter("window must be >= 1".into()));
    }
    if policy != ContextPolicy::General {
        for (idx, sentence) in corpus.iter().enumerate() {
            if let Some(tok) = sentence.tokens.iter().find(|t| t.tag.is_none()) {
                return Err(Error::Input(format!(
                    "policy {policy} needs a tagged corpus, but sentence {} has untagged \
                     token {:?} (sentence: {:?})",
                    idx + 1,
                    tok.word,
                    sentence
                        .tokens
                        .iter()
                        .map(|t| t.word.as_str())
                        .collect::<Vec<_>>()
                        .join(" ")
                )));
            }
        }
    }

    let matcher = TermMatcher::new(vocab);
    let (counts, summary) = par::fold_chunks(
        corpus,
        256,
        || (PartialCounts::new(), CountSummary::default()),
        |(mut partial, mut summary), sentence| {
            count_sentence(
                &mut partial,
                &mut summary,
                &matcher,
                sentence,
                window,
                policy,
            );
            (partial, summary)
        },
        |(mut a, sa), (b, sb)| {
            for (key, count) in b {
                *a.entry(key).or_insert(0) += count;
            }
            (a, sa.merge(sb))
        },
    );

    // canonical column order, independent of sharding
    let mut keys: Vec<ContextKey> = counts.keys().map(|(_, k)| k.clone()).collect();
    keys.sort();
    keys.dedup();
    let col_index: HashMap<&ContextKey, usize> =
        keys.iter().enumerate().map(|(i, k)| (k, i)).collect();

    let mut entries: Vec<Vec<(usize, u64)>> = vec![Vec::new(); vocab.len()];
    for ((row, key), count) in &counts {
        entries[*row].push((col_index[key], *count));
    }
    entries.iter_mut().for_each(|r| r.sort_by_key(|&(c, _)| c));

    let matrix = CoMatrix::from_parts(vocab.clone(), keys, entries)?;
    Ok((matrix, summary))
}
