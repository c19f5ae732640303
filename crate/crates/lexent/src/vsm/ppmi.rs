//! Positive pointwise mutual information weighting.

use crate::error::{Error, Result};

use super::count::CoMatrix;
use super::vocab::{ContextKey, Vocabulary};

/// Sparse nonnegative PPMI-weighted word-context matrix. Cells whose PMI
/// is not positive are absent.
#[derive(Debug, Clone)]
pub struct PpmiMatrix {
    rows: Vocabulary,
    cols: Vec<ContextKey>,
    entries: Vec<Vec<(usize, f64)>>,
}

impl PpmiMatrix {
    pub(crate) fn from_parts(
        rows: Vocabulary,
        cols: Vec<ContextKey>,
        entries: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self> {
        if entries.len() != rows.len() {
            return Err(Error::Input(format!(
                "row entry count {} does not match vocabulary size {}",
                entries.len(),
                rows.len()
            )));
        }
        for row in &entries {
            for &(col, weight) in row {
                if col >= cols.len() {
                    return Err(Error::Input(format!(
                        "column id {col} out of range ({} columns)",
                        cols.len()
                    )));
                }
                if weight <= 0.0 || !weight.is_finite() {
                    return Err(Error::Input(format!(
                        "stored PPMI weight must be positive and finite, got {weight}"
                    )));
                }
            }
        }
        Ok(PpmiMatrix {
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

    /// Sorted `(column, weight)` pairs of one row.
    pub fn row(&self, row: usize) -> &[(usize, f64)] {
        &self.entries[row]
    }

    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.entries[row]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map(|i| self.entries[row][i].1)
            .unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    /// Fraction of stored entries over all cells.
    pub fn density(&self) -> f64 {
        let cells = self.n_rows() * self.n_cols();
        if cells == 0 {
            0.0
        } else {
            self.nnz() as f64 / cells as f64
        }
    }

    pub(crate) fn row_entries(&self) -> &[Vec<(usize, f64)>] {
        &self.entries
    }
}

/// Reweight raw counts with PPMI, using the natural logarithm:
/// `x = max(0, ln(p(w,c) / (p(w) p(c))))` with probabilities estimated as
/// relative frequencies. Cells with zero counts stay absent.
pub fn ppmi(counts: &CoMatrix) -> Result<PpmiMatrix> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::Input(
            "cannot compute PPMI of an all-zero co-occurrence matrix".into(),
        ));
    }
    let total = total as f64;

    let mut row_sums = vec![0.0f64; counts.n_rows()];
    let mut col_sums = vec![0.0f64; counts.n_cols()];
    for (row, row_sum) in row_sums.iter_mut().enumerate() {
        for &(col, c) in counts.row(row) {
            *row_sum += c as f64;
            col_sums[col] += c as f64;
        }
    }

    let entries = (0..counts.n_rows())
        .map(|row| {
            counts
                .row(row)
                .iter()
                .filter_map(|&(col, c)| {
                    // pmi = ln(p_ij / (p_i* p_*j)) = ln(f_ij * total / (row * col))
                    let pmi = ((c as f64 * total) / (row_sums[row] * col_sums[col])).ln();
                    (pmi > 0.0).then_some((col, pmi))
                })
                .collect()
        })
        .collect();

    PpmiMatrix::from_parts(
        counts.vocabulary().clone(),
        counts.context_keys().to_vec(),
        entries,
    )
}
