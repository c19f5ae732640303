//! Dense embeddings `U_k diag(sigma^p)` and cosine similarity.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Mat};

use super::svd::SvdFactors;
use super::vocab::Vocabulary;

/// Which context policy the underlying matrix was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    General,
    Domain,
    Function,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::General => "general",
            SpaceKind::Domain => "domain",
            SpaceKind::Function => "function",
        })
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(SpaceKind::General),
            "domain" => Ok(SpaceKind::Domain),
            "function" => Ok(SpaceKind::Function),
            other => Err(Error::Parameter(format!("unknown space kind: {other}"))),
        }
    }
}

/// Dense row embedding of a vocabulary: row i is `U_k[i, :]` scaled
/// elementwise by `sigma^p`. Unit-normalized rows are precomputed for
/// cosine queries; all-zero rows stay zero.
#[derive(Debug, Clone)]
pub struct Embedding {
    space: SpaceKind,
    rows: Vocabulary,
    vectors: Mat,
    unit: Mat,
    k: usize,
    p: f64,
}

impl Embedding {
    pub fn from_vectors(space: SpaceKind, rows: Vocabulary, vectors: Mat, p: f64) -> Result<Self> {
        if vectors.rows() != rows.len() {
            return Err(Error::Input(format!(
                "embedding has {} vectors for {} vocabulary terms",
                vectors.rows(),
                rows.len()
            )));
        }
        if vectors.has_non_finite() {
            return Err(Error::Numerical(
                "embedding contains non-finite values".into(),
            ));
        }
        let k = vectors.cols();
        let mut unit = vectors.clone();
        for i in 0..unit.rows() {
            let n = norm(unit.row(i));
            if n > 0.0 {
                unit.row_mut(i).iter_mut().for_each(|v| *v /= n);
            }
        }
        Ok(Embedding {
            space,
            rows,
            vectors,
            unit,
            k,
            p,
        })
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn row(&self, id: usize) -> &[f64] {
        self.vectors.row(id)
    }

    /// Unit-normalized row (all-zero when the raw row is all-zero).
    pub fn unit_row(&self, id: usize) -> &[f64] {
        self.unit.row(id)
    }

    pub fn vector(&self, term: &str) -> Result<&[f64]> {
        Ok(self.row(self.rows.require(term)?))
    }

    /// Cosine of two rows by id.
    pub fn cosine_rows(&self, a: usize, b: usize) -> f64 {
        dot(self.unit_row(a), self.unit_row(b))
    }
}

/// Scale the left factors by `sigma^p`. Values of `p` outside `[0, 1]` are
/// accepted; callers that care should warn (the CLI does).
pub fn project(
    factors: &SvdFactors,
    p: f64,
    space: SpaceKind,
    rows: Vocabulary,
) -> Result<Embedding> {
    if !p.is_finite() {
        return Err(Error::Parameter(format!("p must be finite, got {p}")));
    }
    if factors.u().rows() != rows.len() {
        return Err(Error::Input(format!(
            "factors have {} rows for {} vocabulary terms",
            factors.u().rows(),
            rows.len()
        )));
    }
    let scales: Vec<f64> = factors.sigma().iter().map(|s| s.powf(p)).collect();
    let mut vectors = factors.u().clone();
    for i in 0..vectors.rows() {
        for (v, s) in vectors.row_mut(i).iter_mut().zip(&scales) {
            *v *= s;
        }
    }
    Embedding::from_vectors(space, rows, vectors, p)
}

/// Cosine similarity of two terms' embedding rows, 0 when either vector is
/// all-zero. Unknown terms fail with a lookup error naming the term.
pub fn cosine(emb: &Embedding, a: &str, b: &str) -> Result<f64> {
    let ia = emb.vocabulary().require(a)?;
    let ib = emb.vocabulary().require(b)?;
    Ok(emb.cosine_rows(ia, ib))
}
