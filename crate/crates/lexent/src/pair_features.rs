//! Supervised feature vectors for word pairs.
//!
//! ConVecs concatenates the two unit-normalized embedding rows (2k values).
//! SimDiffs measures both words against a fixed reference set in a domain
//! space and a function space and emits the four blocks of cosine
//! differences `[S1 | S2 | S3 | S4]`, each ordered by the reference list
//! (4 * |R| values).

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::par;
use crate::vsm::io::write_atomic;
use crate::vsm::Embedding;

/// Ordered reference word list anchoring SimDiffs feature positions.
#[derive(Debug, Clone)]
pub struct ReferenceSet {
    words: Vec<String>,
}

impl ReferenceSet {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for w in &words {
            if !seen.insert(w.as_str()) {
                return Err(Error::Input(format!("duplicate reference word: {w}")));
            }
        }
        Ok(ReferenceSet { words })
    }

    /// Load one word per line; blank lines and `#` comments are skipped.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut words = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            words.push(word.to_owned());
        }
        ReferenceSet::new(words)
    }

    /// Drop reference words missing from any of the given embeddings,
    /// returning the retained set and the dropped words. Keeps block
    /// sizes consistent across all pairs.
    pub fn restricted_to(&self, embeddings: &[&Embedding]) -> (ReferenceSet, Vec<String>) {
        let (kept, dropped): (Vec<String>, Vec<String>) = self
            .words
            .iter()
            .cloned()
            .partition(|w| embeddings.iter().all(|e| e.vocabulary().id(w).is_some()));
        (ReferenceSet { words: kept }, dropped)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Which pair representation a feature vector uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureScheme {
    ConVecs,
    SimDiffs,
}

impl fmt::Display for FeatureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureScheme::ConVecs => "convecs",
            FeatureScheme::SimDiffs => "simdiffs",
        })
    }
}

impl std::str::FromStr for FeatureScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convecs" => Ok(FeatureScheme::ConVecs),
            "simdiffs" => Ok(FeatureScheme::SimDiffs),
            other => Err(Error::Parameter(format!("unknown feature scheme: {other}"))),
        }
    }
}

/// Feature vector of one word pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFeatureVector {
    pub a: String,
    pub b: String,
    pub values: Vec<f64>,
    pub scheme: FeatureScheme,
}

/// Concatenation of the unit-normalized rows of `a` and `b` (zero rows pass
/// through as zeros). Length is `2k`.
pub fn convecs_features(emb: &Embedding, a: &str, b: &str) -> Result<PairFeatureVector> {
    let ia = emb.vocabulary().require(a)?;
    let ib = emb.vocabulary().require(b)?;
    let mut values = Vec::with_capacity(2 * emb.k());
    values.extend_from_slice(emb.unit_row(ia));
    values.extend_from_slice(emb.unit_row(ib));
    Ok(PairFeatureVector {
        a: a.to_owned(),
        b: b.to_owned(),
        values,
        scheme: FeatureScheme::ConVecs,
    })
}

/// Cosines of a word against every reference word, in reference order.
fn reference_sims(emb: &Embedding, word_row: &[f64], refs: &ReferenceSet) -> Result<Vec<f64>> {
    debug_assert!((norm(word_row) - 1.0).abs() < 1e-9 || norm(word_row) == 0.0);
    refs.words()
        .iter()
        .map(|r| {
            let ir = emb.vocabulary().require(r)?;
            Ok(dot(word_row, emb.unit_row(ir)))
        })
        .collect()
}

/// The four similarity-difference blocks:
/// `S1[r] = sim_d(a,r) - sim_d(b,r)`, `S2[r] = sim_f(a,r) - sim_f(b,r)`,
/// `S3[r] = sim_d(a,r) - sim_f(b,r)`, `S4[r] = sim_f(a,r) - sim_d(b,r)`.
pub fn simdiffs_features(
    dom: &Embedding,
    fun: &Embedding,
    refs: &ReferenceSet,
    a: &str,
    b: &str,
) -> Result<PairFeatureVector> {
    if refs.is_empty() {
        return Err(Error::Input("reference set is empty".into()));
    }
    let ad = dom.vocabulary().require(a)?;
    let bd = dom.vocabulary().require(b)?;
    let af = fun.vocabulary().require(a)?;
    let bf = fun.vocabulary().require(b)?;

    let sim_d_a = reference_sims(dom, dom.unit_row(ad), refs)?;
    let sim_d_b = reference_sims(dom, dom.unit_row(bd), refs)?;
    let sim_f_a = reference_sims(fun, fun.unit_row(af), refs)?;
    let sim_f_b = reference_sims(fun, fun.unit_row(bf), refs)?;

    let m = refs.len();
    let mut values = Vec::with_capacity(4 * m);
    values.extend((0..m).map(|r| sim_d_a[r] - sim_d_b[r]));
    values.extend((0..m).map(|r| sim_f_a[r] - sim_f_b[r]));
    values.extend((0..m).map(|r| sim_d_a[r] - sim_f_b[r]));
    values.extend((0..m).map(|r| sim_f_a[r] - sim_d_b[r]));
    Ok(PairFeatureVector {
        a: a.to_owned(),
        b: b.to_owned(),
        values,
        scheme: FeatureScheme::SimDiffs,
    })
}

/// Everything needed to featurize pairs under one scheme.
#[derive(Debug, Clone)]
pub enum FeatureResources<'a> {
    ConVecs {
        emb: &'a Embedding,
    },
    SimDiffs {
        dom: &'a Embedding,
        fun: &'a Embedding,
        refs: &'a ReferenceSet,
    },
}

impl FeatureResources<'_> {
    pub fn scheme(&self) -> FeatureScheme {
        match self {
            FeatureResources::ConVecs { .. } => FeatureScheme::ConVecs,
            FeatureResources::SimDiffs { .. } => FeatureScheme::SimDiffs,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeatureResources::ConVecs { emb } => 2 * emb.k(),
            FeatureResources::SimDiffs { refs, .. } => 4 * refs.len(),
        }
    }

    pub fn featurize(&self, a: &str, b: &str) -> Result<PairFeatureVector> {
        match self {
            FeatureResources::ConVecs { emb } => convecs_features(emb, a, b),
            FeatureResources::SimDiffs { dom, fun, refs } => {
                simdiffs_features(dom, fun, refs, a, b)
            }
        }
    }
}

/// Pairs that could not be featurized, with the reason.
#[derive(Debug, Clone, Default)]
pub struct SkipReport {
    pub skipped: Vec<(String, String, String)>,
}

impl SkipReport {
    pub fn is_empty(&self) -> bool {
        self.skipped.is_empty()
    }

    pub fn len(&self) -> usize {
        self.skipped.len()
    }
}

/// Featurize every resolvable pair, in input order. Pairs with unknown
/// terms go to the report instead of being dropped silently.
pub fn batch_features(
    pairs: &[(String, String)],
    resources: &FeatureResources,
) -> (Vec<PairFeatureVector>, SkipReport) {
    let results = par::map_slice(pairs, |(a, b)| resources.featurize(a, b));
    let mut vectors = Vec::with_capacity(pairs.len());
    let mut report = SkipReport::default();
    for ((a, b), result) in pairs.iter().zip(results) {
        match result {
            Ok(v) => vectors.push(v),
            Err(e) => report.skipped.push((a.clone(), b.clone(), e.to_string())),
        }
    }
    (vectors, report)
}

/// Write `scheme=<s> dim=<d>` then `a<TAB>b<TAB>label<TAB>v1,...,vd` lines.
pub fn write_features(path: &Path, vectors: &[PairFeatureVector], labels: &[u8]) -> Result<()> {
    if vectors.len() != labels.len() {
        return Err(Error::Input(format!(
            "{} vectors for {} labels",
            vectors.len(),
            labels.len()
        )));
    }
    let (scheme, dim) = match vectors.first() {
        Some(v) => (v.scheme, v.values.len()),
        None => (FeatureScheme::ConVecs, 0),
    };
    let mut out = format!("scheme={scheme} dim={dim}\n");
    for (v, label) in vectors.iter().zip(labels) {
        if v.values.len() != dim {
            return Err(Error::Input(format!(
                "inconsistent feature dimension: {} vs {dim}",
                v.values.len()
            )));
        }
        let joined = v
            .values
            .iter()
            .map(|x| format!("{x:.16e}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!("{}\t{}\t{}\t{}\n", v.a, v.b, label, joined));
    }
    write_atomic(path, &out)
}

/// Inverse of [`write_features`].
pub fn read_features(path: &Path) -> Result<(Vec<PairFeatureVector>, Vec<u8>)> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(line))) => line,
        Some((_, Err(e))) => return Err(Error::io(path.display().to_string(), e)),
        None => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: "empty feature file".into(),
            })
        }
    };
    let mut scheme = None;
    let mut dim = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("scheme", v)) => scheme = v.parse::<FeatureScheme>().ok(),
            Some(("dim", v)) => dim = v.parse::<usize>().ok(),
            _ => {}
        }
    }
    let (scheme, dim) = match (scheme, dim) {
        (Some(s), Some(d)) => (s, d),
        _ => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("bad feature header: {header}"),
            })
        }
    };
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(parse_err(format!(
                "expected 4 fields, found {}",
                fields.len()
            )));
        }
        let label = match fields[2] {
            "0" => 0,
            "1" => 1,
            other => return Err(parse_err(format!("label must be 0 or 1, got {other}"))),
        };
        let values: std::result::Result<Vec<f64>, _> =
            fields[3].split(',').map(str::parse::<f64>).collect();
        let values = values.map_err(|e| parse_err(e.to_string()))?;
        if values.len() != dim {
            return Err(parse_err(format!(
                "expected {dim} values, found {}",
                values.len()
            )));
        }
        vectors.push(PairFeatureVector {
            a: fields[0].to_owned(),
            b: fields[1].to_owned(),
            values,
            scheme,
        });
        labels.push(label);
    }
    Ok((vectors, labels))
}
