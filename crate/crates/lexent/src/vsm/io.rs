//! Text file formats for matrices, vocabularies and embeddings.
//!
//! A matrix bundle is three files sharing a prefix: `<prefix>.matrix.tsv`
//! (header `rows=<n> cols=<m> kind=<counts|ppmi> log=<e>`, then sorted
//! `row<TAB>col<TAB>value` triples), `<prefix>.vocab.txt` (one term per
//! line) and `<prefix>.contexts.txt` (one `token#side#pos` key per line).
//! Embeddings are single files with a `k=<k> p=<p> space=<kind>` header
//! and one `term<TAB>v1<TAB>...<TAB>vk` row per line, 17 significant
//! digits. All writes go through a temp file and a rename.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Mat;

use super::count::CoMatrix;
use super::embed::{Embedding, SpaceKind};
use super::ppmi::PpmiMatrix;
use super::vocab::{ContextKey, Vocabulary};

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    let io_err = |e| Error::io(path.display().to_string(), e);
    let mut file = File::create(&tmp).map_err(io_err)?;
    file.write_all(content.as_bytes()).map_err(io_err)?;
    file.sync_all().map_err(io_err)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// The three file paths of a matrix bundle.
pub fn bundle_paths(prefix: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let with_suffix = |suffix: &str| {
        let mut name = prefix.file_name().unwrap_or_default().to_os_string();
        name.push(suffix);
        prefix.with_file_name(name)
    };
    (
        with_suffix(".matrix.tsv"),
        with_suffix(".vocab.txt"),
        with_suffix(".contexts.txt"),
    )
}

pub fn write_vocabulary(path: &Path, vocab: &Vocabulary) -> Result<()> {
    let mut out = String::new();
    for (_, term) in vocab.iter() {
        out.push_str(term);
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut terms = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        let term = line.trim();
        if term.is_empty() || term.starts_with('#') {
            continue;
        }
        terms.push(term.to_owned());
    }
    Vocabulary::new(terms)
}

pub fn write_context_keys(path: &Path, keys: &[ContextKey]) -> Result<()> {
    let mut out = String::new();
    for key in keys {
        out.push_str(&key.to_string());
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn read_context_keys(path: &Path) -> Result<Vec<ContextKey>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut keys = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        keys.push(ContextKey::parse(text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message: e.to_string(),
        })?);
    }
    Ok(keys)
}

fn parse_header(line: &str, path: &Path) -> Result<(usize, usize, String)> {
    let mut rows = None;
    let mut cols = None;
    let mut kind = None;
    let mut log = None;
    for field in line.split_whitespace() {
        match field.split_once('=') {
            Some(("rows", v)) => rows = v.parse::<usize>().ok(),
            Some(("cols", v)) => cols = v.parse::<usize>().ok(),
            Some(("kind", v)) => kind = Some(v.to_owned()),
            Some(("log", v)) => log = Some(v.to_owned()),
            _ => {}
        }
    }
    match (rows, cols, kind, log.as_deref()) {
        (Some(r), Some(c), Some(k), Some("e")) => Ok((r, c, k)),
        _ => Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("bad matrix header: {line}"),
        }),
    }
}

fn write_matrix_file<V: std::fmt::Display>(
    path: &Path,
    n_rows: usize,
    n_cols: usize,
    kind: &str,
    rows: impl Iterator<Item = (usize, usize, V)>,
) -> Result<()> {
    let mut out = format!("rows={n_rows} cols={n_cols} kind={kind} log=e\n");
    for (r, c, v) in rows {
        out.push_str(&format!("{r}\t{c}\t{v}\n"));
    }
    write_atomic(path, &out)
}

type MatrixLines = (usize, usize, String, Vec<(usize, usize, String)>);

fn read_matrix_lines(path: &Path) -> Result<MatrixLines> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "empty matrix file".into(),
        })
        .and_then(|(i, l)| {
            l.map(|l| (i, l))
                .map_err(|e| Error::io(path.display().to_string(), e))
        })?;
    let (n_rows, n_cols, kind) = parse_header(&header, path)?;
    let mut triples = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let parse_err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            message,
        };
        let row = parts
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| parse_err("bad row id".into()))?;
        let col = parts
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| parse_err("bad column id".into()))?;
        let value = parts
            .next()
            .ok_or_else(|| parse_err("missing value".into()))?;
        if row >= n_rows || col >= n_cols {
            return Err(parse_err(format!(
                "cell ({row}, {col}) outside {n_rows}x{n_cols}"
            )));
        }
        triples.push((row, col, value.to_owned()));
    }
    Ok((n_rows, n_cols, kind, triples))
}

pub fn write_co_matrix(prefix: &Path, matrix: &CoMatrix) -> Result<()> {
    let (mpath, vpath, cpath) = bundle_paths(prefix);
    write_matrix_file(
        &mpath,
        matrix.n_rows(),
        matrix.n_cols(),
        "counts",
        (0..matrix.n_rows()).flat_map(|r| matrix.row(r).iter().map(move |&(c, v)| (r, c, v))),
    )?;
    write_vocabulary(&vpath, matrix.vocabulary())?;
    write_context_keys(&cpath, matrix.context_keys())
}

pub fn read_co_matrix(prefix: &Path) -> Result<CoMatrix> {
    let (mpath, vpath, cpath) = bundle_paths(prefix);
    let vocab = read_vocabulary(&vpath)?;
    let keys = read_context_keys(&cpath)?;
    let (n_rows, n_cols, kind, triples) = read_matrix_lines(&mpath)?;
    if kind != "counts" {
        return Err(Error::Input(format!(
            "expected kind=counts in {}, found {kind}",
            mpath.display()
        )));
    }
    if n_rows != vocab.len() || n_cols != keys.len() {
        return Err(Error::Input(format!(
            "matrix header {n_rows}x{n_cols} does not match vocabulary ({}) / contexts ({})",
            vocab.len(),
            keys.len()
        )));
    }
    let mut entries = vec![Vec::new(); n_rows];
    for (r, c, v) in triples {
        let count = v
            .parse::<u64>()
            .map_err(|_| Error::Input(format!("bad count at ({r}, {c}): {v}")))?;
        entries[r].push((c, count));
    }
    entries.iter_mut().for_each(|r| r.sort_by_key(|&(c, _)| c));
    CoMatrix::from_parts(vocab, keys, entries)
}

pub fn write_ppmi_matrix(prefix: &Path, matrix: &PpmiMatrix) -> Result<()> {
    let (mpath, vpath, cpath) = bundle_paths(prefix);
    write_matrix_file(
        &mpath,
        matrix.n_rows(),
        matrix.n_cols(),
        "ppmi",
        (0..matrix.n_rows()).flat_map(|r| {
            matrix
                .row(r)
                .iter()
                .map(move |&(c, v)| (r, c, format_f64(v)))
        }),
    )?;
    write_vocabulary(&vpath, matrix.vocabulary())?;
    write_context_keys(&cpath, matrix.context_keys())
}

pub fn read_ppmi_matrix(prefix: &Path) -> Result<PpmiMatrix> {
    let (mpath, vpath, cpath) = bundle_paths(prefix);
    let vocab = read_vocabulary(&vpath)?;
    let keys = read_context_keys(&cpath)?;
    let (n_rows, n_cols, kind, triples) = read_matrix_lines(&mpath)?;
    if kind != "ppmi" {
        return Err(Error::Input(format!(
            "expected kind=ppmi in {}, found {kind}",
            mpath.display()
        )));
    }
    if n_rows != vocab.len() || n_cols != keys.len() {
        return Err(Error::Input(format!(
            "matrix header {n_rows}x{n_cols} does not match vocabulary ({}) / contexts ({})",
            vocab.len(),
            keys.len()
        )));
    }
    let mut entries = vec![Vec::new(); n_rows];
    for (r, c, v) in triples {
        let weight = v
            .parse::<f64>()
            .map_err(|_| Error::Input(format!("bad weight at ({r}, {c}): {v}")))?;
        entries[r].push((c, weight));
    }
    entries.iter_mut().for_each(|r| r.sort_by_key(|&(c, _)| c));
    PpmiMatrix::from_parts(vocab, keys, entries)
}

pub fn write_embedding(path: &Path, emb: &Embedding) -> Result<()> {
    let mut out = format!("k={} p={} space={}\n", emb.k(), emb.p(), emb.space());
    for (id, term) in emb.vocabulary().iter() {
        out.push_str(term);
        for v in emb.row(id) {
            out.push('\t');
            out.push_str(&format_f64(*v));
        }
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn read_embedding(path: &Path) -> Result<Embedding> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(line))) => line,
        Some((_, Err(e))) => return Err(Error::io(path.display().to_string(), e)),
        None => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: "empty embedding file".into(),
            })
        }
    };
    let mut k = None;
    let mut p = None;
    let mut space = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("k", v)) => k = v.parse::<usize>().ok(),
            Some(("p", v)) => p = v.parse::<f64>().ok(),
            Some(("space", v)) => space = SpaceKind::from_str(v).ok(),
            _ => {}
        }
    }
    let (k, p, space) = match (k, p, space) {
        (Some(k), Some(p), Some(s)) => (k, p, s),
        _ => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("bad embedding header: {header}"),
            })
        }
    };

    let mut terms = Vec::new();
    let mut vectors = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let term = parts.next().unwrap_or("").to_owned();
        let values: std::result::Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
        let values = values.map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        if values.len() != k {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                message: format!("expected {k} components, found {}", values.len()),
            });
        }
        terms.push(term);
        vectors.push(values);
    }
    Embedding::from_vectors(space, Vocabulary::new(terms)?, Mat::from_rows(vectors), p)
}
