//! TSV loaders and writers for labeled and rated pair files.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::vsm::io::write_atomic;

use super::{LabeledPair, RatedPair};

/// Expected class sizes of a known dataset, checked on request at load
/// time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetProfile {
    pub total: usize,
    pub ones: usize,
    pub zeros: usize,
}

/// 3,772 pairs: 1,068 entailing, 2,704 not.
pub const KDSZ_PROFILE: DatasetProfile = DatasetProfile {
    total: 3772,
    ones: 1068,
    zeros: 2704,
};

/// 2,770 pairs, class-balanced.
pub const BBDS_PROFILE: DatasetProfile = DatasetProfile {
    total: 2770,
    ones: 1385,
    zeros: 1385,
};

/// Check a loaded dataset against a published profile.
pub fn validate_profile(pairs: &[LabeledPair], expected: &DatasetProfile) -> Result<()> {
    let ones = pairs.iter().filter(|p| p.label == 1).count();
    let zeros = pairs.len() - ones;
    if pairs.len() != expected.total || ones != expected.ones || zeros != expected.zeros {
        return Err(Error::Input(format!(
            "dataset profile mismatch: have {} pairs ({ones} ones / {zeros} zeros), \
             expected {} ({} / {})",
            pairs.len(),
            expected.total,
            expected.ones,
            expected.zeros
        )));
    }
    Ok(())
}

/// Load `a<TAB>b<TAB>label<TAB>relation_id?` lines. Blank lines and `#`
/// comments are skipped; anything else malformed is an error with its line
/// number.
pub fn load_pairs(path: &Path) -> Result<Vec<LabeledPair>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut pairs = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        let text = line.trim_end_matches(['\r', '\n']);
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(parse_err(format!(
                "expected 3 or 4 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let label = match fields[2] {
            "0" => 0,
            "1" => 1,
            other => return Err(parse_err(format!("label must be 0 or 1, got {other}"))),
        };
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(parse_err("empty term".into()));
        }
        let mut pair = LabeledPair::new(fields[0], fields[1], label);
        if let Some(rel) = fields.get(3) {
            if !rel.is_empty() {
                pair = pair.with_relation(*rel);
            }
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

pub fn save_pairs(path: &Path, pairs: &[LabeledPair]) -> Result<()> {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&p.a);
        out.push('\t');
        out.push_str(&p.b);
        out.push('\t');
        out.push_str(if p.label == 1 { "1" } else { "0" });
        if let Some(rel) = &p.relation_id {
            out.push('\t');
            out.push_str(rel);
        }
        out.push('\n');
    }
    write_atomic(path, &out)
}

/// Load `a<TAB>b<TAB>subcategory_id<TAB>rating` lines.
pub fn load_rated_pairs(path: &Path) -> Result<Vec<RatedPair>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut pairs = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        let text = line.trim_end_matches(['\r', '\n']);
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 4 {
            return Err(parse_err(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let rating: f64 = fields[3]
            .parse()
            .map_err(|_| parse_err(format!("bad rating: {}", fields[3])))?;
        pairs.push(RatedPair {
            a: fields[0].to_owned(),
            b: fields[1].to_owned(),
            subcategory_id: fields[2].to_owned(),
            rating,
        });
    }
    Ok(pairs)
}

pub fn save_rated_pairs(path: &Path, pairs: &[RatedPair]) -> Result<()> {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            p.a, p.b, p.subcategory_id, p.rating
        ));
    }
    write_atomic(path, &out)
}
