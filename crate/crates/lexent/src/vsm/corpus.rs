//! Tagged-corpus parsing: one sentence per line, tokens as `word_TAG`.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// One corpus token: the surface word and an optional part-of-speech tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub word: String,
    pub tag: Option<String>,
}

impl TaggedToken {
    pub fn new(word: impl Into<String>, tag: Option<&str>) -> Self {
        TaggedToken {
            word: word.into(),
            tag: tag.map(str::to_owned),
        }
    }

    /// Penn-style noun tags start with `NN`.
    pub fn is_noun(&self) -> bool {
        self.tag.as_deref().is_some_and(|t| t.starts_with("NN"))
    }

    /// Penn-style verb tags start with `VB`.
    pub fn is_verb(&self) -> bool {
        self.tag.as_deref().is_some_and(|t| t.starts_with("VB"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<TaggedToken>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Parse one corpus line. The tag is everything after the last underscore;
/// a token without an underscore is untagged.
pub fn parse_tagged_line(line: &str) -> Sentence {
    let tokens = line
        .split_whitespace()
        .map(|tok| match tok.rsplit_once('_') {
            Some((word, tag)) if !word.is_empty() && !tag.is_empty() => {
                TaggedToken::new(word, Some(tag))
            }
            _ => TaggedToken::new(tok, None),
        })
        .collect();
    Sentence { tokens }
}

/// Read a whole corpus file, skipping blank lines.
pub fn read_tagged_corpus(path: &Path) -> Result<Vec<Sentence>> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut sentences = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        sentences.push(parse_tagged_line(&line));
    }
    Ok(sentences)
}
