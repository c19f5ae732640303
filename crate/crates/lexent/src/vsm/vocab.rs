//! Row vocabulary and context-key column identities.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// The ordered set of row terms of a word-context matrix. Terms may be
/// unigrams or space-separated n-grams. Row ids are contiguous from 0 and
/// the term <-> id mapping is a bijection.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new<I, S>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let terms: Vec<String> = terms.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(terms.len());
        for (id, term) in terms.iter().enumerate() {
            if term.is_empty() {
                return Err(Error::Input(format!("empty vocabulary term at row {id}")));
            }
            if index.insert(term.clone(), id).is_some() {
                return Err(Error::Input(format!("duplicate vocabulary term: {term}")));
            }
        }
        Ok(Vocabulary { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Like [`Vocabulary::id`] but fails with a lookup error naming the term.
    pub fn require(&self, term: &str) -> Result<usize> {
        self.id(term).ok_or_else(|| Error::Lookup {
            term: term.to_owned(),
        })
    }

    pub fn term(&self, id: usize) -> &str {
        &self.terms[id]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str)> {
        self.terms.iter().enumerate().map(|(i, t)| (i, t.as_str()))
    }
}

/// Which side of the target word a context token was seen on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Coarse part-of-speech restriction carried by a context column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosClass {
    Any,
    Noun,
    Verb,
}

impl fmt::Display for PosClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosClass::Any => "any",
            PosClass::Noun => "noun",
            PosClass::Verb => "verb",
        })
    }
}

/// Identity of one context column: the token, the side it occurred on and
/// its part-of-speech class. Serialized as `token#side#pos`.
///
/// The derived ordering (token, then side, then pos class) is the canonical
/// column order of every matrix and the deterministic tie-break for ranked
/// feature sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextKey {
    pub token: String,
    pub side: Side,
    pub pos_class: PosClass,
}

impl ContextKey {
    pub fn new(token: impl Into<String>, side: Side, pos_class: PosClass) -> Self {
        ContextKey {
            token: token.into(),
            side,
            pos_class,
        }
    }

    /// Parse the `token#side#pos` form. The token itself may contain `#`;
    /// the last two fields are taken from the right.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.rsplitn(3, '#');
        let pos = parts.next().unwrap_or("");
        let side = parts.next();
        let token = parts.next();
        let (token, side) = match (token, side) {
            (Some(t), Some(s)) if !t.is_empty() => (t, s),
            _ => {
                return Err(Error::Input(format!(
                    "malformed context key (want token#side#pos): {text}"
                )))
            }
        };
        let side = match side {
            "left" => Side::Left,
            "right" => Side::Right,
            other => return Err(Error::Input(format!("unknown context side: {other}"))),
        };
        let pos_class = match pos {
            "any" => PosClass::Any,
            "noun" => PosClass::Noun,
            "verb" => PosClass::Verb,
            other => return Err(Error::Input(format!("unknown context pos class: {other}"))),
        };
        Ok(ContextKey::new(token, side, pos_class))
    }
}

impl fmt::Display for ContextKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}#{}", self.token, self.side, self.pos_class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_is_a_bijection() {
        let v = Vocabulary::new(["cat", "dog", "big cat"]).unwrap();
        assert_eq!(v.len(), 3);
        for (id, term) in v.iter() {
            assert_eq!(v.id(term), Some(id));
            assert_eq!(v.term(id), term);
        }
    }

    #[test]
    fn duplicate_terms_rejected() {
        assert!(Vocabulary::new(["cat", "cat"]).is_err());
    }

    #[test]
    fn unknown_term_lookup_names_the_term() {
        let v = Vocabulary::new(["cat"]).unwrap();
        let err = v.require("unicorn").unwrap_err();
        assert!(err.to_string().contains("unicorn"));
    }

    #[test]
    fn context_key_round_trip() {
        let key = ContextKey::new("run", Side::Left, PosClass::Verb);
        assert_eq!(ContextKey::parse(&key.to_string()).unwrap(), key);
        // token containing the separator still parses from the right
        let odd = ContextKey::new("c#sharp", Side::Right, PosClass::Any);
        assert_eq!(ContextKey::parse(&odd.to_string()).unwrap(), odd);
    }

    #[test]
    fn context_key_ordering_is_token_side_pos() {
        let a = ContextKey::new("a", Side::Right, PosClass::Verb);
        let b = ContextKey::new("b", Side::Left, PosClass::Any);
        assert!(a < b);
        let left = ContextKey::new("a", Side::Left, PosClass::Any);
        assert!(left < a);
    }
}
