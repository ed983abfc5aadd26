use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Letters reserved for index (degree) variables. A symbol is an index
/// symbol when its name is one of these letters, optionally followed by
/// decimal digits (`n`, `k`, `u3`, `n12`, ...). Every other identifier is a
/// parameter. `q` and `i` are reserved.
pub const INDEX_LETTERS: &[char] = &['j', 'k', 'm', 'n', 'p', 's', 'u', 'v', 'w'];

/// The default alphabet for fresh degree variables, in slot order.
pub const DEFAULT_INDEX_ALPHABET: [&str; 5] = ["u", "v", "k", "m", "n"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Index,
    Parameter,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> SymbolKind {
        kind_of(&self.0)
    }

    pub fn is_index(&self) -> bool {
        self.kind() == SymbolKind::Index
    }
}

pub fn kind_of(name: &str) -> SymbolKind {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if INDEX_LETTERS.contains(&c) && chars.all(|d| d.is_ascii_digit()) => {
            SymbolKind::Index
        }
        _ => SymbolKind::Parameter,
    }
}

pub fn is_reserved(name: &str) -> bool {
    matches!(name, "q" | "i")
}

/// `count` distinct index symbols: `u, v, k, m, n` first, then `n1, n2, ...`.
pub fn fresh_indices(count: usize) -> Vec<Symbol> {
    (0..count)
        .map(|i| match DEFAULT_INDEX_ALPHABET.get(i) {
            Some(name) => Symbol::new(name),
            None => Symbol::new(&format!("n{}", i - DEFAULT_INDEX_ALPHABET.len() + 1)),
        })
        .collect()
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Symbol::new(&s))
    }
}
