use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TreeSignature;
use crate::error::{Error, Result};

/// A vertex addressed by its path of child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(path: Vec<u8>) -> Self {
        Vertex(path)
    }

    pub fn path(&self) -> &[u8] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, c: usize) -> Vertex {
        let mut path = self.0.clone();
        path.push(c as u8);
        Vertex(path)
    }

    pub fn parent(&self) -> Option<Vertex> {
        let (_, init) = self.0.split_last()?;
        Some(Vertex(init.to_vec()))
    }

    /// Is `self` equal to `other` or below it?
    pub fn is_descendant_of(&self, other: &Vertex) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn check(&self, sig: &TreeSignature) -> Result<()> {
        for (j, &c) in self.0.iter().enumerate() {
            if c as usize >= sig.arity(j) {
                return Err(Error::invalid(
                    "vertex",
                    format!("{self}: index {c} at level {} exceeds branching {}", j + 1, sig.arity(j)),
                ));
            }
        }
        Ok(())
    }

    /// Position of the vertex among its level in lexicographic order.
    pub fn index(&self, sig: &TreeSignature) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &c)| acc * sig.arity(j) + c as usize)
    }

    pub fn from_index(sig: &TreeSignature, level: usize, mut index: usize) -> Vertex {
        let mut path = vec![0u8; level];
        for j in (0..level).rev() {
            let k = sig.arity(j);
            path[j] = (index % k) as u8;
            index /= k;
        }
        Vertex(path)
    }

    /// All level-`level` vertices in index order.
    pub fn level_iter(sig: &TreeSignature, level: usize) -> impl Iterator<Item = Vertex> + '_ {
        (0..sig.level_size(level)).map(move |i| Vertex::from_index(sig, level, i))
    }
}

impl fmt::Display for Vertex {
    /// Digits are concatenated (`021`) when every index is below 10, dotted
    /// otherwise; the root prints as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let sep = if self.0.iter().all(|&c| c < 10) { "" } else { "." };
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Vertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "root" {
            return Ok(Vertex::root());
        }
        let bad = |e: std::num::ParseIntError| Error::invalid("vertex", format!("`{s}`: {e}"));
        let path = if s.contains('.') {
            s.split('.').map(|p| p.parse::<u8>().map_err(bad)).collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::invalid("vertex", format!("`{s}`")))
                })
                .collect::<Result<_>>()?
        };
        Ok(Vertex(path))
    }
}

impl TryFrom<String> for Vertex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Vertex> for String {
    fn from(v: Vertex) -> String {
        v.to_string()
    }
}
