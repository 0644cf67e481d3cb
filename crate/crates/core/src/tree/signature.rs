use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Branching indices of a spherically symmetric rooted tree.
///
/// Level `j` vertices have `arity(j)` children. The sequence is given by a
/// finite prefix followed by a constant tail, which covers every tree we can
/// describe in finite text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TreeSignature {
    prefix: Vec<u8>,
    tail: u8,
}

impl TreeSignature {
    pub fn new(prefix: Vec<u8>, tail: u8) -> Result<Self> {
        if let Some(bad) = prefix.iter().chain(std::iter::once(&tail)).find(|&&k| k < 2) {
            return Err(Error::invalid(
                "signature",
                format!("branching index {bad} is below 2"),
            ));
        }
        let mut sig = TreeSignature { prefix, tail };
        sig.normalize();
        Ok(sig)
    }

    pub fn constant(k: u8) -> Result<Self> {
        Self::new(Vec::new(), k)
    }

    pub fn binary() -> Self {
        TreeSignature {
            prefix: Vec::new(),
            tail: 2,
        }
    }

    pub fn ternary() -> Self {
        TreeSignature {
            prefix: Vec::new(),
            tail: 3,
        }
    }

    // Trailing prefix entries equal to the tail are redundant; dropping them
    // makes equality structural.
    fn normalize(&mut self) {
        while self.prefix.last() == Some(&self.tail) {
            self.prefix.pop();
        }
    }

    /// Branching index of vertices at `level`.
    #[inline]
    pub fn arity(&self, level: usize) -> usize {
        self.prefix.get(level).copied().unwrap_or(self.tail) as usize
    }

    /// `l(m)`: number of vertices at level `m`. Panics on `usize` overflow.
    pub fn level_size(&self, m: usize) -> usize {
        self.checked_level_size(m)
            .unwrap_or_else(|| panic!("level {m} of {self} overflows usize"))
    }

    pub fn checked_level_size(&self, m: usize) -> Option<usize> {
        (0..m).try_fold(1usize, |acc, j| acc.checked_mul(self.arity(j)))
    }

    /// Signature of the subtree hanging from a level-`by` vertex.
    pub fn shift(&self, by: usize) -> TreeSignature {
        let prefix = self.prefix.iter().skip(by).copied().collect();
        TreeSignature {
            prefix,
            tail: self.tail,
        }
    }

    /// Number of levels after which `shift` stops changing the signature.
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_binary(&self) -> bool {
        self.prefix.is_empty() && self.tail == 2
    }

    /// Number of labels (internal vertices) in a depth-`depth` portrait.
    pub fn internal_vertices(&self, depth: usize) -> usize {
        (0..depth).map(|j| self.level_size(j)).sum()
    }
}

impl fmt::Display for TreeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.prefix.is_empty(), self.tail) {
            (true, 2) => f.write_str("binary"),
            (true, 3) => f.write_str("ternary"),
            _ => {
                for k in &self.prefix {
                    write!(f, "{k},")?;
                }
                write!(f, "{}", self.tail)
            }
        }
    }
}

impl FromStr for TreeSignature {
    type Err = Error;

    /// Accepts `binary`, `ternary`, or a comma list `k1,k2,...,kt` whose last
    /// entry repeats forever.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "binary" => return Ok(Self::binary()),
            "ternary" => return Ok(Self::ternary()),
            _ => {}
        }
        let mut ks = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::invalid("signature", format!("`{part}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let tail = ks
            .pop()
            .ok_or_else(|| Error::invalid("signature", "empty"))?;
        Self::new(ks, tail)
    }
}

impl TryFrom<String> for TreeSignature {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TreeSignature> for String {
    fn from(sig: TreeSignature) -> String {
        sig.to_string()
    }
}
