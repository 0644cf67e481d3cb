use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One factor of a word: a symbol or its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: impl Into<String>, inverse: bool) -> Letter {
        Letter {
            symbol: symbol.into(),
            inverse,
        }
    }

    pub fn inverted(&self) -> Letter {
        Letter::new(self.symbol.clone(), !self.inverse)
    }
}

/// A product of letters. `w = l1 * l2 * .. * ln` denotes `l1 ∘ l2 ∘ .. ∘ ln`,
/// so the rightmost letter acts on the tree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn symbol(name: impl Into<String>) -> Word {
        Word(vec![Letter::new(name, false)])
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverted).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters).reduced()
    }

    /// `self^n`; negative powers invert.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.0);
        }
        Word(letters).reduced()
    }

    /// `self * w * self^-1`.
    pub fn conjugating(&self, w: &Word) -> Word {
        self.concat(w).concat(&self.inverse())
    }

    /// Free reduction: cancels adjacent `s * s^-1`.
    pub fn reduced(self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in self.0 {
            match out.last() {
                Some(prev) if prev.symbol == l.symbol && prev.inverse != l.inverse => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|l| l.symbol.as_str())
    }
}

impl fmt::Display for Word {
    /// `a*b^-1*c`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(&l.symbol)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        super::parse::parse_word(s)
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}
