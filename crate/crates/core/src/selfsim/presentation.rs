use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};

use super::parse::parse_presentation;
use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::tree::{Perm, Portrait, TreeSignature};

/// `name = root · (children[0], .., children[k-1])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionRule {
    pub name: String,
    pub root: Perm,
    pub children: Vec<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Generator,
    /// An isometry normalizing the group, possibly outside it.
    Normalizer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct SymbolId {
    kind: SymbolKind,
    index: usize,
}

// (symbol, inverted, start level capped at the signature prefix, depth)
type EvalKey = (SymbolId, bool, usize, usize);

/// A self-similar group given by wreath recursion.
///
/// Evaluation is memoized per `(symbol, level, depth)`; the memo table is
/// shared across threads and filled idempotently.
pub struct Presentation {
    name: String,
    sig: TreeSignature,
    generators: Vec<RecursionRule>,
    normalizers: Vec<RecursionRule>,
    symbols: HashMap<String, SymbolId>,
    memo: RwLock<HashMap<EvalKey, Arc<Portrait>>>,
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Presentation> {
        let parsed = parse_presentation(text)?;
        let mut symbols = HashMap::new();
        for (kind, rules) in [
            (SymbolKind::Generator, &parsed.generators),
            (SymbolKind::Normalizer, &parsed.normalizers),
        ] {
            for (index, rule) in rules.iter().enumerate() {
                symbols.insert(rule.name.clone(), SymbolId { kind, index });
            }
        }
        let p = Presentation {
            name: parsed.name,
            sig: parsed.sig,
            generators: parsed.generators,
            normalizers: parsed.normalizers,
            symbols,
            memo: RwLock::new(HashMap::new()),
        };
        // Root degrees must match every level a rule can be unfolded at. Past
        // the prefix the signature is constant, so checking prefix + 1 levels
        // covers all of them.
        for rule in p.generators.iter().chain(&p.normalizers) {
            let bad = (0..=p.sig.prefix_len()).find(|&j| p.sig.arity(j) != rule.root.degree());
            if let Some(j) = bad {
                return Err(Error::invalid(
                    "presentation",
                    format!(
                        "rule `{}` has a degree-{} root but level {j} has branching {}",
                        rule.name,
                        rule.root.degree(),
                        p.sig.arity(j)
                    ),
                ));
            }
        }
        Ok(p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &TreeSignature {
        &self.sig
    }

    pub fn generators(&self) -> &[RecursionRule] {
        &self.generators
    }

    pub fn normalizers(&self) -> &[RecursionRule] {
        &self.normalizers
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|r| r.name.clone()).collect()
    }

    pub fn symbol_kind(&self, symbol: &str) -> Option<SymbolKind> {
        self.symbols.get(symbol).map(|id| id.kind)
    }

    /// Canonical text; parsing it yields an identical presentation.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    fn lookup(&self, symbol: &str, allow_normalizers: bool) -> Result<SymbolId> {
        let id = *self
            .symbols
            .get(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        if id.kind == SymbolKind::Normalizer && !allow_normalizers {
            return Err(Error::Domain(format!(
                "`{symbol}` is a normalizer element, not a group element; it is only allowed in conjugation specs"
            )));
        }
        Ok(id)
    }

    /// Checks that every symbol of `w` is a generator.
    pub fn check_group_word(&self, w: &Word) -> Result<()> {
        w.symbols().try_for_each(|s| self.lookup(s, false).map(|_| ()))
    }

    /// Checks that every symbol of `w` is declared.
    pub fn check_isometry_word(&self, w: &Word) -> Result<()> {
        w.symbols().try_for_each(|s| self.lookup(s, true).map(|_| ()))
    }

    /// Depth-`depth` portrait of a group element.
    pub fn eval(&self, w: &Word, depth: usize) -> Result<Portrait> {
        self.eval_word(w, 0, depth, false)
    }

    /// Like [`Presentation::eval`], but normalizer symbols are allowed.
    pub fn eval_isometry(&self, w: &Word, depth: usize) -> Result<Portrait> {
        self.eval_word(w, 0, depth, true)
    }

    /// Portrait of `w` acting on the subtree of a level-`level` vertex.
    pub fn eval_at_level(&self, w: &Word, level: usize, depth: usize) -> Result<Portrait> {
        self.eval_word(w, level, depth, false)
    }

    pub fn eval_symbol(&self, symbol: &str, depth: usize) -> Result<Portrait> {
        let id = self.lookup(symbol, true)?;
        Ok((*self.eval_id(id, false, 0, depth)?).clone())
    }

    fn eval_word(&self, w: &Word, level: usize, depth: usize, allow_normalizers: bool) -> Result<Portrait> {
        let sig = self.sig.shift(level);
        let mut acc: Option<Portrait> = None;
        for Letter { symbol, inverse } in w.letters() {
            let id = self.lookup(symbol, allow_normalizers)?;
            let p = self.eval_id(id, *inverse, level, depth)?;
            acc = Some(match acc {
                None => (*p).clone(),
                Some(a) => a.compose(&p)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Portrait::identity(&sig, depth)))
    }

    fn eval_id(&self, id: SymbolId, inverse: bool, level: usize, depth: usize) -> Result<Arc<Portrait>> {
        let key = (id, inverse, level.min(self.sig.prefix_len()), depth);
        if let Some(p) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(p.clone());
        }
        let portrait = if inverse {
            self.eval_id(id, false, level, depth)?.inverse()
        } else {
            let sig = self.sig.shift(level);
            if depth == 0 {
                Portrait::identity(&sig, 0)
            } else {
                let rule = match id.kind {
                    SymbolKind::Generator => &self.generators[id.index],
                    SymbolKind::Normalizer => &self.normalizers[id.index],
                };
                let allow = id.kind == SymbolKind::Normalizer;
                let children = rule
                    .children
                    .iter()
                    .map(|c| self.eval_word(c, level + 1, depth - 1, allow))
                    .collect::<Result<Vec<_>>>()?;
                let refs: Vec<&Portrait> = children.iter().collect();
                Portrait::from_sections(&sig, &rule.root, &refs)?
            }
        };
        let portrait = Arc::new(portrait);
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| portrait.clone());
        Ok(portrait)
    }

    /// The element acting as `w` on every level-`n` subtree and trivially
    /// above level `n`, as a depth-`depth` portrait.
    pub fn diagonal(&self, w: &Word, n: usize, depth: usize) -> Result<Portrait> {
        if n == 0 {
            return Err(Error::Precondition("diagonal elements need level n >= 1".into()));
        }
        if depth <= n {
            return Ok(Portrait::identity(&self.sig, depth));
        }
        let inner = self.eval_word(w, n, depth - n, true)?;
        let inner_sig = self.sig.shift(n);
        Portrait::from_fn(&self.sig, depth, |j, v| {
            if j < n {
                Perm::identity(self.sig.arity(j))
            } else {
                let sub = v % inner_sig.level_size(j - n);
                Perm::from_images_unchecked(inner.label(j - n, sub).to_vec())
            }
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name = {}", self.name)?;
        writeln!(f, "sig = {}", self.sig)?;
        for (kw, rules) in [("gen", &self.generators), ("norm", &self.normalizers)] {
            for r in rules {
                let images: Vec<String> = r.root.images().iter().map(u8::to_string).collect();
                let children: Vec<String> = r.children.iter().map(Word::to_string).collect();
                writeln!(
                    f,
                    "{kw} {} = perm[{}] ({})",
                    r.name,
                    images.join(","),
                    children.join(", ")
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("sig", &self.sig)
            .field("generators", &self.generator_names())
            .finish_non_exhaustive()
    }
}

impl Clone for Presentation {
    fn clone(&self) -> Presentation {
        Presentation {
            name: self.name.clone(),
            sig: self.sig.clone(),
            generators: self.generators.clone(),
            normalizers: self.normalizers.clone(),
            symbols: self.symbols.clone(),
            memo: RwLock::new(HashMap::new()),
        }
    }
}
