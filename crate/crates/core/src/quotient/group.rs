use indexmap::IndexSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::selfsim::{Letter, Presentation, Word};
use crate::tree::{compose_labels, inverse_labels, Portrait, TreeSignature};

/// Default element cap for quotient enumeration.
pub const DEFAULT_CAP: usize = 1 << 22;

const NO_PARENT: u32 = u32::MAX;

/// `G / St_d`, realized as the set of depth-`d` portraits of group elements.
///
/// Ids follow breadth-first order from the identity (id 0) under left
/// multiplication by the letters of [`QuotientGroup::letters`], so they are
/// deterministic for a fixed presentation.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    sig: TreeSignature,
    depth: usize,
    presentation_hash: String,
    generator_names: Vec<String>,
    letters: Vec<Letter>,
    keys: IndexSet<Box<[u8]>>,
    parent: Vec<(u32, u16)>,
    left: Vec<Vec<u32>>,
    generator_ids: Vec<u32>,
    stab_depth: Vec<u8>,
}

/// BFS alphabet: each generator, plus its inverse when it is not an
/// involution at this depth.
type Alphabet = (Vec<Letter>, Vec<Box<[u8]>>);

fn alphabet(p: &Presentation, depth: usize) -> Result<Alphabet> {
    let mut letters = Vec::new();
    let mut keys = Vec::new();
    for name in p.generator_names() {
        let g = p.eval(&Word::symbol(name.as_str()), depth)?;
        let involution = g.compose(&g)?.is_identity();
        keys.push(g.key().into());
        letters.push(Letter::new(name.as_str(), false));
        if !involution {
            keys.push(g.inverse().key().into());
            letters.push(Letter::new(name.as_str(), true));
        }
    }
    Ok((letters, keys))
}

impl QuotientGroup {
    /// Breadth-first closure of the generators acting on the first `depth`
    /// levels. Fails with [`Error::CapExceeded`] rather than truncating.
    pub fn build(p: &Presentation, depth: usize, cap: usize) -> Result<QuotientGroup> {
        if depth == 0 {
            return Err(Error::Precondition("quotients need depth >= 1".into()));
        }
        if cap == 0 {
            return Err(Error::Precondition("the element cap must be positive".into()));
        }
        let sig = p.signature().clone();
        let (letters, letter_keys) = alphabet(p, depth)?;
        let identity: Box<[u8]> = Portrait::identity(&sig, depth).key().into();
        let mut keys = IndexSet::new();
        keys.insert(identity);
        let mut parent = vec![(NO_PARENT, u16::MAX)];
        let mut left: Vec<Vec<u32>> = vec![Vec::new(); letters.len()];

        let mut start = 0;
        while start < keys.len() {
            let end = keys.len();
            let products: Vec<Vec<Box<[u8]>>> = (start..end)
                .into_par_iter()
                .map(|q| {
                    let qk = &keys[q];
                    letter_keys
                        .iter()
                        .map(|lk| compose_labels(&sig, depth, lk, qk).into_boxed_slice())
                        .collect()
                })
                .collect();
            for (q, row) in (start..end).zip(products) {
                for (l, key) in row.into_iter().enumerate() {
                    let (id, new) = keys.insert_full(key);
                    if new {
                        if keys.len() > cap {
                            return Err(Error::CapExceeded {
                                cap,
                                partial: keys.len() - 1,
                            });
                        }
                        parent.push((q as u32, l as u16));
                    }
                    left[l].push(id as u32);
                }
            }
            start = end;
        }
        let mut group = QuotientGroup {
            sig,
            depth,
            presentation_hash: p.hash(),
            generator_names: p.generator_names(),
            letters,
            keys,
            parent,
            left,
            generator_ids: Vec::new(),
            stab_depth: Vec::new(),
        };
        group.finish();
        Ok(group)
    }

    /// Reassembles a quotient from stored element keys and BFS parents (as
    /// written by the cache), rebuilding and checking the multiplication
    /// tables.
    pub(crate) fn from_parts(
        p: &Presentation,
        depth: usize,
        keys: Vec<Box<[u8]>>,
        parent: Vec<(u32, u16)>,
    ) -> Result<QuotientGroup> {
        let corrupt = |detail: String| Error::invalid("quotient cache", detail);
        let sig = p.signature().clone();
        let (letters, letter_keys) = alphabet(p, depth)?;
        let key_len = Portrait::identity(&sig, depth).key().len();
        if keys.len() != parent.len() || keys.is_empty() {
            return Err(corrupt("record count mismatch".into()));
        }
        if keys.iter().any(|k| k.len() != key_len) {
            return Err(corrupt("key of wrong length".into()));
        }
        let keys: IndexSet<Box<[u8]>> = keys.into_iter().collect();
        if keys.len() != parent.len() {
            return Err(corrupt("duplicate keys".into()));
        }
        if *keys[0] != *Portrait::identity(&sig, depth).key() {
            return Err(corrupt("element 0 is not the identity".into()));
        }
        let left = letter_keys
            .iter()
            .map(|lk| {
                (0..keys.len())
                    .into_par_iter()
                    .map(|q| {
                        let key = compose_labels(&sig, depth, lk, &keys[q]);
                        keys.get_index_of(key.as_slice())
                            .map(|i| i as u32)
                            .ok_or_else(|| corrupt("not closed under generators".into()))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (id, &(par, l)) in parent.iter().enumerate().skip(1) {
            if par as usize >= id || l as usize >= letters.len() || left[l as usize][par as usize] as usize != id {
                return Err(corrupt(format!("bad parent record for element {id}")));
            }
        }
        let mut group = QuotientGroup {
            sig,
            depth,
            presentation_hash: p.hash(),
            generator_names: p.generator_names(),
            letters,
            keys,
            parent,
            left,
            generator_ids: Vec::new(),
            stab_depth: Vec::new(),
        };
        group.finish();
        Ok(group)
    }

    fn finish(&mut self) {
        let sig = &self.sig;
        let depth = self.depth;
        let keys = &self.keys;
        self.stab_depth = (0..keys.len())
            .into_par_iter()
            .map(|i| Portrait::from_key(sig, depth, keys[i].to_vec()).stabilizer_depth() as u8)
            .collect();
        self.generator_ids = self
            .generator_names
            .iter()
            .map(|name| {
                let l = self
                    .letters
                    .iter()
                    .position(|l| l.symbol == *name && !l.inverse)
                    .expect("every generator is a letter");
                self.left[l][0]
            })
            .collect();
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn signature(&self) -> &TreeSignature {
        &self.sig
    }

    pub fn presentation_hash(&self) -> &str {
        &self.presentation_hash
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// Ids of the generators, in declaration order.
    pub fn generator_ids(&self) -> Vec<usize> {
        self.generator_ids.iter().map(|&g| g as usize).collect()
    }

    /// The BFS alphabet.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn key(&self, id: usize) -> &[u8] {
        &self.keys[id]
    }

    pub fn portrait(&self, id: usize) -> Portrait {
        Portrait::from_key(&self.sig, self.depth, self.keys[id].to_vec())
    }

    pub fn id_of(&self, g: &Portrait) -> Option<usize> {
        if *g.signature() != self.sig || g.depth() != self.depth {
            return None;
        }
        self.keys.get_index_of(g.key())
    }

    pub fn id_of_key(&self, key: &[u8]) -> Option<usize> {
        self.keys.get_index_of(key)
    }

    /// Id of `letter · q`.
    pub fn left_mul_letter(&self, letter: usize, q: usize) -> usize {
        self.left[letter][q] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let key = compose_labels(&self.sig, self.depth, &self.keys[a], &self.keys[b]);
        self.keys
            .get_index_of(key.as_slice())
            .expect("quotient is closed under products")
    }

    pub fn inv(&self, a: usize) -> usize {
        let key = inverse_labels(&self.sig, self.depth, &self.keys[a]);
        self.keys
            .get_index_of(key.as_slice())
            .expect("quotient is closed under inverses")
    }

    pub fn stabilizer_depth(&self, id: usize) -> usize {
        self.stab_depth[id] as usize
    }

    /// A shortest word (over the BFS alphabet) for the element, ties broken
    /// by alphabet order.
    pub fn rep_word(&self, id: usize) -> Word {
        let mut letters = Vec::new();
        let mut cur = id;
        while self.parent[cur].0 != NO_PARENT {
            let (par, l) = self.parent[cur];
            letters.push(self.letters[l as usize].clone());
            cur = par as usize;
        }
        Word::from_letters(letters)
    }

    pub(crate) fn parent_record(&self, id: usize) -> (u32, u16) {
        self.parent[id]
    }

    /// Id of a generator word, computed through the multiplication tables.
    pub fn word_id(&self, w: &Word) -> Result<usize> {
        let mut id = 0;
        for letter in w.letters().iter().rev() {
            let l = match self.letters.iter().position(|x| x == letter) {
                Some(l) => l,
                // involutions carry no separate inverse letter
                None => self
                    .letters
                    .iter()
                    .position(|x| x.symbol == letter.symbol)
                    .ok_or_else(|| Error::UnknownSymbol(letter.symbol.clone()))?,
            };
            id = self.left[l][id] as usize;
        }
        Ok(id)
    }

    /// The truncation homomorphism onto a shallower quotient of the same
    /// presentation.
    pub fn project(&self, lower: &QuotientGroup, id: usize) -> Result<usize> {
        if lower.sig != self.sig || lower.depth > self.depth {
            return Err(Error::DepthMismatch {
                left: self.depth,
                right: lower.depth,
            });
        }
        let len = lower.keys[0].len();
        lower
            .id_of_key(&self.keys[id][..len])
            .ok_or_else(|| Error::Domain("projection leaves the lower quotient".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{grigorchuk, gupta_sidki};

    #[test]
    fn grigorchuk_orders() {
        let p = grigorchuk();
        let orders: Vec<usize> = (1..=3).map(|d| QuotientGroup::build(&p, d, DEFAULT_CAP).unwrap().order()).collect();
        assert_eq!(orders, vec![2, 8, 128]);
    }

    #[test]
    fn gupta_sidki_orders() {
        let p = gupta_sidki();
        let orders: Vec<usize> = (1..=2).map(|d| QuotientGroup::build(&p, d, DEFAULT_CAP).unwrap().order()).collect();
        assert_eq!(orders, vec![3, 27]);
    }

    #[test]
    fn cap_is_enforced() {
        let p = grigorchuk();
        match QuotientGroup::build(&p, 3, 100) {
            Err(Error::CapExceeded { cap: 100, partial }) => assert_eq!(partial, 100),
            other => panic!("{other:?}"),
        }
        assert!(QuotientGroup::build(&p, 0, 10).is_err());
    }

    #[test]
    fn rep_words_evaluate_to_their_keys() {
        let p = gupta_sidki();
        let q = QuotientGroup::build(&p, 2, DEFAULT_CAP).unwrap();
        for id in 0..q.order() {
            let w = q.rep_word(id);
            assert_eq!(p.eval(&w, 2).unwrap(), q.portrait(id));
            assert_eq!(q.word_id(&w).unwrap(), id);
        }
    }
}
