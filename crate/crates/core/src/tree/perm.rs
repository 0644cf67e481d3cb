use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., k-1}` stored as its image array.
///
/// Products follow the "apply right first" convention:
/// `p.then_after(q)` is `p ∘ q`, i.e. `x ↦ p(q(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            match seen.get_mut(i as usize) {
                Some(s @ false) => *s = true,
                _ => return Err(Error::invalid("permutation", format!("{images:?} is not a bijection"))),
            }
        }
        if images.is_empty() {
            return Err(Error::invalid("permutation", "degree 0"));
        }
        Ok(Perm(images))
    }

    /// Caller guarantees `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm(images)
    }

    pub fn identity(k: usize) -> Self {
        Perm((0..k as u8).collect())
    }

    /// The nontrivial permutation of a binary branching.
    pub fn switch() -> Self {
        Perm(vec![1, 0])
    }

    /// `i ↦ i + 1 mod k`.
    pub fn cycle(k: usize) -> Self {
        Perm((0..k).map(|i| ((i + 1) % k) as u8).collect())
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<u8> = (0..k as u8).collect();
        images.swap(a, b);
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn then_after(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn conjugate_by(&self, h: &Perm) -> Perm {
        h.then_after(self).then_after(&h.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &j)| *i == j as usize).count()
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        cycle_type_of(self.0.iter().map(|&i| i as usize))
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().iter().map(|len| len - 1).sum::<usize>() % 2 == 0
    }

    /// All permutations of degree `k`, in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = (0..k as u8).collect();
        loop {
            out.push(Perm(current.clone()));
            // next lexicographic permutation
            let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

/// Cycle type of the map `i ↦ images[i]` (which must be a bijection).
pub fn cycle_type_of(images: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let images: Vec<usize> = images.into_iter().collect();
    let mut seen = vec![false; images.len()];
    let mut lengths = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        let mut seen = vec![false; self.0.len()];
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            f.write_str("(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i] as usize;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<u8>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Perm::from_images(v)
    }
}

impl From<Perm> for Vec<u8> {
    fn from(p: Perm) -> Vec<u8> {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![0, 2]).is_err());
        assert!(Perm::from_images(vec![]).is_err());
    }

    #[test]
    fn product_convention() {
        // (0 1) after (1 2): 0 -> 0 -> 1, 1 -> 2 -> 2, 2 -> 1 -> 0
        let p = Perm::transposition(3, 0, 1);
        let q = Perm::transposition(3, 1, 2);
        assert_eq!(p.then_after(&q).images(), &[1, 2, 0]);
        assert_eq!(p.then_after(&q), Perm::cycle(3));
    }

    #[test]
    fn cycle_types_and_parity() {
        assert_eq!(Perm::cycle(3).cycle_type(), vec![3]);
        assert_eq!(Perm::identity(4).cycle_type(), vec![1, 1, 1, 1]);
        assert!(Perm::cycle(3).is_even());
        assert!(!Perm::switch().is_even());
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(Perm::all(4).iter().filter(|p| p.is_even()).count(), 12);
    }

    #[test]
    fn display_cycles() {
        assert_eq!(Perm::cycle(3).to_string(), "(0 1 2)");
        assert_eq!(Perm::identity(2).to_string(), "()");
    }
}
