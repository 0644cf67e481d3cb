//! Depth-truncated tree automorphisms.
//!
//! A [`Portrait`] stores, for every vertex of levels `0..depth`, the
//! permutation that the automorphism induces from that vertex's children onto
//! the children of its image. Labels are laid out breadth first, each as its
//! image array, so the flat byte buffer is a canonical key.
//!
//! Conventions:
//! * vertices act on the left, `(g∘h)(v) = g(h(v))`;
//! * `label_{g∘h}(v) = label_g(h(v)) ∘ label_h(v)`;
//! * switches are counted at the level of the vertex carrying the label: a
//!   label at level `m` swaps children at level `m + 1`.
//!
//! Equality is always equality at the stored depth.

use serde::{Deserialize, Serialize};

use super::perm::cycle_type_of;
use super::{Perm, TreeSignature, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Portrait {
    sig: TreeSignature,
    depth: usize,
    labels: Vec<u8>,
}

impl Portrait {
    pub fn identity(sig: &TreeSignature, depth: usize) -> Portrait {
        let mut labels = Vec::new();
        for j in 0..depth {
            let k = sig.arity(j);
            for _ in 0..sig.level_size(j) {
                labels.extend(0..k as u8);
            }
        }
        Portrait {
            sig: sig.clone(),
            depth,
            labels,
        }
    }

    /// Builds a portrait from a label for each `(level, index)` pair.
    pub fn from_fn(
        sig: &TreeSignature,
        depth: usize,
        mut label: impl FnMut(usize, usize) -> Perm,
    ) -> Result<Portrait> {
        let mut labels = Vec::new();
        for j in 0..depth {
            let k = sig.arity(j);
            for v in 0..sig.level_size(j) {
                let p = label(j, v);
                if p.degree() != k {
                    return Err(Error::invalid(
                        "portrait",
                        format!("label at level {j} has degree {}, expected {k}", p.degree()),
                    ));
                }
                labels.extend_from_slice(p.images());
            }
        }
        Ok(Portrait {
            sig: sig.clone(),
            depth,
            labels,
        })
    }

    /// Breadth-first list of labels, validated.
    pub fn from_labels(sig: &TreeSignature, depth: usize, labels: &[Perm]) -> Result<Portrait> {
        let expected = sig.internal_vertices(depth);
        if labels.len() != expected {
            return Err(Error::invalid(
                "portrait",
                format!("{} labels given, depth {depth} needs {expected}", labels.len()),
            ));
        }
        let mut it = labels.iter();
        Portrait::from_fn(sig, depth, |_, _| it.next().unwrap().clone())
    }

    /// Assembles `root · (children[0], .., children[k-1])`. All children must
    /// share a depth and live on `sig.shift(1)`.
    pub fn from_sections(sig: &TreeSignature, root: &Perm, children: &[&Portrait]) -> Result<Portrait> {
        let k = sig.arity(0);
        if root.degree() != k || children.len() != k {
            return Err(Error::invalid(
                "portrait",
                format!("root of arity {k} needs a degree-{k} label and {k} sections"),
            ));
        }
        let child_depth = children[0].depth;
        let child_sig = sig.shift(1);
        for c in children {
            if c.depth != child_depth {
                return Err(Error::DepthMismatch {
                    left: child_depth,
                    right: c.depth,
                });
            }
            if c.sig != child_sig {
                return Err(Error::SignatureMismatch {
                    left: child_sig.to_string(),
                    right: c.sig.to_string(),
                });
            }
        }
        let mut labels = Vec::with_capacity(k + children.iter().map(|c| c.labels.len()).sum::<usize>());
        labels.extend_from_slice(root.images());
        let mut offset = 0;
        for j in 0..child_depth {
            let block = child_sig.level_size(j) * child_sig.arity(j);
            for c in children {
                labels.extend_from_slice(&c.labels[offset..offset + block]);
            }
            offset += block;
        }
        Ok(Portrait {
            sig: sig.clone(),
            depth: child_depth + 1,
            labels,
        })
    }

    pub fn signature(&self) -> &TreeSignature {
        &self.sig
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The canonical byte encoding (breadth-first label images).
    pub fn key(&self) -> &[u8] {
        &self.labels
    }

    /// Inverse of [`Portrait::key`]; the caller guarantees a valid buffer.
    pub(crate) fn from_key(sig: &TreeSignature, depth: usize, labels: Vec<u8>) -> Portrait {
        debug_assert_eq!(labels.len(), level_offset(sig, depth));
        Portrait {
            sig: sig.clone(),
            depth,
            labels,
        }
    }

    fn offset(&self, level: usize) -> usize {
        level_offset(&self.sig, level)
    }

    /// Label at the `index`-th vertex of `level`, as an image slice.
    pub fn label(&self, level: usize, index: usize) -> &[u8] {
        let k = self.sig.arity(level);
        let start = self.offset(level) + index * k;
        &self.labels[start..start + k]
    }

    pub fn label_at(&self, v: &Vertex) -> Result<Perm> {
        self.check_level(v.level(), false)?;
        Ok(Perm::from_images_unchecked(self.label(v.level(), v.index(&self.sig)).to_vec()))
    }

    /// All labels, breadth first.
    pub fn labels(&self) -> Vec<Perm> {
        (0..self.depth)
            .flat_map(|j| (0..self.sig.level_size(j)).map(move |v| (j, v)))
            .map(|(j, v)| Perm::from_images_unchecked(self.label(j, v).to_vec()))
            .collect()
    }

    fn check_level(&self, level: usize, inclusive: bool) -> Result<()> {
        let ok = if inclusive { level <= self.depth } else { level < self.depth };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfDepth {
                level,
                depth: self.depth,
            })
        }
    }

    fn check_compatible(&self, other: &Portrait) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch {
                left: self.sig.to_string(),
                right: other.sig.to_string(),
            });
        }
        if self.depth != other.depth {
            return Err(Error::DepthMismatch {
                left: self.depth,
                right: other.depth,
            });
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait> {
        self.check_compatible(other)?;
        Ok(Portrait {
            sig: self.sig.clone(),
            depth: self.depth,
            labels: compose_labels(&self.sig, self.depth, &self.labels, &other.labels),
        })
    }

    pub fn inverse(&self) -> Portrait {
        Portrait {
            sig: self.sig.clone(),
            depth: self.depth,
            labels: inverse_labels(&self.sig, self.depth, &self.labels),
        }
    }

    /// `h ∘ g ∘ h⁻¹` with `h = self`.
    pub fn conjugate(&self, g: &Portrait) -> Result<Portrait> {
        self.compose(g)?.compose(&self.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.stabilizer_depth() == self.depth
    }

    /// Image of every level-`level` vertex, by index.
    pub fn level_images(&self, level: usize) -> Result<Vec<usize>> {
        self.check_level(level, true)?;
        let mut images = vec![0usize];
        let mut offset = 0;
        for j in 0..level {
            let k = self.sig.arity(j);
            let mut next = vec![0usize; images.len() * k];
            for (v, &gv) in images.iter().enumerate() {
                let lg = &self.labels[offset + v * k..offset + v * k + k];
                for c in 0..k {
                    next[v * k + c] = gv * k + lg[c] as usize;
                }
            }
            offset += images.len() * k;
            images = next;
        }
        Ok(images)
    }

    pub fn apply(&self, v: &Vertex) -> Result<Vertex> {
        self.check_level(v.level(), true)?;
        v.check(&self.sig)?;
        let mut source = 0usize;
        let mut path = Vec::with_capacity(v.level());
        for (j, &c) in v.path().iter().enumerate() {
            path.push(self.label(j, source)[c as usize]);
            source = source * self.sig.arity(j) + c as usize;
        }
        Ok(Vertex::new(path))
    }

    /// Largest `n` such that every level-`n` vertex is fixed.
    pub fn stabilizer_depth(&self) -> usize {
        let mut offset = 0;
        for j in 0..self.depth {
            let k = self.sig.arity(j);
            let len = self.sig.level_size(j) * k;
            let block = &self.labels[offset..offset + len];
            if block.chunks_exact(k).any(|l| !is_identity_slice(l)) {
                return j;
            }
            offset += len;
        }
        self.depth
    }

    pub fn fixed_count(&self, level: usize) -> Result<usize> {
        Ok(self
            .level_images(level)?
            .iter()
            .enumerate()
            .filter(|(v, &gv)| *v == gv)
            .count())
    }

    /// Number of level-`m` vertices carrying a nontrivial label. On a binary
    /// tree these are the switches acting on level `m + 1`.
    pub fn nontrivial_label_count(&self, m: usize) -> Result<usize> {
        self.check_level(m, false)?;
        let k = self.sig.arity(m);
        let start = self.offset(m);
        let len = self.sig.level_size(m) * k;
        Ok(self.labels[start..start + len]
            .chunks_exact(k)
            .filter(|l| !is_identity_slice(l))
            .count())
    }

    /// Membership in `K_n`: fixes level `n` and switches every sibling pair on
    /// level `n + 1`.
    pub fn is_in_k(&self, n: usize) -> Result<bool> {
        if !self.sig.is_binary() {
            return Err(Error::Unsupported("K_n is defined on binary trees only".into()));
        }
        self.check_level(n, false)?;
        Ok(self.stabilizer_depth() >= n && self.nontrivial_label_count(n)? == self.sig.level_size(n))
    }

    /// Cycle type of the action on level `level`, sorted descending.
    pub fn cycle_type(&self, level: usize) -> Result<Vec<usize>> {
        Ok(cycle_type_of(self.level_images(level)?))
    }

    /// `+1` or `-1`: the sign of the permutation induced on level `level`.
    pub fn level_sign(&self, level: usize) -> Result<i8> {
        let odd = self
            .cycle_type(level)?
            .iter()
            .map(|len| len - 1)
            .sum::<usize>()
            % 2;
        Ok(if odd == 0 { 1 } else { -1 })
    }

    /// Restriction to the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Portrait> {
        self.check_level(depth, true)?;
        Ok(Portrait {
            sig: self.sig.clone(),
            depth,
            labels: self.labels[..self.offset(depth)].to_vec(),
        })
    }

    /// The section (state) at `v`: the labels of `v`'s subtree, as a portrait
    /// of depth `depth - level(v)` on the shifted signature.
    pub fn section(&self, v: &Vertex) -> Result<Portrait> {
        self.check_level(v.level(), true)?;
        v.check(&self.sig)?;
        let base = v.level();
        let sub_sig = self.sig.shift(base);
        let mut labels = Vec::new();
        let mut first = v.index(&self.sig);
        let mut count = 1;
        for j in base..self.depth {
            let k = self.sig.arity(j);
            let start = self.offset(j) + first * k;
            labels.extend_from_slice(&self.labels[start..start + count * k]);
            first *= k;
            count *= k;
        }
        Ok(Portrait {
            sig: sub_sig,
            depth: self.depth - base,
            labels,
        })
    }

    /// If `self` is trivial off the subtree at `v` and nontrivial inside it,
    /// returns the first level of that subtree (counted from `v`, so `1`
    /// means `v`'s children) on which it acts nontrivially.
    pub fn rigid_level_at(&self, v: &Vertex) -> Result<Option<usize>> {
        self.check_level(v.level(), true)?;
        v.check(&self.sig)?;
        let base = v.level();
        let mut first = v.index(&self.sig);
        let mut count = 1;
        let mut inside_level = None;
        for j in 0..self.depth {
            let k = self.sig.arity(j);
            let size = self.sig.level_size(j);
            // vertices of level j inside T_v occupy [lo, hi)
            let (lo, hi) = if j < base { (usize::MAX, usize::MAX) } else { (first, first + count) };
            for idx in 0..size {
                let nontrivial = !is_identity_slice(self.label(j, idx));
                if !nontrivial {
                    continue;
                }
                if idx >= lo && idx < hi {
                    inside_level.get_or_insert(j - base + 1);
                } else {
                    return Ok(None);
                }
            }
            if j >= base {
                first *= k;
                count *= k;
            }
        }
        Ok(inside_level)
    }
}

#[inline]
fn is_identity_slice(l: &[u8]) -> bool {
    l.iter().enumerate().all(|(i, &x)| i == x as usize)
}

/// Label-buffer form of `g ∘ h`.
pub(crate) fn compose_labels(sig: &TreeSignature, depth: usize, g: &[u8], h: &[u8]) -> Vec<u8> {
    let mut labels = vec![0u8; g.len()];
    let mut images = vec![0usize];
    let mut next = Vec::new();
    let mut offset = 0;
    for j in 0..depth {
        let k = sig.arity(j);
        next.clear();
        next.resize(images.len() * k, 0);
        for (v, &hv) in images.iter().enumerate() {
            let lh = &h[offset + v * k..offset + v * k + k];
            let lg = &g[offset + hv * k..offset + hv * k + k];
            for c in 0..k {
                let hc = lh[c] as usize;
                labels[offset + v * k + c] = lg[hc];
                next[v * k + c] = hv * k + hc;
            }
        }
        offset += images.len() * k;
        std::mem::swap(&mut images, &mut next);
    }
    labels
}

/// Label-buffer form of `g⁻¹`.
pub(crate) fn inverse_labels(sig: &TreeSignature, depth: usize, g: &[u8]) -> Vec<u8> {
    let mut labels = vec![0u8; g.len()];
    let mut images = vec![0usize];
    let mut next = Vec::new();
    let mut offset = 0;
    for j in 0..depth {
        let k = sig.arity(j);
        next.clear();
        next.resize(images.len() * k, 0);
        for (v, &gv) in images.iter().enumerate() {
            let lg = &g[offset + v * k..offset + v * k + k];
            for c in 0..k {
                let gc = lg[c] as usize;
                // g⁻¹ carries child gc of g(v) back to child c of v
                labels[offset + gv * k + gc] = c as u8;
                next[v * k + c] = gv * k + gc;
            }
        }
        offset += images.len() * k;
        std::mem::swap(&mut images, &mut next);
    }
    labels
}

/// Byte offset of level `level`'s label block.
fn level_offset(sig: &TreeSignature, level: usize) -> usize {
    (0..level).map(|j| sig.level_size(j) * sig.arity(j)).sum()
}

impl std::fmt::Debug for Portrait {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Portrait({}, depth {}, [", self.sig, self.depth)?;
        for j in 0..self.depth {
            if j > 0 {
                f.write_str(" | ")?;
            }
            let labels: Vec<String> = (0..self.sig.level_size(j))
                .map(|v| Perm::from_images_unchecked(self.label(j, v).to_vec()).to_string())
                .collect();
            f.write_str(&labels.join(" "))?;
        }
        f.write_str("])")
    }
}

#[derive(Serialize, Deserialize)]
struct PortraitRepr {
    sig: TreeSignature,
    depth: usize,
    labels: Vec<Perm>,
}

impl Serialize for Portrait {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PortraitRepr {
            sig: self.sig.clone(),
            depth: self.depth,
            labels: self.labels(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Portrait {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PortraitRepr::deserialize(d)?;
        Portrait::from_labels(&repr.sig, repr.depth, &repr.labels).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> TreeSignature {
        TreeSignature::binary()
    }

    fn root_switch(depth: usize) -> Portrait {
        Portrait::from_fn(&bin(), depth, |j, _| if j == 0 { Perm::switch() } else { Perm::identity(2) }).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = root_switch(4);
        let id = Portrait::identity(&bin(), 4);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(a.compose(&id).unwrap(), a);
        assert_eq!(id.inverse(), id);
        assert_eq!(id.stabilizer_depth(), 4);
    }

    #[test]
    fn root_switch_is_an_involution() {
        let a = root_switch(5);
        assert_eq!(a.inverse(), a);
        assert!(a.compose(&a).unwrap().is_identity());
        assert_eq!(a.apply(&"0".parse().unwrap()).unwrap().to_string(), "1");
        assert_eq!(a.apply(&"011".parse().unwrap()).unwrap().to_string(), "111");
        assert!(a.is_in_k(0).unwrap());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = root_switch(3);
        let b = root_switch(4);
        assert!(matches!(a.compose(&b), Err(Error::DepthMismatch { .. })));
        let t = Portrait::identity(&TreeSignature::ternary(), 3);
        assert!(matches!(a.compose(&t), Err(Error::SignatureMismatch { .. })));
        assert!(matches!(a.apply(&"0000".parse().unwrap()), Err(Error::OutOfDepth { .. })));
        assert!(a.fixed_count(4).is_err());
        assert!(t.is_in_k(0).is_err());
    }

    #[test]
    fn sections_and_assembly_invert() {
        let sig = TreeSignature::ternary();
        let cyc = Perm::cycle(3);
        let g = Portrait::from_fn(&sig, 3, |j, v| if (j + v) % 2 == 0 { cyc.clone() } else { Perm::identity(3) }).unwrap();
        let children: Vec<Portrait> = (0..3).map(|c| g.section(&Vertex::new(vec![c])).unwrap()).collect();
        let refs: Vec<&Portrait> = children.iter().collect();
        let rebuilt = Portrait::from_sections(&sig, &cyc, &refs).unwrap();
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn rigid_levels() {
        // single switch at vertex 10 of a depth-4 binary portrait
        let g = Portrait::from_fn(&bin(), 4, |j, v| {
            if j == 2 && v == 2 { Perm::switch() } else { Perm::identity(2) }
        })
        .unwrap();
        assert_eq!(g.rigid_level_at(&"1".parse().unwrap()).unwrap(), Some(2));
        assert_eq!(g.rigid_level_at(&"10".parse().unwrap()).unwrap(), Some(1));
        assert_eq!(g.rigid_level_at(&"0".parse().unwrap()).unwrap(), None);
        assert_eq!(g.rigid_level_at(&Vertex::root()).unwrap(), Some(3));
        assert_eq!(Portrait::identity(&bin(), 3).rigid_level_at(&Vertex::root()).unwrap(), None);
    }

    #[test]
    fn json_shape() {
        let a = root_switch(2);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"sig":"binary","depth":2,"labels":[[1,0],[0,1],[0,1]]}"#);
        let back: Portrait = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Portrait>(r#"{"sig":"binary","depth":2,"labels":[[1,0]]}"#).is_err());
    }
}
