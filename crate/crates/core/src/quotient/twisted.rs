use rayon::prelude::*;
use serde::Serialize;

use super::{induce, InducedAutomorphism, QuotientGroup, UnionFind};
use crate::error::{Error, Result};
use crate::selfsim::{AutomorphismSpec, Presentation};

/// The twisted conjugacy classes `x ~ h x φ(h)⁻¹` of a quotient.
///
/// Class ids are ordered by their smallest member, which is also the class
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPartition {
    class_of: Vec<u32>,
    representatives: Vec<u32>,
}

impl TwistedPartition {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.class_of[id] as usize
    }

    pub fn representative(&self, class: usize) -> usize {
        self.representatives[class] as usize
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as usize == class)
            .map(|(i, _)| i)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count()];
        for &c in &self.class_of {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Does the class contain an element of `St_n`?
    pub fn class_meets_stabilizer(&self, q: &QuotientGroup, class: usize, n: usize) -> Result<bool> {
        if n > q.depth() {
            return Err(Error::OutOfDepth {
                level: n,
                depth: q.depth(),
            });
        }
        if class >= self.count() {
            return Err(Error::invalid(
                "class id",
                format!("{class} (there are {} classes)", self.count()),
            ));
        }
        Ok(self.members(class).any(|x| q.stabilizer_depth(x) >= n))
    }
}

/// Union-find over the moves `x ↦ s x φ(s)⁻¹` for the generators `s`.
/// Generators generate the quotient, so the components are exactly the
/// twisted classes.
pub fn twisted_classes(q: &QuotientGroup, phi: &InducedAutomorphism) -> TwistedPartition {
    let gens = q.generator_ids();
    let letter_of: Vec<usize> = q
        .generator_names()
        .iter()
        .map(|name| {
            q.letters()
                .iter()
                .position(|l| l.symbol == *name && !l.inverse)
                .expect("every generator is a letter")
        })
        .collect();
    let edges: Vec<Vec<u32>> = gens
        .iter()
        .zip(&letter_of)
        .map(|(&s, &l)| {
            let r = q.inv(phi.apply(s));
            (0..q.order())
                .into_par_iter()
                .map(|x| q.mul(q.left_mul_letter(l, x), r) as u32)
                .collect()
        })
        .collect();
    let mut uf = UnionFind::new(q.order());
    for targets in &edges {
        for (x, &y) in targets.iter().enumerate() {
            uf.union(x, y as usize);
        }
    }
    let mut class_of_root = vec![u32::MAX; q.order()];
    let mut class_of = vec![0u32; q.order()];
    let mut representatives = Vec::new();
    for (x, class) in class_of.iter_mut().enumerate() {
        let root = uf.find(x);
        if class_of_root[root] == u32::MAX {
            class_of_root[root] = representatives.len() as u32;
            representatives.push(x as u32);
        }
        *class = class_of_root[root];
    }
    TwistedPartition {
        class_of,
        representatives,
    }
}

/// Outcome of checking that right multiplication by `k` carries
/// `φ`-classes onto `(τ_{k⁻¹} ∘ φ)`-classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub classes_phi: usize,
    pub classes_shifted: usize,
    /// Every `φ`-class lands in a single shifted class, injectively.
    pub class_bijection: bool,
}

impl ShiftReport {
    pub fn holds(&self) -> bool {
        self.class_bijection && self.classes_phi == self.classes_shifted
    }
}

pub fn verify_shift_lemma(q: &QuotientGroup, phi: &InducedAutomorphism, k: usize) -> ShiftReport {
    let psi = phi.twisted_by(q, q.inv(k));
    let p_phi = twisted_classes(q, phi);
    let p_psi = twisted_classes(q, &psi);
    let mut target = vec![u32::MAX; p_phi.count()];
    let mut hit = vec![false; p_psi.count()];
    let mut bijection = true;
    for x in 0..q.order() {
        let c = p_phi.class_of(x);
        let d = p_psi.class_of(q.mul(x, k)) as u32;
        if target[c] == u32::MAX {
            if std::mem::replace(&mut hit[d as usize], true) {
                bijection = false;
            }
            target[c] = d;
        } else if target[c] != d {
            bijection = false;
        }
    }
    ShiftReport {
        classes_phi: p_phi.count(),
        classes_shifted: p_psi.count(),
        class_bijection: bijection && hit.iter().all(|&h| h),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub depth: usize,
    pub order: usize,
    /// Number of twisted classes of the induced automorphism; a lower bound
    /// for the Reidemeister number of the automorphism of the whole group.
    pub classes: usize,
}

/// Twisted class counts at depths `1..=d_max`. An empty range gives an empty
/// sequence. Non-decrease is reported by the caller, not asserted here.
pub fn reidemeister_lower_bounds(
    p: &Presentation,
    spec: &AutomorphismSpec,
    d_max: usize,
    cap: usize,
) -> Result<Vec<LowerBound>> {
    (1..=d_max)
        .map(|depth| {
            let q = QuotientGroup::build(p, depth, cap)?;
            let phi = induce(p, &q, spec)?;
            Ok(LowerBound {
                depth,
                order: q.order(),
                classes: twisted_classes(&q, &phi).count(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::DEFAULT_CAP;
    use crate::selfsim::grigorchuk;

    #[test]
    fn grigorchuk_identity_counts() {
        let p = grigorchuk();
        let rows = reidemeister_lower_bounds(&p, &AutomorphismSpec::identity(), 2, DEFAULT_CAP).unwrap();
        let counts: Vec<usize> = rows.iter().map(|r| r.classes).collect();
        assert_eq!(counts, vec![2, 5]);
        assert!(reidemeister_lower_bounds(&p, &AutomorphismSpec::identity(), 0, DEFAULT_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn root_switch_class_avoids_the_first_stabilizer() {
        let p = grigorchuk();
        let q = QuotientGroup::build(&p, 2, DEFAULT_CAP).unwrap();
        let part = twisted_classes(&q, &InducedAutomorphism::identity(&q));
        let a = q.word_id(&"a".parse().unwrap()).unwrap();
        assert!(!part.class_meets_stabilizer(&q, part.class_of(a), 1).unwrap());
        assert!(part.class_meets_stabilizer(&q, part.class_of(0), 2).unwrap());
        assert!(part.class_meets_stabilizer(&q, part.count(), 1).is_err());
        assert!(part.class_meets_stabilizer(&q, 0, 3).is_err());
    }
}
