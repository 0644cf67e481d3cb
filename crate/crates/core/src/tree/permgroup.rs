use std::collections::{BTreeSet, VecDeque};

use super::Perm;
use crate::error::{Error, Result};

/// A subgroup of `Sym(k)`, materialized by closure. Degrees in scope are
/// tiny (≤ 8), so the element set is stored outright.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: BTreeSet<Perm>,
}

impl PermGroup {
    /// Closure of `generators` in `Sym(degree)`. An empty list gives the
    /// trivial group.
    pub fn generate(degree: usize, generators: &[Perm]) -> Result<PermGroup> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid(
                "permutation group",
                format!("generator {g} has degree {}, expected {degree}", g.degree()),
            ));
        }
        let gens: Vec<Perm> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let id = Perm::identity(degree);
        let mut elements = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.then_after(&x);
                if elements.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            elements,
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::generate(degree, &[]).unwrap()
    }

    pub fn symmetric(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::transposition(degree, 0, 1));
            gens.push(Perm::cycle(degree));
        }
        PermGroup::generate(degree, &gens).unwrap()
    }

    pub fn alternating(degree: usize) -> PermGroup {
        // 3-cycles (0 1 i) generate A_k
        let gens: Vec<Perm> = (2..degree)
            .map(|i| {
                let mut images: Vec<u8> = (0..degree as u8).collect();
                images[0] = 1;
                images[1] = i as u8;
                images[i] = 0;
                Perm::from_images_unchecked(images)
            })
            .collect();
        PermGroup::generate(degree, &gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &Perm> {
        self.elements.iter()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.is_subset(&other.elements)
    }

    /// `N_H(g)`: the smallest normal subgroup of `self` containing `g`.
    pub fn normal_closure(&self, g: &Perm) -> Result<PermGroup> {
        if !self.contains(g) {
            return Err(Error::Domain(format!("{g} is not an element of the group")));
        }
        let conjugates: BTreeSet<Perm> = self.elements.iter().map(|h| g.conjugate_by(h)).collect();
        let gens: Vec<Perm> = conjugates.into_iter().collect();
        PermGroup::generate(self.degree, &gens)
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for g in &self.generators {
                let j = g.apply(i);
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Is the group normalized by every generator of `Sym(k)`?
    pub fn is_normal_in_sym(&self) -> bool {
        self.is_normalized_by(PermGroup::symmetric(self.degree).generators())
    }

    pub fn is_normalized_by(&self, conjugators: &[Perm]) -> bool {
        conjugators
            .iter()
            .all(|h| self.generators.iter().all(|g| self.contains(&g.conjugate_by(h))))
    }
}

/// Every normal subgroup of `Sym(k)`, found by scanning unions of conjugacy
/// classes that contain the identity and are closed under products. Feasible
/// for `k ≤ 6`.
pub fn normal_subgroups_of_symmetric(k: usize) -> Vec<PermGroup> {
    let sym = PermGroup::symmetric(k);
    let mut classes: Vec<Vec<Perm>> = Vec::new();
    let mut assigned = BTreeSet::new();
    for g in sym.elements() {
        if g.is_identity() || assigned.contains(g) {
            continue;
        }
        let class: BTreeSet<Perm> = sym.elements().map(|h| g.conjugate_by(h)).collect();
        assigned.extend(class.iter().cloned());
        classes.push(class.into_iter().collect());
    }
    let order = sym.order();
    let mut found: Vec<PermGroup> = Vec::new();
    for mask in 0u64..(1u64 << classes.len()) {
        let size: usize = 1 + classes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, c)| c.len())
            .sum::<usize>();
        // Lagrange prunes almost every union
        if order % size != 0 {
            continue;
        }
        let mut set = BTreeSet::from([Perm::identity(k)]);
        for (i, c) in classes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                set.extend(c.iter().cloned());
            }
        }
        let closed = set
            .iter()
            .all(|a| set.iter().all(|b| set.contains(&a.then_after(b))));
        if closed {
            let gens: Vec<Perm> = set.iter().cloned().collect();
            found.push(PermGroup::generate(k, &gens).unwrap());
        }
    }
    found.sort_by_key(PermGroup::order);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_closures() {
        assert_eq!(PermGroup::generate(2, &[Perm::switch()]).unwrap().order(), 2);
        assert_eq!(PermGroup::generate(3, &[Perm::cycle(3)]).unwrap().order(), 3);
        let s3 = PermGroup::generate(3, &[Perm::transposition(3, 0, 1), Perm::cycle(3)]).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(PermGroup::generate(4, &[]).unwrap().order(), 1);
        assert_eq!(PermGroup::alternating(5).order(), 60);
        assert!(PermGroup::generate(3, &[Perm::switch()]).is_err());
    }

    #[test]
    fn normal_closure_cases() {
        let a3 = PermGroup::alternating(3);
        assert_eq!(a3.normal_closure(&Perm::cycle(3)).unwrap().order(), 3);
        let s3 = PermGroup::symmetric(3);
        assert_eq!(s3.normal_closure(&Perm::transposition(3, 0, 1)).unwrap().order(), 6);
        assert_eq!(s3.normal_closure(&Perm::identity(3)).unwrap().order(), 1);
        assert!(matches!(
            a3.normal_closure(&Perm::transposition(3, 0, 1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn transitivity_and_normality() {
        let a3 = PermGroup::alternating(3);
        assert!(a3.is_transitive() && a3.is_normal_in_sym());
        let t = PermGroup::generate(3, &[Perm::transposition(3, 0, 1)]).unwrap();
        assert!(!t.is_transitive());
        assert!(!t.is_normal_in_sym());
        let v4 = PermGroup::generate(
            4,
            &[
                Perm::from_images(vec![1, 0, 3, 2]).unwrap(),
                Perm::from_images(vec![2, 3, 0, 1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.is_transitive() && v4.is_normal_in_sym());
    }

    #[test]
    fn normal_subgroup_scan_orders() {
        let orders = |k| normal_subgroups_of_symmetric(k).iter().map(PermGroup::order).collect::<Vec<_>>();
        assert_eq!(orders(3), vec![1, 3, 6]);
        assert_eq!(orders(4), vec![1, 4, 12, 24]);
        assert_eq!(orders(5), vec![1, 60, 120]);
    }
}
