#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treetwist::quotient::InducedAutomorphism;
use treetwist::{Perm, Portrait, QuotientGroup, TreeSignature};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A portrait with independent uniform labels; `trivial` is the chance of
/// forcing a label to the identity.
pub fn random_portrait(rng: &mut impl Rng, sig: &TreeSignature, depth: usize, trivial: f64) -> Portrait {
    Portrait::from_fn(sig, depth, |j, _| {
        let k = sig.arity(j);
        if rng.gen_bool(trivial) {
            Perm::identity(k)
        } else {
            let all = Perm::all(k);
            all[rng.gen_range(0..all.len())].clone()
        }
    })
    .unwrap()
}

pub fn signatures() -> Vec<TreeSignature> {
    vec![
        TreeSignature::binary(),
        TreeSignature::ternary(),
        TreeSignature::new(vec![3, 2], 2).unwrap(),
        TreeSignature::new(vec![2], 4).unwrap(),
    ]
}

/// Twisted classes computed directly from portraits: the orbit of `x` is
/// `{ g x φ(g)⁻¹ : g ∈ G }`, with `φ` given on element ids. Returns class
/// ids (ordered by smallest member) per element.
pub fn brute_force_classes(q: &QuotientGroup, phi: &InducedAutomorphism) -> Vec<usize> {
    let elements: Vec<Portrait> = (0..q.order()).map(|i| q.portrait(i)).collect();
    let index: HashMap<Vec<u8>, usize> = elements.iter().enumerate().map(|(i, g)| (g.key().to_vec(), i)).collect();
    let phi_inv: Vec<Portrait> = (0..q.order()).map(|g| elements[phi.apply(g)].inverse()).collect();
    let mut class = vec![usize::MAX; q.order()];
    let mut next = 0;
    for x in 0..q.order() {
        if class[x] != usize::MAX {
            continue;
        }
        for g in 0..q.order() {
            let y = elements[g].compose(&elements[x]).unwrap().compose(&phi_inv[g]).unwrap();
            class[index[y.key()]] = next;
        }
        next += 1;
    }
    class
}
