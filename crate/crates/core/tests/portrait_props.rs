mod common;

use common::{random_portrait, rng, signatures};
use proptest::prelude::*;
use treetwist::{Portrait, Vertex};

fn triple(seed: u64, sig_ix: usize, depth: usize) -> (Portrait, Portrait, Portrait) {
    let sig = &signatures()[sig_ix];
    let mut r = rng(seed);
    (
        random_portrait(&mut r, sig, depth, 0.3),
        random_portrait(&mut r, sig, depth, 0.3),
        random_portrait(&mut r, sig, depth, 0.3),
    )
}

proptest! {
    #[test]
    fn group_axioms(seed in any::<u64>(), sig_ix in 0usize..4, depth in 0usize..5) {
        let (g, h, k) = triple(seed, sig_ix, depth);
        let id = Portrait::identity(g.signature(), depth);
        prop_assert_eq!(g.compose(&h).unwrap().compose(&k).unwrap(), g.compose(&h.compose(&k).unwrap()).unwrap());
        prop_assert_eq!(g.compose(&id).unwrap(), g.clone());
        prop_assert_eq!(id.compose(&g).unwrap(), g.clone());
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn action_is_a_left_action(seed in any::<u64>(), sig_ix in 0usize..4, depth in 1usize..5) {
        let (g, h, _) = triple(seed, sig_ix, depth);
        let gh = g.compose(&h).unwrap();
        for v in Vertex::level_iter(g.signature(), depth) {
            prop_assert_eq!(gh.apply(&v).unwrap(), g.apply(&h.apply(&v).unwrap()).unwrap());
        }
    }

    #[test]
    fn level_images_are_bijections(seed in any::<u64>(), sig_ix in 0usize..4, depth in 0usize..5) {
        let (g, _, _) = triple(seed, sig_ix, depth);
        for level in 0..=depth {
            let mut images = g.level_images(level).unwrap();
            images.sort_unstable();
            prop_assert_eq!(images, (0..g.signature().level_size(level)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn fixed_points_recurse(seed in any::<u64>(), sig_ix in 0usize..4, depth in 1usize..5) {
        // a level-(j+1) vertex is fixed iff its parent is fixed and the
        // parent's label fixes the child index
        let (g, _, _) = triple(seed, sig_ix, depth);
        for j in 0..depth {
            let images = g.level_images(j).unwrap();
            let expected: usize = (0..images.len())
                .filter(|&v| images[v] == v)
                .map(|v| g.label(j, v).iter().enumerate().filter(|(i, &x)| *i == x as usize).count())
                .sum();
            prop_assert_eq!(g.fixed_count(j + 1).unwrap(), expected);
        }
    }

    #[test]
    fn truncation_is_a_homomorphism(seed in any::<u64>(), sig_ix in 0usize..4, depth in 1usize..5, cut in 0usize..5) {
        let cut = cut.min(depth);
        let (g, h, _) = triple(seed, sig_ix, depth);
        prop_assert_eq!(
            g.compose(&h).unwrap().truncate(cut).unwrap(),
            g.truncate(cut).unwrap().compose(&h.truncate(cut).unwrap()).unwrap()
        );
    }

    #[test]
    fn cycle_type_and_sign_are_conjugation_invariant(seed in any::<u64>(), sig_ix in 0usize..4, depth in 1usize..5) {
        let (g, h, _) = triple(seed, sig_ix, depth);
        let c = h.conjugate(&g).unwrap();
        for level in 0..=depth {
            prop_assert_eq!(c.cycle_type(level).unwrap(), g.cycle_type(level).unwrap());
            prop_assert_eq!(c.level_sign(level).unwrap(), g.level_sign(level).unwrap());
        }
    }

    #[test]
    fn k_sets_are_closed_under_conjugation(seed in any::<u64>(), n in 0usize..4) {
        // an element of K_n conjugated by any automorphism of the binary tree
        let sig = treetwist::TreeSignature::binary();
        let mut r = rng(seed);
        let depth = n + 2;
        let k = Portrait::from_fn(&sig, depth, |j, _| {
            if j == n {
                treetwist::Perm::switch()
            } else if j < n {
                treetwist::Perm::identity(2)
            } else if rand::Rng::gen_bool(&mut r, 0.5) {
                treetwist::Perm::switch()
            } else {
                treetwist::Perm::identity(2)
            }
        })
        .unwrap();
        prop_assert!(k.is_in_k(n).unwrap());
        let h = random_portrait(&mut r, &sig, depth, 0.3);
        prop_assert!(h.conjugate(&k).unwrap().is_in_k(n).unwrap());
    }

    #[test]
    fn sections_compose(seed in any::<u64>(), depth in 2usize..5) {
        // (g h)|_v = g|_{h(v)} h|_v
        let (g, h, _) = triple(seed, 1, depth);
        let gh = g.compose(&h).unwrap();
        for v in Vertex::level_iter(g.signature(), 1) {
            let hv = h.apply(&v).unwrap();
            prop_assert_eq!(
                gh.section(&v).unwrap(),
                g.section(&hv).unwrap().compose(&h.section(&v).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), sig_ix in 0usize..4, depth in 0usize..4) {
        let (g, _, _) = triple(seed, sig_ix, depth);
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Portrait>(&text).unwrap(), g);
    }
}
