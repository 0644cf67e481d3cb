mod common;

use common::{brute_force_classes, rng};
use rand::Rng;
use treetwist::quotient::{cache, induce, reidemeister_lower_bounds, twisted_classes, verify_shift_lemma, DEFAULT_CAP};
use treetwist::selfsim::{grigorchuk, gupta_sidki};
use treetwist::{AutomorphismSpec, Presentation, QuotientGroup};

#[test]
fn grigorchuk_tower() {
    let p = grigorchuk();
    let orders: Vec<usize> = (1..=4).map(|d| QuotientGroup::build(&p, d, DEFAULT_CAP).unwrap().order()).collect();
    assert_eq!(orders, vec![2, 8, 128, 4096]);
    assert!(orders.windows(2).all(|w| w[1] % w[0] == 0));
}

#[test]
fn gupta_sidki_tower() {
    let p = gupta_sidki();
    let orders: Vec<usize> = (1..=3).map(|d| QuotientGroup::build(&p, d, DEFAULT_CAP).unwrap().order()).collect();
    assert!(orders.windows(2).all(|w| w[1] % w[0] == 0));
    assert_eq!(orders[..2], [3, 27]);
}

#[test]
fn projections_are_homomorphisms() {
    let p = grigorchuk();
    let hi = QuotientGroup::build(&p, 3, DEFAULT_CAP).unwrap();
    let lo = QuotientGroup::build(&p, 2, DEFAULT_CAP).unwrap();
    let mut r = rng(7);
    for _ in 0..200 {
        let (a, b) = (r.gen_range(0..hi.order()), r.gen_range(0..hi.order()));
        let lhs = hi.project(&lo, hi.mul(a, b)).unwrap();
        let rhs = lo.mul(hi.project(&lo, a).unwrap(), hi.project(&lo, b).unwrap());
        assert_eq!(lhs, rhs);
    }
}

fn check_against_brute_force(p: &Presentation, spec: &AutomorphismSpec, depth: usize) -> usize {
    let q = QuotientGroup::build(p, depth, DEFAULT_CAP).unwrap();
    let phi = induce(p, &q, spec).unwrap();
    let fast = twisted_classes(&q, &phi);
    let slow = brute_force_classes(&q, &phi);
    for (x, &class) in slow.iter().enumerate() {
        assert_eq!(fast.class_of(x), class, "{spec} at depth {depth}, element {x}");
    }
    fast.count()
}

#[test]
fn twisted_classes_match_brute_force() {
    let gr = grigorchuk();
    let counts: Vec<usize> = (1..=4)
        .map(|d| check_against_brute_force(&gr, &AutomorphismSpec::identity(), d))
        .collect();
    assert_eq!(counts[..2], [2, 5]);
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    for spec in ["family:1", "family:2", "conj:a*b"] {
        check_against_brute_force(&gr, &AutomorphismSpec::parse(spec, &gr).unwrap(), 3);
    }
    let gs = gupta_sidki();
    for spec in ["identity", "tau1", "tau2", "tau3"] {
        check_against_brute_force(&gs, &AutomorphismSpec::parse(spec, &gs).unwrap(), 2);
    }
}

#[test]
fn counts_never_decrease() {
    let gr = grigorchuk();
    for spec in ["identity", "family:1", "family:2"] {
        let rows = reidemeister_lower_bounds(&gr, &AutomorphismSpec::parse(spec, &gr).unwrap(), 4, DEFAULT_CAP).unwrap();
        assert!(rows.windows(2).all(|w| w[0].classes <= w[1].classes), "{spec}");
    }
    let gs = gupta_sidki();
    for spec in ["identity", "tau1", "tau2", "tau3"] {
        let rows = reidemeister_lower_bounds(&gs, &AutomorphismSpec::parse(spec, &gs).unwrap(), 3, DEFAULT_CAP).unwrap();
        assert!(rows.windows(2).all(|w| w[0].classes <= w[1].classes), "{spec}");
    }
}

fn random_shift_pairs(p: &Presentation, depth: usize, specs: &[&str], seed: u64) {
    let q = QuotientGroup::build(p, depth, DEFAULT_CAP).unwrap();
    let mut r = rng(seed);
    for _ in 0..20 {
        let spec = AutomorphismSpec::parse(specs[r.gen_range(0..specs.len())], p).unwrap();
        // compose with a random inner automorphism so the φ's vary
        let inner = r.gen_range(0..q.order());
        let phi = induce(p, &q, &spec).unwrap().twisted_by(&q, inner);
        let k = r.gen_range(0..q.order());
        let report = verify_shift_lemma(&q, &phi, k);
        assert!(report.holds(), "{report:?}");
        // class-by-class: x and y share a φ-class iff xk and yk share a ψ-class
        let psi = phi.twisted_by(&q, q.inv(k));
        let a = twisted_classes(&q, &phi);
        let b = twisted_classes(&q, &psi);
        for x in 0..q.order().min(300) {
            for y in 0..q.order().min(300) {
                assert_eq!(a.class_of(x) == a.class_of(y), b.class_of(q.mul(x, k)) == b.class_of(q.mul(y, k)));
            }
        }
    }
}

#[test]
fn shift_lemma_on_random_pairs() {
    random_shift_pairs(&grigorchuk(), 3, &["identity", "family:1", "family:2", "conj:b*a"], 11);
    random_shift_pairs(&gupta_sidki(), 2, &["identity", "tau1", "tau2", "tau3"], 12);
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    for p in [grigorchuk(), gupta_sidki()] {
        for d in 1..=3 {
            let fresh = QuotientGroup::build(&p, d, DEFAULT_CAP).unwrap();
            let stored = cache::build_cached(Some(dir.path()), &p, d, DEFAULT_CAP).unwrap();
            let loaded = cache::build_cached(Some(dir.path()), &p, d, DEFAULT_CAP).unwrap();
            for q in [&stored, &loaded] {
                assert_eq!(q.order(), fresh.order());
                assert!((0..q.order()).all(|i| q.key(i) == fresh.key(i)));
            }
            let phi = induce(&p, &loaded, &AutomorphismSpec::identity()).unwrap();
            let psi = induce(&p, &fresh, &AutomorphismSpec::identity()).unwrap();
            assert_eq!(twisted_classes(&loaded, &phi).count(), twisted_classes(&fresh, &psi).count());
        }
    }
}

#[test]
fn generator_image_specs_are_checked() {
    let p = grigorchuk();
    let q = QuotientGroup::build(&p, 3, DEFAULT_CAP).unwrap();
    // a -> b cannot extend: a has a root switch and b does not
    let bad = AutomorphismSpec::parse("images:a->b;b->a;c->c;d->d", &p).unwrap();
    assert!(induce(&p, &q, &bad).is_err());
    let same = AutomorphismSpec::parse("images:a->a;b->b;c->c;d->d", &p).unwrap();
    let phi = induce(&p, &q, &same).unwrap();
    assert_eq!(phi.fixed_points(), q.order());
    // conjugation by a, written as generator images
    let inner = AutomorphismSpec::parse("images:a->a;b->a*b*a;c->a*c*a;d->a*d*a", &p).unwrap();
    let by_images = induce(&p, &q, &inner).unwrap();
    let by_conj = induce(&p, &q, &AutomorphismSpec::parse("conj:a", &p).unwrap()).unwrap();
    assert_eq!(by_images.images(), by_conj.images());
}
