//! Self-similar groups given by wreath recursion, evaluated lazily to
//! portraits.

mod builtins;
mod parse;
mod presentation;
mod spec;
mod word;

pub use builtins::{
    builtin, grigorchuk, gupta_sidki, BUILTIN_NAMES, GRIGORCHUK_FAMILY_LEVELS, GUPTA_SIDKI_X_LEVELS,
};
pub use presentation::{Presentation, RecursionRule, SymbolKind};
pub use spec::{spec_tau, AutomorphismSpec};
pub use word::{Letter, Word};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{Perm, Portrait, Vertex};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn grigorchuk_relations() {
        let p = grigorchuk();
        for s in ["a", "b", "c", "d"] {
            assert!(p.eval(&w(&format!("{s}*{s}")), 8).unwrap().is_identity(), "{s}^2");
        }
        assert_eq!(p.eval(&w("d"), 8).unwrap(), p.eval(&w("b*c"), 8).unwrap());
        let sig = p.signature().shift(1);
        let da = [p.eval_at_level(&w("d"), 1, 7).unwrap(), p.eval_at_level(&w("a"), 1, 7).unwrap()];
        let expected = Portrait::from_sections(p.signature(), &Perm::identity(2), &[&da[0], &da[1]]).unwrap();
        assert_eq!(p.eval(&w("a^-1*c*a"), 8).unwrap(), expected);
        let id = Portrait::identity(&sig, 7);
        let b = p.eval_at_level(&w("b"), 1, 7).unwrap();
        let expected = Portrait::from_sections(p.signature(), &Perm::identity(2), &[&b, &id]).unwrap();
        assert_eq!(p.eval(&w("a^-1*d*a"), 8).unwrap(), expected);
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let p = gupta_sidki();
        let u = w("x*g^-1*x");
        let v = w("g*x^-1*g*g");
        let lhs = p.eval(&u.concat(&v), 5).unwrap();
        let rhs = p.eval(&u, 5).unwrap().compose(&p.eval(&v, 5).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(p.eval(&u, 5).unwrap().truncate(3).unwrap(), p.eval(&u, 3).unwrap());
        assert_eq!(p.eval(&w("x^-1"), 3).unwrap(), p.eval(&w("x*x"), 3).unwrap());
        assert!(p.eval(&w("x^3"), 4).unwrap().is_identity());
    }

    #[test]
    fn gupta_sidki_generators() {
        let p = gupta_sidki();
        let x = p.eval(&w("x"), 1).unwrap();
        for (from, to) in [("0", "1"), ("1", "2"), ("2", "0")] {
            assert_eq!(x.apply(&from.parse().unwrap()).unwrap(), to.parse::<Vertex>().unwrap());
        }
        let g = p.eval(&w("g"), 3).unwrap();
        assert_eq!(g.label_at(&"0".parse().unwrap()).unwrap(), Perm::cycle(3));
        assert_eq!(g.label_at(&"1".parse().unwrap()).unwrap(), Perm::cycle(3).inverse());
        assert_eq!(g.label_at(&"21".parse().unwrap()).unwrap(), Perm::cycle(3).inverse());
        assert!(g.label_at(&"22".parse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn normalizer_symbols_are_separate() {
        let p = gupta_sidki();
        assert!(matches!(p.eval(&w("x1"), 3), Err(crate::Error::Domain(_))));
        assert!(p.eval_isometry(&w("x1*x"), 3).is_ok());
        assert!(matches!(p.eval(&w("y"), 3), Err(crate::Error::UnknownSymbol(_))));
    }

    #[test]
    fn canonical_text_round_trips() {
        for p in [grigorchuk(), gupta_sidki()] {
            let again = Presentation::parse(&p.canonical_text()).unwrap();
            assert_eq!(again.canonical_text(), p.canonical_text());
            assert_eq!(again.hash(), p.hash());
        }
        assert_ne!(grigorchuk().hash(), gupta_sidki().hash());
    }

    #[test]
    fn tau_conjugators_match_the_table() {
        let p = gupta_sidki();
        for (i, t) in [(1, "t1"), (2, "t2"), (3, "t3")] {
            let spec = spec_tau(i).unwrap();
            let conj = AutomorphismSpec::conjugation(w(t));
            for s in ["x", "g", "x*g^-1", "g*x*g"] {
                assert_eq!(
                    spec.eval_image(&p, &w(s), 5).unwrap(),
                    conj.eval_image(&p, &w(s), 5).unwrap(),
                    "tau{i} on {s}"
                );
            }
            assert_eq!(spec.find_conjugator(&p, 4, 1).unwrap(), Some(w(t)));
        }
        let composed = spec_tau(2).unwrap().after(&spec_tau(1).unwrap()).unwrap();
        assert_eq!(composed, spec_tau(3).unwrap());
    }

    #[test]
    fn spec_rewriting() {
        let p = gupta_sidki();
        let tau1 = AutomorphismSpec::parse("tau1", &p).unwrap();
        assert_eq!(tau1.apply(&w("x*g")).unwrap(), w("x^-1*g"));
        assert_eq!(AutomorphismSpec::identity().apply(&w("x*g")).unwrap(), w("x*g"));
        assert!(AutomorphismSpec::parse("images:x->x", &p).is_err());
        assert!(AutomorphismSpec::parse("conj:zz", &p).is_err());
        let text = tau1.to_string();
        assert_eq!(AutomorphismSpec::parse(&text, &p).unwrap(), tau1);

        let g = grigorchuk();
        let conj_a = AutomorphismSpec::parse("conj:a^-1", &g).unwrap();
        let image = conj_a.apply(&w("c")).unwrap();
        assert_eq!(g.eval(&image, 5).unwrap(), g.eval(&w("a^-1*c*a"), 5).unwrap());
    }

    #[test]
    fn family_is_in_deep_stabilizers() {
        let p = grigorchuk();
        for n in 1..=4 {
            let f = p.eval_isometry(&Word::symbol(format!("f{n}")), n + 5).unwrap();
            assert_eq!(f.stabilizer_depth(), n + 2, "f{n}");
            assert!(f.compose(&f).unwrap().is_identity());
        }
    }

    #[test]
    fn diagonal_of_the_commutator() {
        let p = gupta_sidki();
        let g = w("x^-1*g^-1*x*g");
        let e = p.eval(&g, 4).unwrap();
        assert_eq!(e.stabilizer_depth(), 1);
        assert_eq!(e.fixed_count(2).unwrap(), 0);
        let d = p.diagonal(&g, 1, 3).unwrap();
        assert_eq!(d.stabilizer_depth(), 2);
        assert_eq!(d.fixed_count(3).unwrap(), 0);
        assert!(p.diagonal(&Word::empty(), 2, 4).unwrap().is_identity());
        assert!(p.diagonal(&g, 0, 3).is_err());
    }
}
