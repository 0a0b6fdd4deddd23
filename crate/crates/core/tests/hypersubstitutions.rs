mod common;

use common::{band_reps, identity_strategy, magma_strategy, term_strategy, var};
use hypervar::catalog::BAND_NAMES;
use hypervar::freealg::Analyzer;
use hypervar::hyper::{apply_hyp, compose_hyps, Hypersubstitution};
use hypervar::term::{Identity, Signature, Term};
use proptest::prelude::*;

fn mixed() -> Signature {
    Signature::new([("f", 2), ("g", 1), ("c", 0)]).unwrap()
}

fn hyp_strategy(sig: Signature) -> BoxedStrategy<Hypersubstitution> {
    let parts: Vec<BoxedStrategy<Term>> = (0..sig.len())
        .map(|s| {
            let k = sig.arity(s) as u32;
            if k == 0 {
                let c = Term::App(s, vec![]);
                let unary = (0..sig.len()).find(|&u| sig.arity(u) == 1);
                let mut ground = vec![c.clone()];
                if let Some(u) = unary {
                    ground.push(Term::App(u, vec![c]));
                }
                proptest::sample::select(ground).boxed()
            } else {
                term_strategy(&sig, k, 3)
            }
        })
        .collect();
    parts
        .prop_map(move |images| Hypersubstitution::new(sig.clone(), images).unwrap())
        .boxed()
}

proptest! {
    #[test]
    fn variables_are_fixed(s in hyp_strategy(mixed()), v in 1u32..10) {
        prop_assert_eq!(apply_hyp(&s, &Term::Var(v)), Term::Var(v));
    }

    #[test]
    fn no_new_variables(s in hyp_strategy(mixed()), t in term_strategy(&mixed(), 4, 4)) {
        prop_assert!(apply_hyp(&s, &t).variables().is_subset(&t.variables()));
    }

    #[test]
    fn composition_is_associative(
        a in hyp_strategy(mixed()),
        b in hyp_strategy(mixed()),
        c in hyp_strategy(mixed()),
    ) {
        let left = compose_hyps(&compose_hyps(&a, &b).unwrap(), &c).unwrap();
        let right = compose_hyps(&a, &compose_hyps(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn trivial_is_neutral(a in hyp_strategy(mixed())) {
        let id = Hypersubstitution::trivial(&mixed());
        prop_assert_eq!(compose_hyps(&id, &a).unwrap(), a.clone());
        prop_assert_eq!(compose_hyps(&a, &id).unwrap(), a);
    }

    #[test]
    fn composition_extends(a in hyp_strategy(mixed()), b in hyp_strategy(mixed()), t in term_strategy(&mixed(), 3, 3)) {
        let ab = compose_hyps(&a, &b).unwrap();
        prop_assert_eq!(apply_hyp(&ab, &t), apply_hyp(&a, &apply_hyp(&b, &t)));
    }

    #[test]
    fn realization_bridge(
        a in magma_strategy(),
        k in 0usize..6,
        id in identity_strategy(&Signature::band(), 3, 3),
    ) {
        let reps = band_reps(&Analyzer::default());
        let s = &reps[k];
        let image = Identity::new(apply_hyp(s, &id.lhs), apply_hyp(s, &id.rhs));
        prop_assert_eq!(
            a.derived(s).unwrap().satisfies(&id).unwrap(),
            a.satisfies(&image).unwrap()
        );
    }
}

#[test]
fn hypersubstitution_errors() {
    let sig = Signature::band();
    assert!(Hypersubstitution::parse("* := xyz", &sig).is_err());
    assert!(Hypersubstitution::parse("+ := xy", &sig).is_err());
    assert!(Hypersubstitution::from_bindings(&["* := x", "* := y"], &sig).is_err());
    let s = Hypersubstitution::parse("* := yx", &sig).unwrap();
    assert_eq!(s.to_string(), "* := yx");
}

#[test]
fn distinct_classes_are_separated() {
    let an = Analyzer::default();
    for name in BAND_NAMES.iter().chain(["DL"].iter()) {
        let v = var(name);
        let classes = an.enumerate_hyp_classes(&v).unwrap();
        assert_eq!(classes.iter().filter(|c| c.trivial).count(), 1, "{name}");
        for (i, c1) in classes.iter().enumerate() {
            for c2 in &classes[i + 1..] {
                let separated = (0..v.sig.len()).any(|f| {
                    let id = Identity::new(c1.sigma.image(f).clone(), c2.sigma.image(f).clone());
                    an.decide(&v, &id).unwrap().is_invalid()
                });
                assert!(separated, "{name}: [{}] and [{}]", c1.sigma, c2.sigma);
            }
        }
    }
}

#[test]
fn class_counts() {
    let an = Analyzer::default();
    let counts: Vec<(&str, usize)> = ["B", "SL", "LZ", "RZ", "W1", "TRIV", "DL"]
        .iter()
        .map(|n| (*n, an.enumerate_hyp_classes(&var(n)).unwrap().len()))
        .collect();
    assert_eq!(
        counts,
        vec![("B", 6), ("SL", 3), ("LZ", 2), ("RZ", 2), ("W1", 4), ("TRIV", 1), ("DL", 16)]
    );
}
