#![allow(dead_code)]

use std::collections::BTreeMap;

use hypervar::catalog::lookup;
use hypervar::finalg::FiniteAlgebra;
use hypervar::freealg::{Analyzer, VarietyPresentation};
use hypervar::hyper::Hypersubstitution;
use hypervar::term::{Identity, Signature, Term, Var};
use proptest::prelude::*;
use rand::Rng;

/// Random terms over `sig` with variables `1..=vars`, at most `depth` deep.
pub fn term_strategy(sig: &Signature, vars: Var, depth: u32) -> BoxedStrategy<Term> {
    let leaf = (1..=vars).prop_map(Term::Var).boxed();
    let sig = sig.clone();
    leaf.prop_recursive(depth, 48, 3, move |inner| {
        let options: Vec<BoxedStrategy<Term>> = (0..sig.len())
            .map(|s| {
                proptest::collection::vec(inner.clone(), sig.arity(s))
                    .prop_map(move |args| Term::App(s, args))
                    .boxed()
            })
            .collect();
        proptest::strategy::Union::new(options).boxed()
    })
    .boxed()
}

pub fn identity_strategy(sig: &Signature, vars: Var, depth: u32) -> BoxedStrategy<Identity> {
    (term_strategy(sig, vars, depth), term_strategy(sig, vars, depth))
        .prop_map(|(l, r)| Identity::new(l, r))
        .boxed()
}

/// A binary operation table on `1..=4` points.
pub fn magma_strategy() -> BoxedStrategy<FiniteAlgebra> {
    (1usize..=4)
        .prop_flat_map(|n| proptest::collection::vec(0..n, n * n).prop_map(move |t| (n, t)))
        .prop_map(|(n, t)| FiniteAlgebra::new(Signature::band(), n, vec![t]).unwrap())
        .boxed()
}

/// Random term of depth at most `depth` over the band signature.
pub fn random_band_term(rng: &mut impl Rng, vars: Var, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        Term::Var(rng.gen_range(1..=vars))
    } else {
        Term::App(
            0,
            vec![
                random_band_term(rng, vars, depth - 1),
                random_band_term(rng, vars, depth - 1),
            ],
        )
    }
}

pub fn var(name: &str) -> VarietyPresentation {
    lookup(name).unwrap()
}

pub fn band_reps(an: &Analyzer) -> Vec<Hypersubstitution> {
    an.enumerate_hyp_classes(&var("B"))
        .unwrap()
        .into_iter()
        .map(|c| c.sigma)
        .collect()
}

pub fn band_hyp(text: &str) -> Hypersubstitution {
    Hypersubstitution::parse(text, &Signature::band()).unwrap()
}

/// Value of the word `w` in a binary algebra under `asg`.
pub fn eval_word(a: &FiniteAlgebra, w: &[Var], asg: &BTreeMap<Var, usize>) -> usize {
    let t = a.table(0);
    let n = a.size();
    w[1..].iter().fold(asg[&w[0]], |acc, v| t[acc * n + asg[v]])
}

/// All words of length `1..=max_len` over letters `1..=letters`.
pub fn words(letters: Var, max_len: usize) -> Vec<Vec<Var>> {
    let mut out: Vec<Vec<Var>> = Vec::new();
    let mut layer: Vec<Vec<Var>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (1..=letters).map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
