mod common;

use std::collections::BTreeMap;

use common::{band_reps, var};
use hypervar::catalog::{catalog, lookup, BAND_NAMES};
use hypervar::freealg::{Analyzer, Refutation, VarietyPresentation};
use hypervar::term::Var;
use hypervar::variety::{Evidence, Verdict};

fn recheck(an: &Analyzer, verdict: &Verdict) -> usize {
    let mut checked = 0;
    for w in &verdict.witnesses {
        if let Evidence::Fails {
            variety,
            identity,
            refutation,
            ..
        } = &w.evidence
        {
            let v = lookup(variety).unwrap();
            assert!(an.decide(&v, identity).unwrap().is_invalid());
            if let Refutation::Countermodel { model, assignment } = refutation {
                assert!(model.satisfies_all(&v.basis()).unwrap());
                let env: BTreeMap<Var, usize> = assignment.iter().copied().collect();
                assert_ne!(
                    model.evaluate(&identity.lhs, &env).unwrap(),
                    model.evaluate(&identity.rhs, &env).unwrap()
                );
            }
            checked += 1;
        }
    }
    checked
}

#[test]
fn catalog_fluid_and_solid() {
    let an = Analyzer::default();
    let mut rows = Vec::new();
    for v in catalog() {
        let fluid = an.is_fluid(&v).unwrap();
        let solid = an.is_solid(&v).unwrap();
        assert!(fluid.certainty.is_exact() && solid.certainty.is_exact(), "{}", v.name);
        for verdict in [&fluid, &solid] {
            if !verdict.value {
                assert!(!verdict.witnesses.is_empty(), "{}", v.name);
                assert!(recheck(&an, verdict) > 0, "{}", v.name);
            }
        }
        rows.push((v.name.clone(), fluid.value, solid.value));
    }
    let expected = [
        ("B", false, false),
        ("SL", true, false),
        ("LZ", true, false),
        ("RZ", true, false),
        ("W1", false, true),
        ("V1", false, false),
        ("V2", false, false),
        ("V3", false, false),
        ("V4", false, false),
        ("V5", true, false),
        ("V6", false, false),
        ("W2", false, true),
        ("DL", true, false),
        ("BA", true, false),
        ("TRIV", true, true),
    ];
    let expected: Vec<(String, bool, bool)> =
        expected.iter().map(|(n, f, s)| (n.to_string(), *f, *s)).collect();
    assert_eq!(rows, expected);
}

#[test]
fn solid_varieties_are_closed_under_derivation() {
    let an = Analyzer::default();
    let reps = band_reps(&an);
    for name in BAND_NAMES.iter().chain(["TRIV"].iter()) {
        let v = var(name);
        let solid = an.is_solid(&v).unwrap();
        if !(solid.value && solid.certainty.is_exact()) {
            continue;
        }
        for a in an.models(&v, 3).unwrap().iter() {
            for s in &reps {
                assert!(a.derived(s).unwrap().satisfies_all(&v.basis()).unwrap(), "{name} [{s}]");
            }
        }
    }
}

#[test]
fn verdicts_ignore_the_choice_of_basis() {
    let an = Analyzer::default();
    let w1 = var("W1");
    let w1b = VarietyPresentation::band("W1", &["y = yxy", "xyx = x"]).unwrap();
    assert!(an.same_variety(&w1, &w1b).unwrap().value);
    assert_eq!(an.is_fluid(&w1).unwrap().value, an.is_fluid(&w1b).unwrap().value);
    assert_eq!(an.is_solid(&w1).unwrap().value, an.is_solid(&w1b).unwrap().value);
    let classes = |v| an.enumerate_hyp_classes(v).unwrap().len();
    assert_eq!(classes(&w1), classes(&w1b));
}

#[test]
fn derived_inclusion_is_monotone() {
    let an = Analyzer::default();
    let bands: Vec<VarietyPresentation> = BAND_NAMES.iter().map(|n| var(n)).collect();
    let reps = band_reps(&an);
    let inside: Vec<Vec<bool>> = bands
        .iter()
        .map(|w| bands.iter().map(|u| an.subvariety_of(w, u).unwrap().value).collect())
        .collect();
    for v in &bands {
        for s in &reps {
            let into: Vec<bool> = bands
                .iter()
                .map(|w| an.derived_included_in(v, s, w).unwrap().value)
                .collect();
            for (i, _) in bands.iter().enumerate() {
                for (j, _) in bands.iter().enumerate() {
                    if into[i] && inside[i][j] {
                        assert!(into[j], "{}[{s}] in {} but not {}", v.name, bands[i].name, bands[j].name);
                    }
                }
            }
        }
    }
}

#[test]
fn solid_fluidity_is_self_derivation() {
    let an = Analyzer::default();
    for name in ["W1", "W2", "TRIV"] {
        let v = var(name);
        assert!(an.is_solid(&v).unwrap().value);
        let all_equal = an
            .enumerate_hyp_classes(&v)
            .unwrap()
            .iter()
            .all(|c| an.equals_derived(&v, &c.sigma, &v).unwrap().value);
        assert_eq!(an.is_fluid(&v).unwrap().value, all_equal, "{name}");
    }
}

#[test]
fn derivations_between_catalog_varieties() {
    let an = Analyzer::default();
    let rev = common::band_hyp("* := yx");
    for (v, w, value) in [
        ("V1", "V2", true),
        ("V2", "V1", true),
        ("V3", "V4", true),
        ("V4", "V3", true),
        ("V5", "V6", false),
        ("V6", "V5", false),
        ("LZ", "RZ", true),
        ("W1", "W1", true),
        ("B", "B", true),
    ] {
        let verdict = an.equals_derived(&var(v), &rev, &var(w)).unwrap();
        assert_eq!(verdict.value, value, "{v} -> {w}");
        assert!(verdict.certainty.is_exact(), "{v} -> {w}");
        if !value {
            assert!(recheck(&an, &verdict) > 0);
        }
    }
    assert!(an.same_variety(&var("V5"), &var("SL")).unwrap().value);
}

#[test]
fn minimal_varieties_are_fluid() {
    let an = Analyzer::default();
    let all = catalog();
    for v in &all {
        let minimal = an.is_minimal_in_catalog(v, &all).unwrap();
        if minimal.value {
            assert!(an.is_fluid(v).unwrap().value, "{}", v.name);
        }
    }
    let minimal: Vec<String> = all
        .iter()
        .filter(|v| an.is_minimal_in_catalog(v, &all).unwrap().value)
        .map(|v| v.name.clone())
        .collect();
    assert_eq!(minimal, vec!["SL", "LZ", "RZ", "V5", "DL", "BA"]);
}
