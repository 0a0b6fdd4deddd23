//! One line per acceptance criterion. Every bound used below is pinned here.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{band_hyp, band_reps, eval_word, random_band_term, var, words};
use hypervar::catalog::BAND_NAMES;
use hypervar::cli::run;
use hypervar::finalg::{enumerate_models, FiniteAlgebra};
use hypervar::freealg::greenrees::gr_signature;
use hypervar::freealg::{band_axioms, Analyzer, VarietyPresentation};
use hypervar::hyper::apply_hyp;
use hypervar::report::{non_associative_derived_band, verify_paper, Report, Status};
use hypervar::term::{Identity, Signature, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BRIDGE_MODEL_SIZE: usize = 3;
const BRIDGE_IDENTITIES: usize = 200;
const BRIDGE_DEPTH: u32 = 3;
const BRIDGE_SEED: u64 = 0x5eed;
const BRIDGE_LIMIT: Duration = Duration::from_secs(30);

const ORACLE_MODEL_SIZE: usize = 4;
const FREE_BAND_3_LIMIT: Duration = Duration::from_secs(60);
const SMALL_FREE_LIMIT: Duration = Duration::from_secs(1);

const GR_LETTERS: Var = 3;
const GR_LENGTH: usize = 6;
const GR_MODEL_SIZE: usize = 4;

const CLAIM_WITNESS_SIZE: usize = 4;
const VERIFY_LIMIT: Duration = Duration::from_secs(300);
const DL_CLASSES: usize = 16;
const DL_LIMIT: Duration = Duration::from_secs(60);
const BA_CLASSES: usize = 4096;
const BA_LIMIT: Duration = Duration::from_secs(30 * 60);

/// Sub-criteria that cannot hold. They are printed red, and the gate
/// insists they stay red so the explanation next to them stays true.
///
/// 4-witness-size: every band with at most 4 elements is regular, and all
/// derived algebras of regular bands are associative; the smallest witness
/// has 5 elements.
/// 5-fluid-literal: V5 (xzy = zxyz) defines the same variety as SL, so it
/// is fluid as well.
const KNOWN_RED: [&str; 2] = ["4-witness-size", "5-fluid-literal"];

struct Gate {
    lines: Vec<(String, bool)>,
}

impl Gate {
    fn line(&mut self, key: &str, ok: bool, detail: String) {
        let mark = match (ok, KNOWN_RED.contains(&key)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{mark}] {key}: {detail}");
        self.lines.push((key.to_string(), ok));
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Normal form of a word in the free band: its content, the forms of the
/// longest prefix and suffix that miss one letter, and the letters that
/// complete them.
fn band_form(w: &[Var]) -> String {
    let content: BTreeSet<Var> = w.iter().copied().collect();
    if content.len() == 1 {
        return w[0].to_string();
    }
    let pivot = |letters: Vec<(usize, Var)>| {
        let mut seen = BTreeSet::new();
        letters
            .into_iter()
            .find(|(_, c)| {
                seen.insert(*c);
                seen.len() == content.len()
            })
            .unwrap()
    };
    let (i, a) = pivot(w.iter().copied().enumerate().collect());
    let (j, b) = pivot(w.iter().copied().enumerate().rev().collect());
    format!(
        "({:?} {} {a} {b} {})",
        content,
        band_form(&w[..i]),
        band_form(&w[j + 1..])
    )
}

/// Words over `n` letters closed under concatenation, counted by normal form.
fn free_band_oracle(n: Var) -> usize {
    let mut reps: BTreeMap<String, Vec<Var>> =
        (1..=n).map(|v| (band_form(&[v]), vec![v])).collect();
    loop {
        let cur: Vec<Vec<Var>> = reps.values().cloned().collect();
        let before = reps.len();
        for a in &cur {
            for b in &cur {
                let w = [a.as_slice(), b].concat();
                reps.entry(band_form(&w)).or_insert(w);
            }
        }
        if reps.len() == before {
            return reps.len();
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Size of the free band on `n` generators, by the closed formula.
fn free_band_formula(n: u64) -> u64 {
    (1..=n)
        .map(|k| binomial(n, k) * (1..=k).map(|i| (k - i + 1).pow(1 << i)).product::<u64>())
        .sum()
}

/// Closure of the generators under all operations, with terms identified
/// when every model and assignment evaluates them alike.
fn term_oracle(models: &[FiniteAlgebra], sig: &Signature, n: usize) -> usize {
    let points: Vec<(usize, Vec<usize>)> = models
        .iter()
        .enumerate()
        .flat_map(|(i, m)| {
            (0..m.size().pow(n as u32)).map(move |mut k| {
                let asg = (0..n)
                    .map(|_| {
                        let e = k % m.size();
                        k /= m.size();
                        e
                    })
                    .collect();
                (i, asg)
            })
        })
        .collect();
    let mut elems: BTreeSet<Vec<usize>> = (0..n)
        .map(|g| points.iter().map(|(_, asg)| asg[g]).collect())
        .collect();
    loop {
        let cur: Vec<Vec<usize>> = elems.iter().cloned().collect();
        let before = elems.len();
        for s in 0..sig.len() {
            let k = sig.arity(s);
            for idx in 0..cur.len().pow(k as u32) {
                let mut rest = idx;
                let args: Vec<&Vec<usize>> = (0..k)
                    .map(|_| {
                        let a = &cur[rest % cur.len()];
                        rest /= cur.len();
                        a
                    })
                    .collect();
                let value: Vec<usize> = points
                    .iter()
                    .enumerate()
                    .map(|(p, (i, _))| {
                        let a: Vec<usize> = args.iter().map(|v| v[p]).collect();
                        models[*i].op(s, &a)
                    })
                    .collect();
                elems.insert(value);
            }
        }
        if elems.len() == before {
            return elems.len();
        }
    }
}

fn claim<'a>(report: &'a Report, id: &str) -> &'a hypervar::report::Claim {
    report.claims.iter().find(|c| c.id == id).unwrap()
}

fn exact_pass(report: &Report, ids: &[&str]) -> (bool, String) {
    let bad: Vec<String> = ids
        .iter()
        .map(|id| claim(report, id))
        .filter(|c| !(c.status == Status::Pass && c.certainty == "exact"))
        .map(|c| format!("{} {:?} {}", c.id, c.status, c.certainty))
        .collect();
    (bad.is_empty(), if bad.is_empty() { format!("{} claims PASS (exact)", ids.len()) } else { bad.join(", ") })
}

fn is_band(a: &FiniteAlgebra) -> bool {
    let t = a.table(0);
    let n = a.size();
    let m = |x: usize, y: usize| t[x * n + y];
    (0..n).all(|x| m(x, x) == x)
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m(m(x, y), z) == m(x, m(y, z)))))
}

fn json_report() -> String {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["hypervar", "--json", "verify-paper"], &mut out, &mut err);
    assert_eq!(code, 0);
    String::from_utf8(out).unwrap()
}

#[test]
fn acceptance() {
    println!();
    let mut gate = Gate { lines: Vec::new() };
    let band = Signature::band();

    // 1. realization bridge
    let (agree, t) = timed(|| {
        let an = Analyzer::default();
        let reps = band_reps(&an);
        let models = enumerate_models(&band_axioms(), &band, BRIDGE_MODEL_SIZE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(BRIDGE_SEED);
        let ids: Vec<Identity> = (0..BRIDGE_IDENTITIES)
            .map(|_| {
                Identity::new(
                    random_band_term(&mut rng, 3, BRIDGE_DEPTH),
                    random_band_term(&mut rng, 3, BRIDGE_DEPTH),
                )
            })
            .collect();
        let mut total = 0;
        let mut same = 0;
        for a in &models {
            for s in &reps {
                let derived = a.derived(s).unwrap();
                for id in &ids {
                    let image = Identity::new(apply_hyp(s, &id.lhs), apply_hyp(s, &id.rhs));
                    total += 1;
                    same += usize::from(derived.satisfies(id).unwrap() == a.satisfies(&image).unwrap());
                }
            }
        }
        (same, total)
    });
    gate.line(
        "1-bridge",
        agree.0 == agree.1 && t < BRIDGE_LIMIT,
        format!("{}/{} agree in {t:.2?} (limit {BRIDGE_LIMIT:?})", agree.0, agree.1),
    );

    // 2. free-algebra sizes: library value, oracle value, frozen value
    let an = Analyzer::default();
    let band_models = enumerate_models(&band_axioms(), &band, ORACLE_MODEL_SIZE).unwrap();
    for (name, n, frozen) in [("B", 1, 1), ("B", 2, 6), ("B", 3, 159), ("SL", 2, 3), ("W1", 2, 4), ("DL", 2, 4)] {
        let v = var(name);
        let (lib, t) = timed(|| an.free_algebra(&v, n).unwrap().size());
        let oracle = if name == "B" {
            free_band_oracle(n as Var)
        } else if name == "DL" {
            let two = FiniteAlgebra::new(
                v.sig.clone(),
                2,
                vec![vec![0, 0, 0, 1], vec![0, 1, 1, 1]],
            )
            .unwrap();
            term_oracle(&[two], &v.sig, n)
        } else {
            let models: Vec<FiniteAlgebra> = band_models
                .iter()
                .filter(|m| m.satisfies_all(&v.basis()).unwrap())
                .cloned()
                .collect();
            term_oracle(&models, &v.sig, n)
        };
        let formula = (name == "B").then(|| free_band_formula(n as u64) as usize);
        let limit = if (name, n) == ("B", 3) { FREE_BAND_3_LIMIT } else { SMALL_FREE_LIMIT };
        gate.line(
            &format!("2-free-{name}-{n}"),
            lib == frozen && oracle == frozen && formula.is_none_or(|f| f == frozen) && t < limit,
            format!("library {lib}, oracle {oracle}, formula {formula:?}, frozen {frozen}, {t:.2?} (limit {limit:?})"),
        );
    }

    // 3. Green-Rees signatures against band separation
    let (report3, t) = timed(|| {
        let models = enumerate_models(&band_axioms(), &band, GR_MODEL_SIZE).unwrap();
        let ws = words(GR_LETTERS, GR_LENGTH);
        let mut prints: Vec<Vec<usize>> = Vec::new();
        for w in &ws {
            let mut p = Vec::new();
            for m in &models {
                for k in 0..m.size().pow(GR_LETTERS) {
                    let asg: BTreeMap<Var, usize> = (1..=GR_LETTERS)
                        .map(|v| (v, k / m.size().pow(v - 1) % m.size()))
                        .collect();
                    p.push(eval_word(m, w, &asg));
                }
            }
            prints.push(p);
        }
        let sigs: Vec<_> = ws.iter().map(|w| gr_signature(w).unwrap()).collect();
        let mut violations = 0usize;
        let mut pairs = 0usize;
        let mut unseparated = 0usize;
        for i in 0..ws.len() {
            for j in i + 1..ws.len() {
                pairs += 1;
                let separated = prints[i] != prints[j];
                let gr_equal = sigs[i] == sigs[j];
                if separated && gr_equal {
                    violations += 1;
                }
                if !separated && !gr_equal {
                    unseparated += 1;
                }
            }
        }
        (violations, pairs, unseparated)
    });
    gate.line(
        "3-green-rees",
        report3.0 == 0,
        format!(
            "{} violations over {} word pairs; {} gr-distinct pairs not separated by bands of size <= {GR_MODEL_SIZE}; {t:.2?}",
            report3.0, report3.1, report3.2
        ),
    );

    // 4. verify-paper claims
    let (report, t) = timed(|| verify_paper(&Analyzer::default()).unwrap());
    for (key, ids) in [
        ("4-ex-1.1", &["ex-1.1"][..]),
        ("4-thm-1.5", &["thm-1.5-fluid", "thm-1.5-solid"][..]),
        ("4-prop-1.2", &["prop-1.2-solid", "prop-1.2-fluid", "prop-1.2-derived"][..]),
        ("4-prop-1.3", &["prop-1.3-derived", "prop-1.3-fluid", "prop-1.3-solid"][..]),
        ("4-prop-1.4", &["prop-1.4-derived", "prop-1.4-fluid", "prop-1.4-solid"][..]),
        ("4-prop-1.6", &["prop-1.6-solid", "prop-1.6-fluid"][..]),
        ("4-prop-1.1", &["prop-1.1"][..]),
    ] {
        let (ok, detail) = exact_pass(&report, ids);
        gate.line(key, ok, detail);
    }
    let w1 = var("W1");
    let lz_equal = an
        .equals_derived(&w1, &band_hyp("* := x"), &var("LZ"))
        .unwrap();
    let proper = an.is_proper_derived_variety(&w1, &band_hyp("* := x")).unwrap();
    gate.line(
        "4-prop-1.2-lz",
        lz_equal.value && lz_equal.certainty.is_exact() && proper.value && proper.certainty.is_exact(),
        format!("W1_proj1 = LZ: {} ({}), proper: {}", lz_equal.value, lz_equal.certainty, proper.value),
    );
    let witness = non_associative_derived_band(&an, hypervar::report::WITNESS_BAND_SIZE).unwrap();
    let genuine = witness.as_ref().is_some_and(|(a, s, _)| {
        let d = a.derived(s).unwrap();
        is_band(a) && !is_band(&d) && {
            let t = d.table(0);
            let n = d.size();
            let m = |x: usize, y: usize| t[x * n + y];
            (0..n).any(|x| (0..n).any(|y| (0..n).any(|z| m(m(x, y), z) != m(x, m(y, z)))))
        }
    });
    gate.line(
        "4-witness",
        genuine,
        match &witness {
            Some((a, s, at)) => format!("[{s}] on a band of size {} fails associativity at {at}", a.size()),
            None => "none".into(),
        },
    );
    let small = non_associative_derived_band(&an, CLAIM_WITNESS_SIZE).unwrap();
    gate.line(
        "4-witness-size",
        small.is_some(),
        format!(
            "witness among bands of size <= {CLAIM_WITNESS_SIZE}: {}",
            small.map_or("none".to_string(), |(a, s, _)| format!("[{s}] size {}", a.size()))
        ),
    );
    gate.line(
        "4-runtime",
        t < VERIFY_LIMIT,
        format!("verify-paper in {t:.2?} (limit {VERIFY_LIMIT:?})"),
    );

    // 5. fluid band varieties, minimal varieties, solid and fluid
    let bands: Vec<VarietyPresentation> = BAND_NAMES.iter().map(|n| var(n)).collect();
    let fluid: Vec<&str> = bands
        .iter()
        .filter(|v| an.is_fluid(v).unwrap().value)
        .map(|v| v.name.as_str())
        .collect();
    gate.line(
        "5-fluid-literal",
        fluid == ["SL", "LZ", "RZ"],
        format!("fluid band varieties {fluid:?}, expected [\"SL\", \"LZ\", \"RZ\"]"),
    );
    let anchors: Vec<VarietyPresentation> = ["SL", "LZ", "RZ"].iter().map(|n| var(n)).collect();
    let fluid_classes: BTreeSet<&str> = bands
        .iter()
        .filter(|v| an.is_fluid(v).unwrap().value)
        .map(|v| {
            anchors
                .iter()
                .find(|a| an.same_variety(v, a).unwrap().value)
                .map_or("other", |a| a.name.as_str())
        })
        .collect();
    gate.line(
        "5-fluid-up-to-equality",
        fluid_classes == BTreeSet::from(["SL", "LZ", "RZ"]),
        format!("fluid band varieties equal one of {fluid_classes:?}"),
    );
    let catalog = hypervar::catalog::catalog();
    let minimal_not_fluid: Vec<String> = catalog
        .iter()
        .filter(|v| an.is_minimal_in_catalog(v, &catalog).unwrap().value)
        .filter(|v| !an.is_fluid(v).unwrap().value)
        .map(|v| v.name.clone())
        .collect();
    gate.line(
        "5-minimal-fluid",
        minimal_not_fluid.is_empty(),
        format!("minimal but not fluid: {minimal_not_fluid:?}"),
    );
    let mut consistent = Vec::new();
    for name in ["W1", "W2"] {
        let v = var(name);
        let solid = an.is_solid(&v).unwrap();
        let self_derived = an
            .enumerate_hyp_classes(&v)
            .unwrap()
            .iter()
            .all(|c| an.equals_derived(&v, &c.sigma, &v).unwrap().value);
        consistent.push(solid.value && an.is_fluid(&v).unwrap().value == self_derived);
    }
    gate.line(
        "5-solid-fluid",
        consistent.iter().all(|&b| b),
        format!("W1, W2 consistency {consistent:?}"),
    );

    // 6. and 7. lattices and Boolean algebras
    for (key, name, classes, limit) in [
        ("6-DL", "DL", DL_CLASSES, DL_LIMIT),
        ("7-BA", "BA", BA_CLASSES, BA_LIMIT),
    ] {
        let fresh = Analyzer::default();
        let (verdict, t) = timed(|| fresh.is_fluid(&var(name)).unwrap());
        gate.line(
            key,
            verdict.value && verdict.certainty.is_exact() && verdict.classes_checked == classes && t < limit,
            format!(
                "{name} fluid {} ({}), {} classes, {t:.2?} (limit {limit:?})",
                verdict.value, verdict.certainty, verdict.classes_checked
            ),
        );
    }

    // 8. V5 and V6
    let mutual = claim(&report, "prop-1.5-derived");
    let computed = an
        .equals_derived(&var("V5"), &band_hyp("* := yx"), &var("V6"))
        .unwrap();
    let trail = mutual.witnesses.iter().any(|w| w.contains("fails in") && w.contains("witness"));
    let reported = matches!(mutual.status, Status::Pass | Status::Discrepancy);
    gate.line(
        "8-prop-1.5",
        reported && (mutual.status == Status::Pass || (trail && computed.certainty.is_exact())),
        format!(
            "{:?}; V5_rev = V6 computed {} ({}); evidence: {}",
            mutual.status,
            computed.value,
            computed.certainty,
            mutual.witnesses.first().map_or("none", String::as_str)
        ),
    );

    // 9. determinism
    let (first, second) = (json_report(), json_report());
    gate.line(
        "9-determinism",
        first == second && !first.is_empty(),
        format!("two runs, {} bytes each, identical: {}", first.len(), first == second),
    );

    let unexpected: Vec<&str> = gate
        .lines
        .iter()
        .filter(|(k, ok)| !ok && !KNOWN_RED.contains(&k.as_str()))
        .map(|(k, _)| k.as_str())
        .collect();
    let recovered: Vec<&str> = gate
        .lines
        .iter()
        .filter(|(k, ok)| *ok && KNOWN_RED.contains(&k.as_str()))
        .map(|(k, _)| k.as_str())
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
    assert!(recovered.is_empty(), "known failures now pass, update KNOWN_RED: {recovered:?}");
}
