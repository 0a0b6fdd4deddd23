//! The claim-by-claim regression report.
//!
//! Every claim is a list of checks: a subject, the expected truth value
//! and the computed verdict. A claim passes when every check agrees with
//! certainty `Exact`. Claim ids are frozen.

use std::fmt::Write;

use serde::Serialize;

use crate::catalog::{catalog, lookup, BAND_NAMES};
use crate::error::Result;
use crate::finalg::{enumerate_models, models_of_size, FiniteAlgebra};
use crate::freealg::{band_axioms, Analyzer, VarietyPresentation};
use crate::hyper::Hypersubstitution;
use crate::term::{Identity, Signature};
use crate::variety::{Certainty, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// An exact verdict disagrees with a claim whose statement is in doubt.
    Discrepancy,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Discrepancy => "DISCREPANCY",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub subject: String,
    pub expected: bool,
    pub computed: bool,
    pub certainty: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub status: Status,
    pub certainty: String,
    pub checks: Vec<Check>,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub discrepancy: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claims: Vec<Claim>,
    pub summary: Summary,
}

impl Report {
    /// 1 when some exact verdict contradicts a claim, else 0.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            writeln!(out, "{:<18} {:<12} {} ({})", c.id, c.status.as_str(), c.statement, c.certainty).unwrap();
            for check in &c.checks {
                let mark = if check.expected == check.computed { "ok" } else { "!!" };
                writeln!(
                    out,
                    "    {mark} {}: expected {}, computed {} ({})",
                    check.subject, check.expected, check.computed, check.certainty
                )
                .unwrap();
            }
            for w in &c.witnesses {
                writeln!(out, "    - {w}").unwrap();
            }
        }
        let s = &self.summary;
        writeln!(
            out,
            "pass {}, fail {}, discrepancy {}, inconclusive {}",
            s.pass, s.fail, s.discrepancy, s.inconclusive
        )
        .unwrap();
        out
    }
}

struct ClaimBuilder {
    id: &'static str,
    statement: &'static str,
    open: bool,
    checks: Vec<(Check, Certainty)>,
    witnesses: Vec<String>,
}

impl ClaimBuilder {
    fn new(id: &'static str, statement: &'static str) -> Self {
        ClaimBuilder {
            id,
            statement,
            open: false,
            checks: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    /// Disagreement becomes a discrepancy rather than a failure.
    fn open(mut self) -> Self {
        self.open = true;
        self
    }

    fn check(&mut self, subject: impl Into<String>, expected: bool, verdict: &Verdict, sig: &Signature) {
        let subject = subject.into();
        for w in &verdict.witnesses {
            self.witnesses.push(format!("{subject}: {}", w.describe(sig)));
        }
        self.raw(subject, expected, verdict.value, verdict.certainty);
    }

    fn raw(&mut self, subject: impl Into<String>, expected: bool, computed: bool, certainty: Certainty) {
        self.checks.push((
            Check {
                subject: subject.into(),
                expected,
                computed,
                certainty: certainty.to_string(),
            },
            certainty,
        ));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.witnesses.push(text.into());
    }

    fn finish(self) -> Claim {
        let certainty = self
            .checks
            .iter()
            .fold(Certainty::Exact, |acc, (_, c)| acc.and(*c));
        let exact_miss = self
            .checks
            .iter()
            .any(|(c, cert)| c.expected != c.computed && cert.is_exact());
        let status = if exact_miss {
            if self.open {
                Status::Discrepancy
            } else {
                Status::Fail
            }
        } else if certainty.is_exact() && !self.checks.is_empty() {
            Status::Pass
        } else {
            Status::Inconclusive
        };
        Claim {
            id: self.id,
            statement: self.statement,
            status,
            certainty: certainty.to_string(),
            checks: self.checks.into_iter().map(|(c, _)| c).collect(),
            witnesses: self.witnesses,
        }
    }
}

fn band_hyp(text: &str) -> Hypersubstitution {
    Hypersubstitution::parse(&format!("* := {text}"), &Signature::band()).expect("static hypersubstitution")
}

fn var(name: &str) -> VarietyPresentation {
    lookup(name).expect("catalog name")
}

/// Fixed identities for the realization check: the band axioms and every
/// extra identity of the band catalog.
fn bridge_identities() -> Vec<Identity> {
    let mut ids = band_axioms();
    for n in BAND_NAMES {
        ids.extend(var(n).extra_basis);
    }
    ids.push(Identity::parse("xy = yx", &Signature::band()).expect("static identity"));
    ids
}

/// Bands up to this size are searched for a non-associative derived algebra.
/// Every band of size at most 4 is regular and yields none.
pub const WITNESS_BAND_SIZE: usize = 5;

/// The first band, by size and then canonical order, with a derived algebra
/// that is not associative, its hypersubstitution class and a failing
/// assignment.
pub fn non_associative_derived_band(
    an: &Analyzer,
    max_size: usize,
) -> Result<Option<(FiniteAlgebra, Hypersubstitution, String)>> {
    let b = var("B");
    let assoc = &band_axioms()[0];
    let classes = an.enumerate_hyp_classes(&b)?;
    for n in 1..=max_size {
        let models = models_of_size(&b.basis(), &b.sig, n)?;
        for class in &classes {
            for m in &models {
                let derived = m.derived(&class.sigma)?;
                if let Some(asg) = derived.counterexample(assoc, 3)? {
                    let at: Vec<String> = asg
                        .iter()
                        .map(|(v, e)| format!("{}={e}", crate::term::var_name(*v)))
                        .collect();
                    return Ok(Some((m.clone(), class.sigma.clone(), at.join(", "))));
                }
            }
        }
    }
    Ok(None)
}

/// Runs every claim in its fixed order.
pub fn verify_paper(an: &Analyzer) -> Result<Report> {
    let band = Signature::band();
    let all = catalog();
    let bands: Vec<VarietyPresentation> = BAND_NAMES.iter().map(|n| var(n)).collect();
    let (proj1, proj2, rev) = (band_hyp("x"), band_hyp("y"), band_hyp("yx"));
    let mut claims = Vec::new();

    for (id, statement, name) in [
        ("ex-1.1", "semilattices form a fluid variety", "SL"),
        ("ex-1.2", "distributive lattices form a fluid variety", "DL"),
        ("ex-1.3", "Boolean algebras form a fluid variety", "BA"),
    ] {
        let v = var(name);
        let mut c = ClaimBuilder::new(id, statement);
        let fluid = an.is_fluid(&v)?;
        c.note(format!("{name}: {} hypersubstitution classes checked", fluid.classes_checked));
        c.check(format!("{name} fluid"), true, &fluid, &v.sig);
        claims.push(c.finish());
    }

    let mut c = ClaimBuilder::new("thm-1.1", "minimal varieties of the catalog are fluid");
    for v in &all {
        let minimal = an.is_minimal_in_catalog(v, &all)?;
        if minimal.value {
            let fluid = an.is_fluid(v)?;
            c.raw(format!("{} minimal", v.name), true, true, minimal.certainty);
            c.check(format!("{} fluid", v.name), true, &fluid, &v.sig);
        }
    }
    claims.push(c.finish());

    let mut c = ClaimBuilder::new(
        "thm-1.2",
        "each nontrivial band variety of the catalog contains a nontrivial fluid variety",
    );
    let atoms: Vec<VarietyPresentation> = ["SL", "LZ", "RZ"].iter().map(|n| var(n)).collect();
    for a in &atoms {
        let fluid = an.is_fluid(a)?;
        c.check(format!("{} fluid", a.name), true, &fluid, &band);
        let trivial = an.is_trivial_variety(a)?;
        c.check(format!("{} trivial", a.name), false, &trivial, &band);
    }
    for v in &bands {
        let mut certainty = Certainty::Exact;
        let mut found = None;
        for a in &atoms {
            let inside = an.subvariety_of(a, v)?;
            certainty = certainty.and(inside.certainty);
            if inside.value {
                found = Some(a.name.clone());
                break;
            }
        }
        if let Some(a) = &found {
            c.note(format!("{a} inside {}", v.name));
        }
        c.raw(format!("{} contains SL, LZ or RZ", v.name), true, found.is_some(), certainty);
    }
    claims.push(c.finish());

    let mut c = ClaimBuilder::new(
        "thm-1.3",
        "an identity holds in a derived algebra iff its image holds in the algebra",
    );
    let b = var("B");
    let models = enumerate_models(&b.basis(), &band, 3)?;
    let ids = bridge_identities();
    let mut agree = true;
    let mut cases = 0;
    for class in an.enumerate_hyp_classes(&b)? {
        for m in &models {
            let derived = m.derived(&class.sigma)?;
            for id in &ids {
                let image = Identity::new(class.sigma.apply(&id.lhs), class.sigma.apply(&id.rhs));
                cases += 1;
                if derived.satisfies(id)? != m.satisfies(&image)? {
                    agree = false;
                    c.note(format!("[{}] disagreement on {}", class.sigma, id.display(&band)));
                }
            }
        }
    }
    c.note(format!("{cases} cases: {} bands up to size 3, 6 classes, {} identities", models.len(), ids.len()));
    c.raw("realization agrees", true, agree, Certainty::Exact);
    claims.push(c.finish());

    let mut c = ClaimBuilder::new(
        "thm-1.4",
        "hypersubstitutions that agree modulo a variety give the same derived variety",
    );
    for v in &bands {
        for class in an.enumerate_hyp_classes(v)? {
            let image = class.sigma.image(0);
            let squared = crate::term::Term::App(0, vec![image.clone(), image.clone()]);
            let twin = Hypersubstitution::new(band.clone(), vec![squared])?;
            let mut same = true;
            for w in &bands {
                let a = an.derived_included_in(v, &class.sigma, w)?;
                let b = an.derived_included_in(v, &twin, w)?;
                same &= a.value == b.value;
            }
            c.raw(
                format!("{} [{}] vs [{}]", v.name, class.sigma, twin),
                true,
                same,
                Certainty::Exact,
            );
        }
    }
    claims.push(c.finish());

    let mut c = ClaimBuilder::new("thm-1.5-fluid", "bands do not form a fluid variety");
    c.check("B fluid", false, &an.is_fluid(&b)?, &band);
    claims.push(c.finish());
    let mut c = ClaimBuilder::new("thm-1.5-solid", "bands do not form a solid variety");
    c.check("B solid", false, &an.is_solid(&b)?, &band);
    claims.push(c.finish());
    let mut c = ClaimBuilder::new(
        "thm-1.5-derived",
        "the projections derive left and right zero semigroups from bands",
    );
    c.check("B_proj1 = LZ", true, &an.equals_derived(&b, &proj1, &var("LZ"))?, &band);
    c.check("B_proj2 = RZ", true, &an.equals_derived(&b, &proj2, &var("RZ"))?, &band);
    claims.push(c.finish());

    let mut c = ClaimBuilder::new(
        "thm-1.6",
        "a band variety of the catalog is fluid iff it equals SL, LZ or RZ",
    );
    for v in &bands {
        let mut expected = false;
        for a in &atoms {
            let eq = an.same_variety(v, a)?;
            if eq.value && eq.certainty.is_exact() {
                expected = true;
                if a.name != v.name {
                    c.note(format!("{} = {}", v.name, a.name));
                }
            }
        }
        let fluid = an.is_fluid(v)?;
        c.raw(format!("{} fluid", v.name), expected, fluid.value, fluid.certainty);
    }
    claims.push(c.finish());

    let mut c = ClaimBuilder::new(
        "thm-1.7",
        "a solid variety is fluid iff every derived variety equals it",
    );
    for v in &all {
        let solid = an.is_solid(v)?;
        if !(solid.value && solid.certainty.is_exact()) {
            continue;
        }
        let fluid = an.is_fluid(v)?;
        let mut all_equal = true;
        let mut certainty = fluid.certainty;
        for class in an.enumerate_hyp_classes(v)? {
            let eq = an.equals_derived(v, &class.sigma, v)?;
            certainty = certainty.and(eq.certainty);
            if !eq.value {
                all_equal = false;
                break;
            }
        }
        c.note(format!(
            "{}: solid, fluid {}, every derived variety equal {all_equal}",
            v.name, fluid.value
        ));
        c.raw(format!("{}: fluid iff all equal", v.name), true, fluid.value == all_equal, certainty);
    }
    claims.push(c.finish());

    let mut c = ClaimBuilder::new("prop-1.1", "a derived algebra of a band need not be a band");
    let found = non_associative_derived_band(an, WITNESS_BAND_SIZE)?;
    if let Some((model, sigma, at)) = &found {
        c.note(format!(
            "[{sigma}] derived algebra of the band `{}` fails associativity at {at}",
            model.to_model_text().trim().replace('\n', "; ")
        ));
        c.note(format!("smallest witness band has size {}", model.size()));
    }
    c.raw(
        format!("non-associative derived band up to size {WITNESS_BAND_SIZE}"),
        true,
        found.is_some(),
        Certainty::Exact,
    );
    claims.push(c.finish());

    let w1 = var("W1");
    let lz = var("LZ");
    let mut c = ClaimBuilder::new("prop-1.2-solid", "rectangular bands form a solid variety");
    c.check("W1 solid", true, &an.is_solid(&w1)?, &band);
    claims.push(c.finish());
    let mut c = ClaimBuilder::new("prop-1.2-fluid", "rectangular bands do not form a fluid variety");
    c.check("W1 fluid", false, &an.is_fluid(&w1)?, &band);
    claims.push(c.finish());
    let mut c = ClaimBuilder::new(
        "prop-1.2-derived",
        "the first projection derives a proper subvariety of rectangular bands, namely LZ",
    );
    c.check("W1_proj1 inside W1", true, &an.derived_included_in(&w1, &proj1, &w1)?, &band);
    c.check("W1_proj1 proper", true, &an.is_proper_derived_variety(&w1, &proj1)?, &band);
    c.check("W1_proj1 = LZ", true, &an.equals_derived(&w1, &proj1, &lz)?, &band);
    claims.push(c.finish());

    type Pair = ([&'static str; 3], [&'static str; 3], &'static str, &'static str, bool);
    let pairs: [Pair; 3] = [
        (
            ["prop-1.3-derived", "prop-1.3-fluid", "prop-1.3-solid"],
            [
                "V1 and V2 are derived from each other by reversal",
                "V1 and V2 are not fluid",
                "V1 and V2 are not solid",
            ],
            "V1",
            "V2",
            false,
        ),
        (
            ["prop-1.4-derived", "prop-1.4-fluid", "prop-1.4-solid"],
            [
                "V3 and V4 are derived from each other by reversal",
                "V3 and V4 are not fluid",
                "V3 and V4 are not solid",
            ],
            "V3",
            "V4",
            false,
        ),
        (
            ["prop-1.5-derived", "prop-1.5-fluid", "prop-1.5-solid"],
            [
                "V5 and V6 are derived from each other by reversal",
                "V5 and V6 are not fluid",
                "V5 and V6 are not solid",
            ],
            "V5",
            "V6",
            true,
        ),
    ];
    for (ids, statements, a, b, open) in pairs {
        let (va, vb) = (var(a), var(b));
        let mark = |c: ClaimBuilder| if open { c.open() } else { c };
        let mut notes = Vec::new();
        if open {
            for v in [&va, &vb] {
                for atom in &atoms {
                    let eq = an.same_variety(v, atom)?;
                    if eq.value && eq.certainty.is_exact() {
                        notes.push(format!("{} = {} ({})", v.name, atom.name, eq.certainty));
                    }
                }
            }
        }

        let mut c = mark(ClaimBuilder::new(ids[0], statements[0]));
        c.check(format!("{a}_rev = {b}"), true, &an.equals_derived(&va, &rev, &vb)?, &band);
        c.check(format!("{b}_rev = {a}"), true, &an.equals_derived(&vb, &rev, &va)?, &band);
        notes.iter().for_each(|n| c.note(n.clone()));
        claims.push(c.finish());

        let mut c = mark(ClaimBuilder::new(ids[1], statements[1]));
        c.check(format!("{a} fluid"), false, &an.is_fluid(&va)?, &band);
        c.check(format!("{b} fluid"), false, &an.is_fluid(&vb)?, &band);
        notes.iter().for_each(|n| c.note(n.clone()));
        claims.push(c.finish());

        let mut c = mark(ClaimBuilder::new(ids[2], statements[2]));
        c.check(format!("{a} solid"), false, &an.is_solid(&va)?, &band);
        c.check(format!("{b} solid"), false, &an.is_solid(&vb)?, &band);
        claims.push(c.finish());
    }

    let w2 = var("W2");
    let mut c = ClaimBuilder::new("prop-1.6-solid", "W2 is solid");
    c.check("W2 solid", true, &an.is_solid(&w2)?, &band);
    claims.push(c.finish());
    let mut c = ClaimBuilder::new("prop-1.6-fluid", "W2 is not fluid");
    c.check("W2 fluid", false, &an.is_fluid(&w2)?, &band);
    claims.push(c.finish());

    let mut solid_not_fluid = Vec::new();
    let mut neither = Vec::new();
    let mut certainty = Certainty::Exact;
    for v in &all {
        let solid = an.is_solid(v)?;
        let fluid = an.is_fluid(v)?;
        certainty = certainty.and(solid.certainty).and(fluid.certainty);
        match (solid.value, fluid.value) {
            (true, false) => solid_not_fluid.push(v.name.clone()),
            (false, false) => neither.push(v.name.clone()),
            _ => {}
        }
    }
    let mut c = ClaimBuilder::new("rem-1.1", "some solid varieties are not fluid");
    c.note(format!("solid, not fluid: {}", solid_not_fluid.join(", ")));
    c.raw("a solid, non-fluid catalog variety", true, !solid_not_fluid.is_empty(), certainty);
    claims.push(c.finish());
    let mut c = ClaimBuilder::new("rem-1.2", "some varieties are neither solid nor fluid");
    c.note(format!("neither: {}", neither.join(", ")));
    c.raw("a catalog variety neither solid nor fluid", true, !neither.is_empty(), certainty);
    claims.push(c.finish());

    let triv = var("TRIV");
    let mut c = ClaimBuilder::new("triv", "the trivial variety is fluid and solid");
    c.check("TRIV fluid", true, &an.is_fluid(&triv)?, &band);
    c.check("TRIV solid", true, &an.is_solid(&triv)?, &band);
    claims.push(c.finish());

    let mut summary = Summary::default();
    for c in &claims {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Discrepancy => summary.discrepancy += 1,
            Status::Inconclusive => summary.inconclusive += 1,
        }
    }
    Ok(Report { claims, summary })
}
