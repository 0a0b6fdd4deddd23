//! Derived varieties: inclusion, equality, properness, fluidity and
//! solidity.
//!
//! Quantifiers over all hypersubstitutions run over one representative per
//! class modulo the variety, since hypersubstitutions that agree modulo
//! `V` give the same derived variety.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::{Analyzer, Decision, Exactness, Refutation, VarietyPresentation};
use crate::hyper::Hypersubstitution;
use crate::term::{Identity, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certainty {
    Exact,
    /// Some step only searched up to these bounds.
    Bounded { free_rank: usize, model_size: usize },
}

impl Certainty {
    pub fn is_exact(self) -> bool {
        self == Certainty::Exact
    }

    /// Exact only when both are.
    pub fn and(self, other: Certainty) -> Certainty {
        if self.is_exact() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certainty::Exact => f.write_str("exact"),
            Certainty::Bounded {
                free_rank,
                model_size,
            } => write!(f, "bounded: free rank {free_rank}, models up to size {model_size}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// `identity` fails in `variety`. When it is the image of another
    /// identity under a hypersubstitution, `source` is that identity.
    Fails {
        variety: String,
        identity: Identity,
        source: Option<Identity>,
        refutation: Refutation,
    },
    /// `identity` could not be decided in `variety`.
    Undecided {
        variety: String,
        identity: Identity,
        reason: String,
    },
    /// Deriving by `inverse` and then by the hypersubstitution gives back
    /// every algebra of `variety`.
    Inverse { variety: String, inverse: Hypersubstitution },
    /// The hypersubstitution is trivial modulo `variety`.
    TrivialModulo { variety: String },
    /// `variety` lies strictly between the trivial variety and the subject.
    ProperSubvariety { variety: String },
    /// Free algebras of the derived variety and the target agree up to this
    /// rank.
    FreeAlgebrasAgree { up_to_rank: usize },
    /// The answer holds relative to a catalog of this many varieties.
    CatalogScope { size: usize },
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub sigma: Option<Hypersubstitution>,
    pub role: String,
    pub evidence: Evidence,
}

impl Witness {
    fn new(sigma: Option<&Hypersubstitution>, role: &str, evidence: Evidence) -> Self {
        Witness {
            sigma: sigma.cloned(),
            role: role.to_string(),
            evidence,
        }
    }

    pub fn describe(&self, sig: &Signature) -> String {
        let mut out = String::new();
        if let Some(s) = &self.sigma {
            out.push_str(&format!("[{s}] "));
        }
        out.push_str(&self.role);
        out.push_str(": ");
        out.push_str(&match &self.evidence {
            Evidence::Fails {
                variety,
                identity,
                source,
                refutation,
            } => {
                let from = source
                    .as_ref()
                    .map(|s| format!(" (image of {})", s.display(sig)))
                    .unwrap_or_default();
                format!(
                    "{}{from} fails in {variety}; {}",
                    identity.display(sig),
                    refutation.describe(sig)
                )
            }
            Evidence::Undecided {
                variety,
                identity,
                reason,
            } => format!("{} undecided in {variety}: {reason}", identity.display(sig)),
            Evidence::Inverse { variety, inverse } => {
                format!("inverse [{inverse}] modulo {variety}")
            }
            Evidence::TrivialModulo { variety } => format!("trivial modulo {variety}"),
            Evidence::ProperSubvariety { variety } => {
                format!("{variety} is a nontrivial proper subvariety")
            }
            Evidence::FreeAlgebrasAgree { up_to_rank } => {
                format!("free algebras agree up to rank {up_to_rank}")
            }
            Evidence::CatalogScope { size } => format!("relative to a catalog of {size} varieties"),
        });
        out
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub value: bool,
    pub certainty: Certainty,
    pub witnesses: Vec<Witness>,
    /// Hypersubstitution classes examined, for fluidity and solidity.
    pub classes_checked: usize,
}

impl Verdict {
    fn exact(value: bool) -> Self {
        Verdict {
            value,
            certainty: Certainty::Exact,
            witnesses: Vec::new(),
            classes_checked: 0,
        }
    }

    fn with(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    fn negate(mut self) -> Self {
        self.value = !self.value;
        self
    }
}

fn same_sig(v: &VarietyPresentation, w: &VarietyPresentation) -> Result<()> {
    if v.sig != w.sig {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

impl Analyzer {
    fn bounded(&self) -> Certainty {
        Certainty::Bounded {
            free_rank: self.config().free_rank,
            model_size: self.config().max_model_size,
        }
    }

    /// Decides every identity of `ids` in `v`. Stops at the first refuted
    /// one; undecided ones make the answer bounded.
    fn holds_all(
        &self,
        v: &VarietyPresentation,
        ids: impl IntoIterator<Item = (Identity, Option<Identity>)>,
        sigma: Option<&Hypersubstitution>,
        role: &str,
    ) -> Result<Verdict> {
        let mut verdict = Verdict::exact(true);
        for (id, source) in ids {
            match self.decide(v, &id)? {
                Decision::Valid => {}
                Decision::Invalid(refutation) => {
                    return Ok(Verdict::exact(false).with(Witness::new(
                        sigma,
                        role,
                        Evidence::Fails {
                            variety: v.name.clone(),
                            identity: id,
                            source,
                            refutation,
                        },
                    )))
                }
                Decision::Unknown { reason, .. } => {
                    verdict.certainty = self.bounded();
                    verdict.witnesses.push(Witness::new(
                        sigma,
                        role,
                        Evidence::Undecided {
                            variety: v.name.clone(),
                            identity: id,
                            reason,
                        },
                    ));
                }
            }
        }
        Ok(verdict)
    }

    /// `V ⊆ W`: every basis identity of `W` holds in `V`.
    pub fn subvariety_of(&self, v: &VarietyPresentation, w: &VarietyPresentation) -> Result<Verdict> {
        same_sig(v, w)?;
        let role = format!("identity of {} fails in {}", w.name, v.name);
        self.holds_all(v, w.basis().into_iter().map(|id| (id, None)), None, &role)
    }

    /// Mutual inclusion.
    pub fn same_variety(&self, v: &VarietyPresentation, w: &VarietyPresentation) -> Result<Verdict> {
        let down = self.subvariety_of(v, w)?;
        if !down.value {
            return Ok(down);
        }
        let up = self.subvariety_of(w, v)?;
        Ok(Verdict {
            value: up.value,
            certainty: down.certainty.and(up.certainty),
            witnesses: [down.witnesses, up.witnesses].concat(),
            classes_checked: 0,
        })
    }

    /// `V_σ ⊆ W`: the image of every basis identity of `W` holds in `V`.
    pub fn derived_included_in(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
        w: &VarietyPresentation,
    ) -> Result<Verdict> {
        same_sig(v, w)?;
        if *sigma.sig() != v.sig {
            return Err(Error::SignatureMismatch);
        }
        let images = w.basis().into_iter().map(|id| {
            let image = Identity::new(sigma.apply(&id.lhs), sigma.apply(&id.rhs));
            (image, Some(id))
        });
        let role = format!("derived identity fails, so {}_σ is not inside {}", v.name, w.name);
        self.holds_all(v, images, Some(sigma), &role)
    }

    /// A class `σ'` of `W` with `σ'(σ(f)) = f` in `W` for every symbol and
    /// `W_σ' ⊆ V`. Each algebra `A` of `W` is then `(A_σ')_σ` with
    /// `A_σ'` in `V`, so `W ⊆ V_σ`.
    fn find_inverse(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
        w: &VarietyPresentation,
    ) -> Result<Option<Hypersubstitution>> {
        if !w.has_exact_free_algebras() {
            return Ok(None);
        }
        let sig = &w.sig;
        let mut frees = Vec::with_capacity(sig.len());
        for s in 0..sig.len() {
            frees.push(self.free_algebra(w, sig.arity(s))?);
        }
        let basic: Vec<usize> = (0..sig.len())
            .map(|s| frees[s].element(&Term::basic(s, sig.arity(s))))
            .collect();
        for class in self.enumerate_hyp_classes(w)? {
            let candidate = &class.sigma;
            let undoes = (0..sig.len()).all(|s| {
                frees[s].element(&candidate.apply(sigma.image(s))) == basic[s]
            });
            if !undoes {
                continue;
            }
            let back = self.derived_included_in(w, candidate, v)?;
            if back.value && back.certainty.is_exact() {
                return Ok(Some(class.sigma));
            }
        }
        Ok(None)
    }

    /// Checks that the generator-fixing map from the free algebra of `V_σ`
    /// to that of `W` is a homomorphism, rank by rank. A failure is an
    /// identity of `V_σ` that fails in `W`.
    fn compare_free_algebras(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
        w: &VarietyPresentation,
    ) -> Result<Verdict> {
        let sig = &v.sig;
        let lowest = if sig.has_nullary() { 0 } else { 1 };
        let top = self.config().free_rank;
        for n in lowest..=top {
            let derived = self.derived_free_algebra(v, sigma, n)?;
            let target = self.free_algebra(w, n)?;
            if target.exactness != Exactness::Exact {
                return Ok(Verdict {
                    certainty: self.bounded(),
                    ..Verdict::exact(true)
                });
            }
            let image: Vec<usize> = derived
                .repr_terms
                .iter()
                .map(|t| target.element(t))
                .collect();
            for s in 0..sig.len() {
                let k = sig.arity(s);
                for args in crate::finalg::Odometer::new(derived.size(), k) {
                    let result = derived.base.op(s, &args);
                    let mapped: Vec<usize> = args.iter().map(|&a| image[a]).collect();
                    let lhs_el = target.base.op(s, &mapped);
                    if lhs_el == image[result] {
                        continue;
                    }
                    let lhs = Term::App(s, args.iter().map(|&a| derived.repr(a).clone()).collect());
                    let identity = Identity::new(lhs, derived.repr(result).clone());
                    let refutation = Refutation::FreeAlgebra {
                        rank: n,
                        lhs: target.repr(lhs_el).clone(),
                        rhs: target.repr(image[result]).clone(),
                    };
                    let role = format!("identity of {}_σ fails in {}", v.name, w.name);
                    return Ok(Verdict::exact(false).with(Witness::new(
                        Some(sigma),
                        &role,
                        Evidence::Fails {
                            variety: w.name.clone(),
                            identity,
                            source: None,
                            refutation,
                        },
                    )));
                }
            }
        }
        Ok(Verdict {
            certainty: self.bounded(),
            ..Verdict::exact(true)
        }
        .with(Witness::new(
            Some(sigma),
            &format!("{}_σ = {} up to the free-rank bound", v.name, w.name),
            Evidence::FreeAlgebrasAgree { up_to_rank: top },
        )))
    }

    /// `V_σ = W`. Inclusion in `W` is decided exactly; the reverse
    /// inclusion is first tried through an inverse hypersubstitution
    /// (exact), then by comparing free algebras up to the free rank, where
    /// only a refutation is exact.
    pub fn equals_derived(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
        w: &VarietyPresentation,
    ) -> Result<Verdict> {
        let down = self.derived_included_in(v, sigma, w)?;
        if !down.value {
            return Ok(down);
        }
        if let Some(inverse) = self.find_inverse(v, sigma, w)? {
            let role = format!("{}_σ = {}", v.name, w.name);
            let mut verdict = down.with(Witness::new(
                Some(sigma),
                &role,
                Evidence::Inverse {
                    variety: w.name.clone(),
                    inverse,
                },
            ));
            verdict.value = true;
            return Ok(verdict);
        }
        let up = self.compare_free_algebras(v, sigma, w)?;
        if !up.value {
            return Ok(up);
        }
        Ok(Verdict {
            value: true,
            certainty: down.certainty.and(up.certainty),
            witnesses: [down.witnesses, up.witnesses].concat(),
            classes_checked: 0,
        })
    }

    /// `V_σ ≠ V`.
    pub fn is_proper_derived_variety(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
    ) -> Result<Verdict> {
        match self.is_trivial_mod(v, sigma) {
            Ok(true) => {
                return Ok(Verdict::exact(false).with(Witness::new(
                    Some(sigma),
                    "not proper",
                    Evidence::TrivialModulo {
                        variety: v.name.clone(),
                    },
                )))
            }
            Ok(false) | Err(Error::Undecided(_)) => {}
            Err(e) => return Err(e),
        }
        Ok(self.equals_derived(v, sigma, v)?.negate())
    }

    /// Some class gives a derived variety that is a proper subvariety.
    fn proper_derived_subvariety(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
    ) -> Result<Verdict> {
        let inside = self.derived_included_in(v, sigma, v)?;
        if !inside.value {
            return Ok(inside);
        }
        let proper = self.is_proper_derived_variety(v, sigma)?;
        Ok(Verdict {
            value: proper.value,
            certainty: inside.certainty.and(proper.certainty),
            witnesses: proper.witnesses,
            classes_checked: 0,
        })
    }

    /// `V` contains no proper derived variety.
    pub fn is_fluid(&self, v: &VarietyPresentation) -> Result<Verdict> {
        let classes = self.enumerate_hyp_classes(v)?;
        let mut verdict = Verdict::exact(true);
        verdict.classes_checked = classes.len();
        for class in classes.iter().filter(|c| !c.trivial) {
            let found = self.proper_derived_subvariety(v, &class.sigma)?;
            if found.value {
                let role = format!("{}_σ is a proper derived subvariety", v.name);
                verdict.value = false;
                verdict.certainty = found.certainty;
                verdict.witnesses = found
                    .witnesses
                    .into_iter()
                    .map(|mut w| {
                        w.role = format!("{role}; {}", w.role);
                        w
                    })
                    .collect();
                if found.certainty.is_exact() {
                    return Ok(verdict);
                }
            } else if verdict.value {
                verdict.certainty = verdict.certainty.and(found.certainty);
            }
        }
        Ok(verdict)
    }

    /// `V` contains all its derived varieties.
    pub fn is_solid(&self, v: &VarietyPresentation) -> Result<Verdict> {
        let classes = self.enumerate_hyp_classes(v)?;
        let mut verdict = Verdict::exact(true);
        verdict.classes_checked = classes.len();
        for class in classes.iter().filter(|c| !c.trivial) {
            let inside = self.derived_included_in(v, &class.sigma, v)?;
            if !inside.value {
                return Ok(Verdict {
                    classes_checked: classes.len(),
                    ..inside
                });
            }
            verdict.certainty = verdict.certainty.and(inside.certainty);
            verdict.witnesses.extend(inside.witnesses);
        }
        Ok(verdict)
    }

    /// Every algebra of `V` has one element: `x = y` holds.
    pub fn is_trivial_variety(&self, v: &VarietyPresentation) -> Result<Verdict> {
        let x_eq_y = Identity::new(Term::Var(1), Term::Var(2));
        self.holds_all(v, [(x_eq_y, None)], None, "nontrivial")
    }

    /// Nontrivial, and every nontrivial catalog member contained in `V`
    /// equals `V`.
    pub fn is_minimal_in_catalog(
        &self,
        v: &VarietyPresentation,
        catalog: &[VarietyPresentation],
    ) -> Result<Verdict> {
        let trivial = self.is_trivial_variety(v)?;
        if trivial.value {
            return Ok(Verdict {
                value: false,
                ..trivial
            }
            .with(Witness::new(
                None,
                "trivial varieties are not minimal",
                Evidence::CatalogScope { size: catalog.len() },
            )));
        }
        let mut verdict = Verdict::exact(true);
        verdict.certainty = trivial.certainty;
        for w in catalog.iter().filter(|w| w.sig == v.sig) {
            let inside = self.subvariety_of(w, v)?;
            if !inside.value {
                verdict.certainty = verdict.certainty.and(inside.certainty);
                continue;
            }
            let w_trivial = self.is_trivial_variety(w)?;
            if w_trivial.value {
                continue;
            }
            let back = self.subvariety_of(v, w)?;
            let certainty = inside
                .certainty
                .and(w_trivial.certainty)
                .and(back.certainty);
            if back.value {
                verdict.certainty = verdict.certainty.and(certainty);
                continue;
            }
            let mut found = Verdict {
                value: false,
                certainty,
                witnesses: vec![Witness::new(
                    None,
                    "not minimal",
                    Evidence::ProperSubvariety {
                        variety: w.name.clone(),
                    },
                )],
                classes_checked: 0,
            };
            found.witnesses.extend(back.witnesses);
            return Ok(found);
        }
        Ok(verdict.with(Witness::new(
            None,
            "minimal",
            Evidence::CatalogScope { size: catalog.len() },
        )))
    }
}
