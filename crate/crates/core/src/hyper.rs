//! Hypersubstitutions and their extension to all terms.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::freealg::{Analyzer, Decision, VarietyPresentation};
use crate::term::{parse_term, print_term, Identity, Signature, Term};

/// A choice of one term per operation symbol, of matching arity: the image
/// of a `k`-ary symbol only uses the variables `x1..xk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypersubstitution {
    sig: Signature,
    images: Vec<Term>,
}

impl Hypersubstitution {
    pub fn new(sig: Signature, images: Vec<Term>) -> Result<Self> {
        if images.len() != sig.len() {
            return Err(Error::InvalidHypersubstitution(format!(
                "{} images for {} symbols",
                images.len(),
                sig.len()
            )));
        }
        for (sym, img) in images.iter().enumerate() {
            img.check(&sig)?;
            let arity = sig.arity(sym);
            if let Some(v) = img.variables().into_iter().find(|&v| v as usize > arity) {
                return Err(Error::InvalidHypersubstitution(format!(
                    "image of `{}` uses x{v} but the symbol has arity {arity}",
                    sig.name(sym)
                )));
            }
        }
        Ok(Hypersubstitution { sig, images })
    }

    /// The identity mapping `f -> f(x1, ..., xk)`.
    pub fn trivial(sig: &Signature) -> Self {
        let images = (0..sig.len()).map(|s| Term::basic(s, sig.arity(s))).collect();
        Hypersubstitution {
            sig: sig.clone(),
            images,
        }
    }

    /// Parses bindings `sym := term`, separated by `;` or newlines. Every
    /// symbol must be bound exactly once.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        let bindings: Vec<&str> = text
            .split([';', '\n'])
            .map(str::trim)
            .filter(|b| !b.is_empty())
            .collect();
        Self::from_bindings(&bindings, sig)
    }

    pub fn from_bindings<S: AsRef<str>>(bindings: &[S], sig: &Signature) -> Result<Self> {
        let mut images: Vec<Option<Term>> = vec![None; sig.len()];
        for b in bindings {
            let b = b.as_ref();
            let (name, body) = b.split_once(":=").ok_or_else(|| {
                Error::InvalidHypersubstitution(format!("binding `{b}` lacks `:=`"))
            })?;
            let name = name.trim();
            let sym = sig
                .index_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            if images[sym].is_some() {
                return Err(Error::InvalidHypersubstitution(format!(
                    "`{name}` bound twice"
                )));
            }
            images[sym] = Some(parse_term(body, sig)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(s, t)| {
                t.ok_or_else(|| {
                    Error::InvalidHypersubstitution(format!("no binding for `{}`", sig.name(s)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig.clone(), images)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image(&self, sym: usize) -> &Term {
        &self.images[sym]
    }

    /// True when every image is literally `f(x1, ..., xk)`.
    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(s, t)| *t == Term::basic(s, self.sig.arity(s)))
    }

    /// The extension to all terms: variables stay fixed and
    /// `f(p1..pk)` becomes `image(f)` with `xi` replaced by the image of `pi`.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(*v),
            Term::App(s, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.apply(a)).collect();
                self.images[*s].instantiate(&args)
            }
        }
    }

    /// `self ∘ other`: the hypersubstitution `f -> self.apply(other(f))`.
    ///
    /// Deriving an algebra by `self` and then by `other` is the same as
    /// deriving it once by `self.compose(other)`.
    pub fn compose(&self, other: &Hypersubstitution) -> Result<Self> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        Ok(Hypersubstitution {
            sig: self.sig.clone(),
            images: other.images.iter().map(|t| self.apply(t)).collect(),
        })
    }
}

pub fn apply_hyp(sigma: &Hypersubstitution, t: &Term) -> Term {
    sigma.apply(t)
}

pub fn compose_hyps(s1: &Hypersubstitution, s2: &Hypersubstitution) -> Result<Hypersubstitution> {
    s1.compose(s2)
}

impl fmt::Display for Hypersubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, img) in self.images.iter().enumerate() {
            if s > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} := {}", self.sig.name(s), print_term(img, &self.sig, true))?;
        }
        Ok(())
    }
}

/// One representative per class of hypersubstitutions that agree modulo
/// the identities of a variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypClass {
    pub sigma: Hypersubstitution,
    /// Per symbol, the element of the free algebra of matching rank.
    pub elements: Vec<usize>,
    /// Whether this is the class of the trivial hypersubstitution.
    pub trivial: bool,
}

impl Analyzer {
    /// True iff every image is equal to the basic term in `v`.
    ///
    /// Fails with `Undecided` when some comparison cannot be certified.
    pub fn is_trivial_mod(&self, v: &VarietyPresentation, sigma: &Hypersubstitution) -> Result<bool> {
        if *sigma.sig() != v.sig {
            return Err(Error::SignatureMismatch);
        }
        for (s, img) in sigma.images().iter().enumerate() {
            let id = Identity::new(img.clone(), Term::basic(s, v.sig.arity(s)));
            match self.decide(v, &id)? {
                Decision::Valid => {}
                Decision::Invalid(_) => return Ok(false),
                Decision::Unknown { reason, .. } => {
                    return Err(Error::Undecided(format!(
                        "{} in {}: {reason}",
                        id.display(&v.sig),
                        v.name
                    )))
                }
            }
        }
        Ok(true)
    }

    /// Hypersubstitutions modulo `v`: the image of a `k`-ary symbol ranges
    /// over the elements of the free algebra on `k` generators, named by
    /// their representative terms. Symbols vary in signature order, the
    /// first slowest; elements follow the carrier order.
    pub fn enumerate_hyp_classes(&self, v: &VarietyPresentation) -> Result<Vec<HypClass>> {
        let sig = &v.sig;
        let mut frees = Vec::with_capacity(sig.len());
        for s in 0..sig.len() {
            let f = self.free_algebra(v, sig.arity(s))?;
            if !v.has_exact_free_algebras() {
                return Err(Error::NotLocallyFinite(v.name.clone()));
            }
            frees.push(f);
        }
        let basic: Vec<usize> = (0..sig.len())
            .map(|s| frees[s].element(&Term::basic(s, sig.arity(s))))
            .collect();
        let mut out = Vec::new();
        for elements in frees.iter().map(|f| 0..f.size()).multi_cartesian_product() {
            let images = elements
                .iter()
                .zip(&frees)
                .map(|(&e, f)| f.repr(e).clone())
                .collect();
            out.push(HypClass {
                sigma: Hypersubstitution::new(sig.clone(), images)?,
                trivial: elements == basic,
                elements,
            });
        }
        Ok(out)
    }
}
