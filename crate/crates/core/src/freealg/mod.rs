//! Finite free algebras and the identity decision procedure.
//!
//! An identity in `n` variables holds in a variety exactly when its two
//! sides name the same element of the free algebra on `n` generators.
//! Free algebras are built by one of three routes:
//!
//! * band base: the free band (Green–Rees), quotiented by the fully
//!   invariant congruence of the extra identities;
//! * declared generating algebras: the subalgebra of a power generated by
//!   the projections;
//! * neither: the same construction over all small models of the basis.
//!   This only approximates the free algebra and never certifies an
//!   identity.

mod congruence;
pub mod greenrees;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finalg::{self, enumerate_models, Assignment, Elem, FiniteAlgebra, Odometer};
use crate::hyper::Hypersubstitution;
use crate::term::{print_term, Identity, Signature, Term, Var};

pub use greenrees::{free_band, gr_signature, same_in_free_band, GreenReesSignature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Exactness {
    Exact,
    SmallModelQuotient,
}

#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub base: FiniteAlgebra,
    /// Images of `x1..xn`.
    pub generators: Vec<Elem>,
    pub repr_terms: Vec<Term>,
    pub exactness: Exactness,
}

impl FreeAlgebra {
    pub fn size(&self) -> usize {
        self.base.size()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Value of `t` when `vars[i]` is sent to generator `i`.
    ///
    /// Panics if `t` uses a variable missing from `vars`.
    pub fn element_of(&self, t: &Term, vars: &[Var]) -> Elem {
        let width = vars.iter().copied().max().unwrap_or(0).max(t.max_var()) as usize + 1;
        let mut slots = vec![usize::MAX; width];
        for (v, &g) in vars.iter().zip(&self.generators) {
            slots[*v as usize] = g;
        }
        self.base.eval_slots(t, &slots)
    }

    /// Value of a term over `x1..xn` at the generators.
    pub fn element(&self, t: &Term) -> Elem {
        let vars: Vec<Var> = (1..=self.rank() as Var).collect();
        self.element_of(t, &vars)
    }

    pub fn repr(&self, e: Elem) -> &Term {
        &self.repr_terms[e]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Base {
    None,
    Band,
}

/// A finitely based variety: implicit base axioms plus extra identities,
/// optionally with finite algebras declared to generate it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarietyPresentation {
    pub name: String,
    pub sig: Signature,
    pub base: Base,
    pub extra_basis: Vec<Identity>,
    pub generating_algebras: Vec<FiniteAlgebra>,
}

pub fn band_axioms() -> Vec<Identity> {
    let b = Signature::band();
    vec![
        Identity::parse("x(yz) = (xy)z", &b).expect("static identity"),
        Identity::parse("xx = x", &b).expect("static identity"),
    ]
}

impl VarietyPresentation {
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        base: Base,
        extra_basis: Vec<Identity>,
        generating_algebras: Vec<FiniteAlgebra>,
    ) -> Result<Self> {
        if base == Base::Band && sig.word_symbol().is_none() {
            return Err(Error::InvalidSignature(
                "band base needs a single binary symbol".into(),
            ));
        }
        for id in &extra_basis {
            id.lhs.check(&sig)?;
            id.rhs.check(&sig)?;
        }
        if generating_algebras.iter().any(|a| *a.sig() != sig) {
            return Err(Error::SignatureMismatch);
        }
        Ok(VarietyPresentation {
            name: name.into(),
            sig,
            base,
            extra_basis,
            generating_algebras,
        })
    }

    /// A subvariety of bands given by extra identities in word syntax.
    pub fn band(name: impl Into<String>, extra: &[&str]) -> Result<Self> {
        let sig = Signature::band();
        let extra = extra
            .iter()
            .map(|t| Identity::parse(t, &sig))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, sig, Base::Band, extra, Vec::new())
    }

    pub fn with_generators(mut self, algebras: Vec<FiniteAlgebra>) -> Result<Self> {
        if algebras.iter().any(|a| *a.sig() != self.sig) {
            return Err(Error::SignatureMismatch);
        }
        self.generating_algebras = algebras;
        Ok(self)
    }

    /// Whether free algebras come from an exact construction rather than
    /// from small models of the basis.
    pub fn has_exact_free_algebras(&self) -> bool {
        self.base == Base::Band || !self.generating_algebras.is_empty()
    }

    /// Implicit axioms followed by the extra identities.
    pub fn basis(&self) -> Vec<Identity> {
        let mut out = match self.base {
            Base::Band => {
                // the band axioms are stated for symbol 0, which is the
                // only symbol of a band signature
                band_axioms()
            }
            Base::None => Vec::new(),
        };
        out.extend(self.extra_basis.iter().cloned());
        out
    }
}

impl fmt::Display for VarietyPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        write!(f, "signature")?;
        for s in self.sig.symbols() {
            write!(f, " {} {}", s.name, s.arity)?;
        }
        writeln!(f)?;
        if self.base == Base::Band {
            writeln!(f, "base band")?;
        }
        for id in &self.extra_basis {
            writeln!(f, "identity {}", id.display(&self.sig))?;
        }
        for a in &self.generating_algebras {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Bounds used by the analyses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest free-algebra rank used to decide identities.
    pub free_rank: usize,
    /// Largest carrier searched for countermodels.
    pub max_model_size: usize,
    /// Cap on substitution instances fed to congruence closure.
    pub instance_bound: u128,
    /// Cap on the size of a generated free algebra.
    pub closure_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            free_rank: 3,
            max_model_size: 4,
            instance_bound: 100_000_000,
            closure_limit: 5_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Refutation {
    /// The two sides are distinct elements of the free algebra of the
    /// given rank; `lhs` and `rhs` are their normal forms in the identity's
    /// own variables.
    FreeAlgebra { rank: usize, lhs: Term, rhs: Term },
    Countermodel {
        model: FiniteAlgebra,
        assignment: Assignment,
    },
}

#[derive(Clone, Debug)]
pub enum Decision {
    Valid,
    Invalid(Refutation),
    Unknown { free_rank: usize, model_size: usize, reason: String },
}

impl Decision {
    pub fn is_valid(&self) -> bool {
        matches!(self, Decision::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Decision::Invalid(_))
    }
}

impl Refutation {
    pub fn describe(&self, sig: &Signature) -> String {
        match self {
            Refutation::FreeAlgebra { rank, lhs, rhs } => format!(
                "free-algebra witness at n={rank}: {} != {}",
                print_term(lhs, sig, true),
                print_term(rhs, sig, true)
            ),
            Refutation::Countermodel { model, assignment } => {
                let asg: Vec<String> = assignment
                    .iter()
                    .map(|(v, e)| format!("{}={e}", crate::term::var_name(*v)))
                    .collect();
                format!(
                    "countermodel: size {} {} at {}",
                    model.size(),
                    describe_model(model),
                    asg.join(", ")
                )
            }
        }
    }
}

/// A short name for small algebras of type (2), used in reports.
pub fn describe_model(a: &FiniteAlgebra) -> &'static str {
    let sig = a.sig();
    if sig.word_symbol().is_none() {
        return "algebra";
    }
    let holds = |text: &str| {
        Identity::parse(text, sig)
            .ok()
            .and_then(|id| a.satisfies(&id).ok())
            .unwrap_or(false)
    };
    if a.size() == 1 {
        "trivial"
    } else if holds("xy = x") {
        "left-zero"
    } else if holds("xy = y") {
        "right-zero"
    } else if !holds("x(yz) = (xy)z") {
        "magma"
    } else if !holds("xx = x") {
        "semigroup"
    } else if holds("xy = yx") {
        "semilattice"
    } else if holds("xyx = x") {
        "rectangular band"
    } else {
        "band"
    }
}

type FreeKey = (VarietyPresentation, usize);

/// Entry point for all variety-level computations. Free algebras and model
/// lists are cached per presentation; the caches are safe to share across
/// threads.
#[derive(Default)]
pub struct Analyzer {
    config: Config,
    free_bands: Mutex<HashMap<usize, Arc<FreeAlgebra>>>,
    free: Mutex<HashMap<FreeKey, Arc<FreeAlgebra>>>,
    models: Mutex<HashMap<FreeKey, Arc<Vec<FiniteAlgebra>>>>,
}

impl Analyzer {
    pub fn new(config: Config) -> Self {
        Analyzer {
            config,
            ..Default::default()
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn free_band(&self, n: usize) -> Result<Arc<FreeAlgebra>> {
        if let Some(f) = self.free_bands.lock().expect("cache lock").get(&n) {
            return Ok(f.clone());
        }
        let f = Arc::new(free_band(n)?);
        self.free_bands
            .lock()
            .expect("cache lock")
            .insert(n, f.clone());
        Ok(f)
    }

    /// The free algebra of `v` on `n` generators.
    pub fn free_algebra(&self, v: &VarietyPresentation, n: usize) -> Result<Arc<FreeAlgebra>> {
        if n > self.config.free_rank {
            return Err(Error::FreeRank {
                requested: n,
                min: 0,
                max: self.config.free_rank,
            });
        }
        let key = (v.clone(), n);
        if let Some(f) = self.free.lock().expect("cache lock").get(&key) {
            return Ok(f.clone());
        }
        let f = Arc::new(self.build_free_algebra(v, n)?);
        self.free.lock().expect("cache lock").insert(key, f.clone());
        Ok(f)
    }

    fn build_free_algebra(&self, v: &VarietyPresentation, n: usize) -> Result<FreeAlgebra> {
        match v.base {
            Base::Band => {
                let mut fb = (*self.free_band(n)?).clone();
                if fb.base.sig() != &v.sig {
                    fb.base = FiniteAlgebra::new(v.sig.clone(), fb.size(), fb.base.tables().to_vec())?;
                }
                if v.extra_basis.is_empty() {
                    return Ok(fb);
                }
                congruence::fully_invariant_quotient(&fb, &v.extra_basis, self.config.instance_bound)
            }
            Base::None if !v.generating_algebras.is_empty() => free_via_generators(
                &v.sig,
                &v.generating_algebras,
                n,
                Exactness::Exact,
                self.config.closure_limit,
            ),
            Base::None => {
                let models = self.models(v, self.config.max_model_size)?;
                if models.is_empty() {
                    return Err(Error::NotLocallyFinite(v.name.clone()));
                }
                free_via_generators(
                    &v.sig,
                    &models,
                    n,
                    Exactness::SmallModelQuotient,
                    self.config.closure_limit,
                )
            }
        }
    }

    /// Models of the basis up to the given size, cached.
    pub fn models(&self, v: &VarietyPresentation, max_size: usize) -> Result<Arc<Vec<FiniteAlgebra>>> {
        let key = (v.clone(), max_size);
        if let Some(m) = self.models.lock().expect("cache lock").get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(enumerate_models(&v.basis(), &v.sig, max_size)?);
        self.models.lock().expect("cache lock").insert(key, m.clone());
        Ok(m)
    }

    /// Decides `id` in `v`.
    ///
    /// Only an exact free algebra can certify `Valid`. Without one the
    /// answer is a countermodel among the small models of the basis, or
    /// `Unknown` with the bounds that were searched.
    pub fn decide(&self, v: &VarietyPresentation, id: &Identity) -> Result<Decision> {
        id.lhs.check(&v.sig)?;
        id.rhs.check(&v.sig)?;
        if id.is_trivial() {
            return Ok(Decision::Valid);
        }
        let vars: Vec<Var> = id.variables().into_iter().collect();
        let mut reason = format!(
            "{} variables exceed free rank {}",
            vars.len(),
            self.config.free_rank
        );
        if !v.has_exact_free_algebras() {
            reason = "no exact free algebra".into();
        } else if vars.len() <= self.config.free_rank {
            match self.free_algebra(v, vars.len()) {
                Ok(f) if f.exactness == Exactness::Exact => {
                    let l = f.element_of(&id.lhs, &vars);
                    let r = f.element_of(&id.rhs, &vars);
                    if l == r {
                        return Ok(Decision::Valid);
                    }
                    return Ok(Decision::Invalid(Refutation::FreeAlgebra {
                        rank: vars.len(),
                        lhs: rename(f.repr(l), &vars),
                        rhs: rename(f.repr(r), &vars),
                    }));
                }
                Ok(_) => reason = "no exact free algebra".into(),
                Err(e) => reason = e.to_string(),
            }
        }
        if let Some((model, assignment)) = self.find_countermodel(v, id)? {
            return Ok(Decision::Invalid(Refutation::Countermodel { model, assignment }));
        }
        Ok(Decision::Unknown {
            free_rank: self.config.free_rank,
            model_size: self.config.max_model_size,
            reason,
        })
    }

    /// The first model of the basis (in canonical order, up to the
    /// configured size) that falsifies `id`.
    pub fn find_countermodel(
        &self,
        v: &VarietyPresentation,
        id: &Identity,
    ) -> Result<Option<(FiniteAlgebra, Assignment)>> {
        let models = self.models(v, self.config.max_model_size)?;
        for m in models.iter() {
            if let Some(asg) = m.counterexample(id, 8)? {
                return Ok(Some((m.clone(), asg)));
            }
        }
        Ok(None)
    }

    /// The free algebra of the derived variety `v_sigma` on `n` generators:
    /// the subalgebra of the derived free algebra of `v` generated by the
    /// free generators. Terms name elements through the derived operations.
    pub fn derived_free_algebra(
        &self,
        v: &VarietyPresentation,
        sigma: &Hypersubstitution,
        n: usize,
    ) -> Result<FreeAlgebra> {
        let f = self.free_algebra(v, n)?;
        if f.exactness != Exactness::Exact {
            return Err(Error::NotLocallyFinite(v.name.clone()));
        }
        let derived = f.base.derived(sigma)?;
        let sub = finalg::generated_subalgebra(&derived, &f.generators)?;
        Ok(FreeAlgebra {
            base: sub.algebra,
            generators: sub.generators,
            repr_terms: sub.repr_terms,
            exactness: Exactness::Exact,
        })
    }
}

/// Renames generator variables `x_i` to `vars[i-1]`.
fn rename(t: &Term, vars: &[Var]) -> Term {
    match t {
        Term::Var(v) => Term::Var(vars[*v as usize - 1]),
        Term::App(s, args) => Term::App(*s, args.iter().map(|a| rename(a, vars)).collect()),
    }
}

/// The subalgebra of `prod_A A^(A^n)` generated by the `n` projections.
pub fn free_via_generators(
    sig: &Signature,
    algebras: &[FiniteAlgebra],
    n: usize,
    exactness: Exactness,
    limit: usize,
) -> Result<FreeAlgebra> {
    let components: Vec<(usize, Vec<Elem>)> = algebras
        .iter()
        .enumerate()
        .flat_map(|(i, a)| Odometer::new(a.size(), n).map(move |asg| (i, asg)))
        .collect();
    let gens: Vec<Vec<Elem>> = (0..n)
        .map(|g| components.iter().map(|(_, asg)| asg[g]).collect())
        .collect();
    let apply = |s: usize, args: &[&Vec<Elem>]| -> Vec<Elem> {
        let mut buf = Vec::with_capacity(args.len());
        components
            .iter()
            .enumerate()
            .map(|(c, (a, _))| {
                buf.clear();
                buf.extend(args.iter().map(|t| t[c]));
                algebras[*a].op(s, &buf)
            })
            .collect()
    };
    let c = finalg::close(sig, &gens, apply, limit)?;
    Ok(FreeAlgebra {
        base: FiniteAlgebra::new(sig.clone(), c.elements.len(), c.tables)?,
        generators: c.generators,
        repr_terms: c.repr_terms,
        exactness,
    })
}
