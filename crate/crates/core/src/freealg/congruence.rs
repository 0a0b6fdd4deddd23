//! Fully invariant congruences on a finite free band.

use crate::error::{Error, Result};
use crate::finalg::{Elem, FiniteAlgebra, Odometer};
use crate::freealg::FreeAlgebra;
use crate::term::{Identity, Var};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Keeps the smaller index as root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Congruence closure for a single binary operation: each merged pair
/// `(a, b)` enqueues `(ca, cb)` and `(ac, bc)` for every element `c`.
struct Closure<'a> {
    base: &'a FiniteAlgebra,
    uf: UnionFind,
    work: Vec<(Elem, Elem)>,
}

impl Closure<'_> {
    fn merge(&mut self, a: Elem, b: Elem) {
        self.work.push((a, b));
        while let Some((a, b)) = self.work.pop() {
            if !self.uf.union(a, b) {
                continue;
            }
            for c in 0..self.base.size() {
                for s in 0..self.base.sig().len() {
                    self.work.push((self.base.op(s, &[c, a]), self.base.op(s, &[c, b])));
                    self.work.push((self.base.op(s, &[a, c]), self.base.op(s, &[b, c])));
                }
            }
        }
    }
}

/// Quotients a free algebra over binary operations by the least congruence
/// containing every substitution instance of `identities` over its carrier.
///
/// Instances range over the full carrier, so the congruence is fully
/// invariant and the quotient is free for the subvariety. Classes are
/// numbered by their least element, which also supplies the
/// representative term.
pub(crate) fn fully_invariant_quotient(
    free: &FreeAlgebra,
    identities: &[Identity],
    instance_bound: u128,
) -> Result<FreeAlgebra> {
    let base = &free.base;
    let sig = base.sig();
    if (0..sig.len()).any(|s| sig.arity(s) != 2) {
        return Err(Error::InvalidAlgebra(
            "congruence closure supports binary operations only".into(),
        ));
    }
    let m = base.size();
    let needed: u128 = identities
        .iter()
        .map(|id| (m as u128).saturating_pow(id.variables().len() as u32))
        .sum();
    if needed > instance_bound {
        return Err(Error::TooLarge {
            what: "congruence instances",
            needed,
            bound: instance_bound,
        });
    }
    let mut cc = Closure {
        base,
        uf: UnionFind::new(m),
        work: Vec::new(),
    };
    for id in identities {
        let vars: Vec<Var> = id.variables().into_iter().collect();
        let width = vars.last().map_or(1, |&v| v as usize + 1);
        let mut slots = vec![0; width];
        for vals in Odometer::new(m, vars.len()) {
            for (v, &e) in vars.iter().zip(&vals) {
                slots[*v as usize] = e;
            }
            let l = base.eval_slots(&id.lhs, &slots);
            let r = base.eval_slots(&id.rhs, &slots);
            if cc.uf.find(l) != cc.uf.find(r) {
                cc.merge(l, r);
            }
        }
    }
    let mut uf = cc.uf;
    let mut class_of = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for e in 0..m {
        let root = uf.find(e);
        if class_of[root] == usize::MAX {
            class_of[root] = reps.len();
            reps.push(e);
        }
        class_of[e] = class_of[root];
    }
    let quotient = FiniteAlgebra::from_fn(sig.clone(), reps.len(), |s, args| {
        let lifted: Vec<Elem> = args.iter().map(|&a| reps[a]).collect();
        class_of[base.op(s, &lifted)]
    })?;
    Ok(FreeAlgebra {
        base: quotient,
        generators: free.generators.iter().map(|&g| class_of[g]).collect(),
        repr_terms: reps.iter().map(|&r| free.repr_terms[r].clone()).collect(),
        exactness: free.exactness,
    })
}
