//! Finite algebras: evaluation, satisfaction, derived algebras, isomorphism,
//! products, generated subalgebras and a small exhaustive model finder.
//!
//! Carriers are always `{0, .., size-1}`. A `k`-ary table is stored
//! row-major: the cell of `(a1, .., ak)` is `a1*size^(k-1) + .. + ak`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hyper::Hypersubstitution;
use crate::term::{Identity, Signature, Term, Var};

pub type Elem = usize;

/// Default bound on the number of variables `satisfies` will quantify over.
pub const DEFAULT_VARIABLE_LIMIT: usize = 6;
/// Largest carrier `enumerate_models` accepts.
pub const MODEL_SIZE_GUARD: usize = 6;
/// Largest product `direct_product` will materialize.
pub const PRODUCT_BOUND: u128 = 10_000_000;

const UNSET: Elem = Elem::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<Elem>>,
}

/// A variable assignment that falsifies an identity.
pub type Assignment = Vec<(Var, Elem)>;

impl FiniteAlgebra {
    pub fn new(sig: Signature, size: usize, tables: Vec<Vec<Elem>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("empty carrier".into()));
        }
        if tables.len() != sig.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.len()
            )));
        }
        for (s, table) in tables.iter().enumerate() {
            let cells = checked_pow(size, sig.arity(s))
                .ok_or_else(|| Error::InvalidAlgebra("table too large".into()))?;
            if table.len() != cells {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has {} entries, expected {cells}",
                    sig.name(s),
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&e| e >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "entry {bad} of `{}` outside carrier of size {size}",
                    sig.name(s)
                )));
            }
        }
        Ok(FiniteAlgebra { sig, size, tables })
    }

    /// Builds every table by calling `op(symbol, args)`.
    pub fn from_fn(
        sig: Signature,
        size: usize,
        mut op: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<Self> {
        let tables = (0..sig.len())
            .map(|s| {
                let k = sig.arity(s);
                Odometer::new(size, k).map(|args| op(s, &args)).collect()
            })
            .collect();
        Self::new(sig, size, tables)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, sym: usize) -> &[Elem] {
        &self.tables[sym]
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    fn cell(&self, args: &[Elem]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn op(&self, sym: usize, args: &[Elem]) -> Elem {
        self.tables[sym][self.cell(args)]
    }

    /// Evaluates `t` under `asg`, indexed by variable (slot 0 unused).
    pub(crate) fn eval_slots(&self, t: &Term, asg: &[Elem]) -> Elem {
        match t {
            Term::Var(v) => asg[*v as usize],
            Term::App(s, args) => match args.len() {
                0 => self.tables[*s][0],
                1 => self.tables[*s][self.eval_slots(&args[0], asg)],
                2 => {
                    let a = self.eval_slots(&args[0], asg);
                    let b = self.eval_slots(&args[1], asg);
                    self.tables[*s][a * self.size + b]
                }
                _ => {
                    let cell = args
                        .iter()
                        .fold(0, |acc, a| acc * self.size + self.eval_slots(a, asg));
                    self.tables[*s][cell]
                }
            },
        }
    }

    pub fn evaluate(&self, t: &Term, asg: &BTreeMap<Var, Elem>) -> Result<Elem> {
        let vars = t.variables();
        let mut slots = vec![0; t.max_var() as usize + 1];
        for v in vars {
            let e = *asg.get(&v).ok_or(Error::MissingVariable(v))?;
            if e >= self.size {
                return Err(Error::InvalidAlgebra(format!("element {e} outside carrier")));
            }
            slots[v as usize] = e;
        }
        Ok(self.eval_slots(t, &slots))
    }

    pub fn satisfies(&self, id: &Identity) -> Result<bool> {
        Ok(self.counterexample(id, DEFAULT_VARIABLE_LIMIT)?.is_none())
    }

    /// Searches assignments in odometer order (first variable slowest) and
    /// returns the first one that separates the two sides.
    pub fn counterexample(&self, id: &Identity, var_limit: usize) -> Result<Option<Assignment>> {
        let vars: Vec<Var> = id.variables().into_iter().collect();
        if vars.len() > var_limit {
            return Err(Error::VariableLimit {
                found: vars.len(),
                limit: var_limit,
            });
        }
        let width = vars.last().map_or(1, |&v| v as usize + 1);
        let mut slots = vec![0; width];
        for vals in Odometer::new(self.size, vars.len()) {
            for (v, &e) in vars.iter().zip(&vals) {
                slots[*v as usize] = e;
            }
            if self.eval_slots(&id.lhs, &slots) != self.eval_slots(&id.rhs, &slots) {
                return Ok(Some(vars.iter().copied().zip(vals).collect()));
            }
        }
        Ok(None)
    }

    pub fn satisfies_all(&self, ids: &[Identity]) -> Result<bool> {
        for id in ids {
            if !self.satisfies(id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same carrier; the table of `f` is the term function of `sigma(f)`.
    pub fn derived(&self, sigma: &Hypersubstitution) -> Result<FiniteAlgebra> {
        if *sigma.sig() != self.sig {
            return Err(Error::SignatureMismatch);
        }
        let tables = (0..self.sig.len())
            .map(|s| {
                let k = self.sig.arity(s);
                let image = sigma.image(s);
                let mut slots = vec![0; k + 1];
                Odometer::new(self.size, k)
                    .map(|args| {
                        slots[1..].copy_from_slice(&args);
                        self.eval_slots(image, &slots)
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteAlgebra {
            sig: self.sig.clone(),
            size: self.size,
            tables,
        })
    }

    /// Relabels the carrier: element `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[Elem]) -> FiniteAlgebra {
        let mut tables: Vec<Vec<Elem>> = self.tables.iter().map(|t| vec![0; t.len()]).collect();
        for (s, table) in self.tables.iter().enumerate() {
            let k = self.sig.arity(s);
            for (cell, args) in Odometer::new(self.size, k).enumerate() {
                let mapped: Vec<Elem> = args.iter().map(|&a| perm[a]).collect();
                tables[s][self.cell(&mapped)] = perm[table[cell]];
            }
        }
        FiniteAlgebra {
            sig: self.sig.clone(),
            size: self.size,
            tables,
        }
    }

    /// A bijection `phi` with `phi(f(a..)) = f(phi(a)..)`, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteAlgebra) -> Option<Vec<Elem>> {
        if self.sig != other.sig || self.size != other.size {
            return None;
        }
        let inv_a = self.invariants();
        let inv_b = other.invariants();
        if inv_a.iter().sorted().ne(inv_b.iter().sorted()) {
            return None;
        }
        let mut search = IsoSearch {
            a: self,
            b: other,
            inv_a: &inv_a,
            inv_b: &inv_b,
            phi: vec![UNSET; self.size],
            used: vec![false; self.size],
            trail: Vec::new(),
        };
        search.solve().then_some(search.phi)
    }

    /// Per-element isomorphism invariants: how often the element occurs as
    /// a value of each table, and whether it is fixed by each diagonal.
    fn invariants(&self) -> Vec<Vec<usize>> {
        let mut inv = vec![vec![0; 2 * self.sig.len()]; self.size];
        for (s, table) in self.tables.iter().enumerate() {
            for &e in table {
                inv[e][2 * s] += 1;
            }
            let k = self.sig.arity(s);
            if k > 0 {
                for (a, row) in inv.iter_mut().enumerate() {
                    let diag = vec![a; k];
                    row[2 * s + 1] = usize::from(self.op(s, &diag) == a);
                }
            }
        }
        inv
    }

    /// Model text: `size n`, then one `sym: entries` line per symbol.
    pub fn to_model_text(&self) -> String {
        self.to_string()
    }

    /// Parses the model text format. Without a signature, optional
    /// `signature <name> <arity> ...` lines declare one; otherwise arities
    /// are inferred from the table lengths.
    pub fn parse_model(text: &str, sig: Option<&Signature>) -> Result<FiniteAlgebra> {
        let mut declared: Vec<(String, usize)> = Vec::new();
        let mut size = None;
        let mut rows: Vec<(String, Vec<Elem>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse {
                column: lineno + 1,
                message: m,
            };
            if let Some(rest) = line.strip_prefix("signature ") {
                declared.extend(parse_signature_fields(rest).map_err(err)?);
            } else if let Some(rest) = line.strip_prefix("size ") {
                if size.is_some() {
                    return Err(err("second `size` line".into()));
                }
                size = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad size `{rest}`")))?,
                );
            } else if let Some((name, entries)) = line.rsplit_once(':') {
                let entries = entries
                    .split_whitespace()
                    .map(|e| e.parse::<Elem>().map_err(|_| err(format!("bad entry `{e}`"))))
                    .collect::<Result<Vec<_>>>()?;
                rows.push((name.trim().to_string(), entries));
            } else {
                return Err(err(format!("unrecognized line `{line}`")));
            }
        }
        let size = size.ok_or_else(|| Error::InvalidAlgebra("missing `size` line".into()))?;
        let sig = match sig {
            Some(s) => s.clone(),
            None if !declared.is_empty() => Signature::new(declared)?,
            None => {
                let mut inferred = Vec::new();
                for (name, entries) in &rows {
                    let arity = (0..=8)
                        .find(|&k| checked_pow(size, k) == Some(entries.len()))
                        .filter(|_| size > 1 || entries.len() == 1)
                        .ok_or_else(|| {
                            Error::InvalidAlgebra(format!(
                                "cannot infer arity of `{name}`; add a `signature` line"
                            ))
                        })?;
                    inferred.push((name.clone(), arity));
                }
                Signature::new(inferred)?
            }
        };
        let mut tables: Vec<Option<Vec<Elem>>> = vec![None; sig.len()];
        for (name, entries) in rows {
            let s = sig
                .index_of(&name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            if tables[s].replace(entries).is_some() {
                return Err(Error::InvalidAlgebra(format!("two tables for `{name}`")));
            }
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(s, t)| {
                t.ok_or_else(|| Error::InvalidAlgebra(format!("no table for `{}`", sig.name(s))))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(sig, size, tables)
    }
}

/// Parses `name arity name arity ...`.
pub(crate) fn parse_signature_fields(text: &str) -> std::result::Result<Vec<(String, usize)>, String> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.is_empty() || fields.len() % 2 != 0 {
        return Err(format!("expected `name arity` pairs, got `{text}`"));
    }
    fields
        .chunks(2)
        .map(|c| {
            c[1].parse::<usize>()
                .map(|a| (c[0].to_string(), a))
                .map_err(|_| format!("bad arity `{}`", c[1]))
        })
        .collect()
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size {}", self.size)?;
        for (s, table) in self.tables.iter().enumerate() {
            write!(f, "{}:", self.sig.name(s))?;
            for e in table {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn evaluate(a: &FiniteAlgebra, t: &Term, asg: &BTreeMap<Var, Elem>) -> Result<Elem> {
    a.evaluate(t, asg)
}

pub fn satisfies(a: &FiniteAlgebra, id: &Identity) -> Result<bool> {
    a.satisfies(id)
}

pub fn derived_algebra(a: &FiniteAlgebra, sigma: &Hypersubstitution) -> Result<FiniteAlgebra> {
    a.derived(sigma)
}

pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Elem>> {
    a.isomorphism_to(b)
}

/// True when the derived algebra is not isomorphic to the original.
pub fn is_proper_derived_algebra(a: &FiniteAlgebra, sigma: &Hypersubstitution) -> Result<bool> {
    Ok(a.isomorphism_to(&a.derived(sigma)?).is_none())
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// All tuples in `{0..base}^len`, last position fastest.
pub(crate) struct Odometer {
    base: usize,
    current: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(base: usize, len: usize) -> Self {
        Odometer {
            base,
            current: vec![0; len],
            done: base == 0 && len > 0,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.base {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

struct IsoSearch<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    inv_a: &'a [Vec<usize>],
    inv_b: &'a [Vec<usize>],
    phi: Vec<Elem>,
    used: Vec<bool>,
    trail: Vec<Elem>,
}

impl IsoSearch<'_> {
    fn assign(&mut self, x: Elem, y: Elem) -> bool {
        if self.used[y] || self.inv_a[x] != self.inv_b[y] {
            return false;
        }
        self.phi[x] = y;
        self.used[y] = true;
        self.trail.push(x);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail");
            self.used[self.phi[x]] = false;
            self.phi[x] = UNSET;
        }
    }

    /// Forces images of table values whose arguments are all mapped.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for s in 0..self.a.sig.len() {
                let k = self.a.sig.arity(s);
                for (cell, args) in Odometer::new(self.a.size, k).enumerate() {
                    if args.iter().any(|&x| self.phi[x] == UNSET) {
                        continue;
                    }
                    let mapped: Vec<Elem> = args.iter().map(|&x| self.phi[x]).collect();
                    let want = self.b.op(s, &mapped);
                    let r = self.a.tables[s][cell];
                    if self.phi[r] == UNSET {
                        if !self.assign(r, want) {
                            return false;
                        }
                        changed = true;
                    } else if self.phi[r] != want {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn solve(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let Some(x) = self.phi.iter().position(|&p| p == UNSET) else {
            return true;
        };
        for y in 0..self.b.size {
            let mark = self.trail.len();
            if self.assign(x, y) && self.propagate() && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// All models of `ids` with carriers of size `1..=max_size`, one per
/// isomorphism class, ordered by size and then by the lexicographically
/// least relabeled table sequence (which is the table returned).
pub fn enumerate_models(ids: &[Identity], sig: &Signature, max_size: usize) -> Result<Vec<FiniteAlgebra>> {
    if max_size > MODEL_SIZE_GUARD {
        return Err(Error::ModelSizeGuard {
            requested: max_size,
            guard: MODEL_SIZE_GUARD,
        });
    }
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(models_of_size(ids, sig, n)?);
    }
    Ok(out)
}

/// Models of one carrier size, up to isomorphism, in canonical order.
pub fn models_of_size(ids: &[Identity], sig: &Signature, n: usize) -> Result<Vec<FiniteAlgebra>> {
    for id in ids {
        id.lhs.check(sig)?;
        id.rhs.check(sig)?;
    }
    let mut search = ModelSearch::new(ids, sig, n);
    search.start();
    search
        .found
        .into_iter()
        .map(|flat| {
            let mut tables = Vec::with_capacity(sig.len());
            let mut rest = flat.as_slice();
            for s in 0..sig.len() {
                let (head, tail) = rest.split_at(n.pow(sig.arity(s) as u32));
                tables.push(head.to_vec());
                rest = tail;
            }
            FiniteAlgebra::new(sig.clone(), n, tables)
        })
        .collect()
}

/// Depth-first table filling with watched cells: every identity instance
/// waits on the first unassigned cell its evaluation needs and is only
/// re-examined when that cell gets a value.
struct ModelSearch<'a> {
    sig: &'a Signature,
    n: usize,
    tables: Vec<Vec<Elem>>,
    offsets: Vec<usize>,
    cells: Vec<(usize, usize)>,
    instances: Vec<(&'a Identity, Vec<Elem>)>,
    watch: Vec<Vec<usize>>,
    perms: Vec<Vec<Elem>>,
    found: BTreeSet<Vec<Elem>>,
}

enum Probe {
    Value(Elem),
    Blocked(usize),
}

impl<'a> ModelSearch<'a> {
    fn new(ids: &'a [Identity], sig: &'a Signature, n: usize) -> Self {
        let tables: Vec<Vec<Elem>> = (0..sig.len())
            .map(|s| vec![UNSET; n.pow(sig.arity(s) as u32)])
            .collect();
        let mut offsets = Vec::with_capacity(tables.len());
        let mut total = 0;
        for t in &tables {
            offsets.push(total);
            total += t.len();
        }
        let cells = tables
            .iter()
            .enumerate()
            .flat_map(|(s, t)| (0..t.len()).map(move |c| (s, c)))
            .collect();
        let mut instances = Vec::new();
        for id in ids {
            let vars: Vec<Var> = id.variables().into_iter().collect();
            let width = vars.last().map_or(1, |&v| v as usize + 1);
            for vals in Odometer::new(n, vars.len()) {
                let mut slots = vec![0; width];
                for (v, e) in vars.iter().zip(vals) {
                    slots[*v as usize] = e;
                }
                instances.push((id, slots));
            }
        }
        ModelSearch {
            sig,
            n,
            tables,
            offsets,
            cells,
            instances,
            watch: vec![Vec::new(); total],
            perms: (0..n).permutations(n).collect(),
            found: BTreeSet::new(),
        }
    }

    fn probe(&self, t: &Term, slots: &[Elem]) -> Probe {
        match t {
            Term::Var(v) => Probe::Value(slots[*v as usize]),
            Term::App(s, args) => {
                let mut cell = 0;
                for a in args {
                    match self.probe(a, slots) {
                        Probe::Value(e) => cell = cell * self.n + e,
                        blocked => return blocked,
                    }
                }
                match self.tables[*s][cell] {
                    UNSET => Probe::Blocked(self.offsets[*s] + cell),
                    e => Probe::Value(e),
                }
            }
        }
    }

    /// `Ok(None)` if the instance holds, `Ok(Some(cell))` if it waits on
    /// `cell`, `Err(())` if it fails.
    fn examine(&self, inst: usize) -> std::result::Result<Option<usize>, ()> {
        let (id, slots) = &self.instances[inst];
        let l = match self.probe(&id.lhs, slots) {
            Probe::Value(e) => e,
            Probe::Blocked(c) => return Ok(Some(c)),
        };
        match self.probe(&id.rhs, slots) {
            Probe::Value(r) if r == l => Ok(None),
            Probe::Value(_) => Err(()),
            Probe::Blocked(c) => Ok(Some(c)),
        }
    }

    fn start(&mut self) {
        for inst in 0..self.instances.len() {
            match self.examine(inst) {
                Ok(None) => {}
                Ok(Some(c)) => self.watch[c].push(inst),
                Err(()) => return,
            }
        }
        self.run(0);
    }

    fn run(&mut self, depth: usize) {
        if depth == self.cells.len() {
            let canon = self.canonical();
            self.found.insert(canon);
            return;
        }
        let (s, c) = self.cells[depth];
        let cell = self.offsets[s] + c;
        let waiting = std::mem::take(&mut self.watch[cell]);
        let mut moved: Vec<usize> = Vec::new();
        for v in 0..self.n {
            self.tables[s][c] = v;
            let mut ok = true;
            for &inst in &waiting {
                match self.examine(inst) {
                    Ok(None) => {}
                    Ok(Some(next)) => {
                        self.watch[next].push(inst);
                        moved.push(next);
                    }
                    Err(()) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                self.run(depth + 1);
            }
            while let Some(next) = moved.pop() {
                self.watch[next].pop();
            }
        }
        self.tables[s][c] = UNSET;
        self.watch[cell] = waiting;
    }

    fn canonical(&self) -> Vec<Elem> {
        let mut best: Option<Vec<Elem>> = None;
        for perm in &self.perms {
            let mut flat = Vec::new();
            for (s, table) in self.tables.iter().enumerate() {
                let k = self.sig.arity(s);
                let mut relabeled = vec![0; table.len()];
                for (cell, args) in Odometer::new(self.n, k).enumerate() {
                    let idx = args.iter().fold(0, |acc, &a| acc * self.n + perm[a]);
                    relabeled[idx] = perm[table[cell]];
                }
                flat.extend(relabeled);
            }
            if best.as_ref().is_none_or(|b| flat < *b) {
                best = Some(flat);
            }
        }
        best.expect("at least one permutation")
    }
}

/// Componentwise product. The first factor is the most significant digit
/// of an element index; see [`product_index`].
pub fn direct_product(factors: &[FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidAlgebra("empty product".into()))?;
    if factors.iter().any(|f| f.sig != first.sig) {
        return Err(Error::SignatureMismatch);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size).collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    if total > PRODUCT_BOUND {
        return Err(Error::TooLarge {
            what: "product elements",
            needed: total,
            bound: PRODUCT_BOUND,
        });
    }
    let max_arity = first.sig.arities().into_iter().max().unwrap_or(0) as u32;
    let cells = total.saturating_pow(max_arity);
    if cells > 10 * PRODUCT_BOUND {
        return Err(Error::TooLarge {
            what: "product table cells",
            needed: cells,
            bound: 10 * PRODUCT_BOUND,
        });
    }
    let total = total as usize;
    let decoded: Vec<Vec<Elem>> = (0..total).map(|i| decode_index(&sizes, i)).collect();
    FiniteAlgebra::from_fn(first.sig.clone(), total, |s, args| {
        let comps: Vec<Elem> = factors
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let a: Vec<Elem> = args.iter().map(|&x| decoded[x][j]).collect();
                f.op(s, &a)
            })
            .collect();
        product_index(&sizes, &comps)
    })
}

pub fn product_index(sizes: &[usize], tuple: &[Elem]) -> Elem {
    sizes.iter().zip(tuple).fold(0, |acc, (&s, &t)| acc * s + t)
}

fn decode_index(sizes: &[usize], mut index: usize) -> Vec<Elem> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = index % s;
        index /= s;
    }
    out
}

/// A subalgebra together with where its elements came from and a term
/// naming each of them.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: FiniteAlgebra,
    /// `elements[i]` is the element of the ambient algebra numbered `i` here.
    pub elements: Vec<Elem>,
    /// Position of each generator (generator `i` is named `x{i+1}`).
    pub generators: Vec<Elem>,
    pub repr_terms: Vec<Term>,
}

/// Closure of `gens` (and the constants) under all operations. Elements are
/// numbered in discovery order; generator `i` is represented by `x{i+1}`.
pub fn generated_subalgebra(a: &FiniteAlgebra, gens: &[Elem]) -> Result<Subalgebra> {
    if let Some(&g) = gens.iter().find(|&&g| g >= a.size) {
        return Err(Error::InvalidAlgebra(format!("generator {g} outside carrier")));
    }
    let c = close(&a.sig, gens, |s, args| a.op(s, &args.iter().map(|&&x| x).collect::<Vec<_>>()), usize::MAX)?;
    Ok(Subalgebra {
        algebra: FiniteAlgebra {
            sig: a.sig.clone(),
            size: c.elements.len(),
            tables: c.tables,
        },
        elements: c.elements,
        generators: c.generators,
        repr_terms: c.repr_terms,
    })
}

pub(crate) struct Closure<T> {
    pub elements: Vec<T>,
    pub generators: Vec<usize>,
    pub repr_terms: Vec<Term>,
    pub tables: Vec<Vec<usize>>,
}

/// Generic subalgebra closure over elements of any hashable type.
///
/// Each element keeps the least term (by size, then structure) among the
/// candidate terms met while closing; the loop runs until neither new
/// elements nor better terms appear.
pub(crate) fn close<T: Clone + Eq + Hash>(
    sig: &Signature,
    gens: &[T],
    apply: impl Fn(usize, &[&T]) -> T,
    limit: usize,
) -> Result<Closure<T>> {
    if gens.is_empty() && !sig.has_nullary() {
        return Err(Error::InvalidAlgebra(
            "no generators and no constants: empty subalgebra".into(),
        ));
    }
    let mut elements: Vec<T> = Vec::new();
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut reprs: Vec<Term> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut generators = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let id = *index.entry(g.clone()).or_insert_with(|| {
            elements.push(g.clone());
            reprs.push(Term::Var(i as Var + 1));
            sizes.push(1);
            elements.len() - 1
        });
        generators.push(id);
    }
    loop {
        let mut changed = false;
        let len = elements.len();
        for s in 0..sig.len() {
            let k = sig.arity(s);
            for tuple in Odometer::new(len, k) {
                let result = {
                    let args: Vec<&T> = tuple.iter().map(|&i| &elements[i]).collect();
                    apply(s, &args)
                };
                let cand_size = 1 + tuple.iter().map(|&i| sizes[i]).sum::<usize>();
                match index.get(&result) {
                    None => {
                        if elements.len() >= limit {
                            return Err(Error::TooLarge {
                                what: "generated subalgebra",
                                needed: elements.len() as u128 + 1,
                                bound: limit as u128,
                            });
                        }
                        index.insert(result.clone(), elements.len());
                        elements.push(result);
                        reprs.push(Term::App(s, tuple.iter().map(|&i| reprs[i].clone()).collect()));
                        sizes.push(cand_size);
                        changed = true;
                    }
                    Some(&e) => {
                        let better = cand_size < sizes[e]
                            || (cand_size == sizes[e] && candidate_less(s, &tuple, &reprs, &reprs[e]));
                        if better {
                            reprs[e] = Term::App(s, tuple.iter().map(|&i| reprs[i].clone()).collect());
                            sizes[e] = cand_size;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let n = elements.len();
    let tables = (0..sig.len())
        .map(|s| {
            Odometer::new(n, sig.arity(s))
                .map(|tuple| {
                    let args: Vec<&T> = tuple.iter().map(|&i| &elements[i]).collect();
                    index[&apply(s, &args)]
                })
                .collect()
        })
        .collect();
    Ok(Closure {
        elements,
        generators,
        repr_terms: reprs,
        tables,
    })
}

/// `App(sym, reprs[tuple]) < current` without building the candidate.
fn candidate_less(sym: usize, tuple: &[usize], reprs: &[Term], current: &Term) -> bool {
    match current {
        Term::Var(_) => false,
        Term::App(cs, cargs) => match sym.cmp(cs) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => tuple.iter().map(|&i| &reprs[i]).lt(cargs.iter()),
        },
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::term::parse_term;

    fn id(text: &str) -> Identity {
        Identity::parse(text, &Signature::band()).unwrap()
    }

    fn hyp(text: &str) -> Hypersubstitution {
        Hypersubstitution::parse(&format!("* := {text}"), &Signature::band()).unwrap()
    }

    #[test]
    fn evaluation() {
        let b = Signature::band();
        let xy = parse_term("xy", &b).unwrap();
        assert_eq!(sl2().evaluate(&xy, &[(1, 0), (2, 1)].into()).unwrap(), 0);
        assert_eq!(lz2().evaluate(&xy, &[(1, 1), (2, 0)].into()).unwrap(), 1);
        let xyx = parse_term("xyx", &b).unwrap();
        assert_eq!(sl2().evaluate(&xyx, &[(1, 1), (2, 1)].into()).unwrap(), 1);
        assert_eq!(
            sl2().evaluate(&xy, &[(1, 1)].into()),
            Err(Error::MissingVariable(2))
        );
    }

    #[test]
    fn satisfaction() {
        assert!(lz2().satisfies(&id("xy = x")).unwrap());
        assert!(sl2().satisfies(&id("xy = yx")).unwrap());
        assert!(!lz2().satisfies(&id("xy = yx")).unwrap());
        assert_eq!(
            lz2().counterexample(&id("xy = yx"), 6).unwrap(),
            Some(vec![(1, 0), (2, 1)])
        );
        let wide = id("x x4 x5 x6 x7 x8 x9 = x");
        assert!(matches!(
            lz2().satisfies(&wide),
            Err(Error::VariableLimit { found: 7, limit: 6 })
        ));
    }

    #[test]
    fn derived_algebras() {
        assert_eq!(sl2().derived(&hyp("x")).unwrap(), lz2());
        assert_eq!(lz2().derived(&hyp("yx")).unwrap(), rz2());
        let a = binary([1, 0, 0, 1]);
        assert_eq!(a.derived(&Hypersubstitution::trivial(&Signature::band())).unwrap(), a);
    }

    #[test]
    fn isomorphism() {
        assert_eq!(sl2().isomorphism_to(&sl2_max()), Some(vec![1, 0]));
        assert_eq!(sl2().isomorphism_to(&lz2()), None);
        assert_eq!(lz2().isomorphism_to(&lz2()), Some(vec![0, 1]));
        assert!(is_proper_derived_algebra(&sl2(), &hyp("x")).unwrap());
        assert!(!is_proper_derived_algebra(&sl2(), &hyp("xy")).unwrap());
        assert!(is_proper_derived_algebra(&lz2(), &hyp("yx")).unwrap());
    }

    #[test]
    fn relabel_gives_isomorphic_copy() {
        let models = enumerate_models(&band_axioms(), &Signature::band(), 3).unwrap();
        for m in &models {
            let perm: Vec<Elem> = (0..m.size()).rev().collect();
            let r = m.relabel(&perm);
            let phi = m.isomorphism_to(&r).expect("relabeling is an isomorphism");
            assert_eq!(m.relabel(&phi), r);
        }
        for (i, a) in models.iter().enumerate() {
            for (j, b) in models.iter().enumerate() {
                assert_eq!(a.isomorphism_to(b).is_some(), i == j);
            }
        }
    }

    #[test]
    fn band_models() {
        let b = Signature::band();
        let one = enumerate_models(&band_axioms(), &b, 1).unwrap();
        assert_eq!(one.len(), 1);
        let two = models_of_size(&band_axioms(), &b, 2).unwrap();
        assert_eq!(two, vec![sl2(), lz2(), rz2()]);
        let mut comm = band_axioms();
        comm.push(id("xy = yx"));
        assert_eq!(models_of_size(&comm, &b, 2).unwrap(), vec![sl2()]);
        assert!(matches!(
            enumerate_models(&band_axioms(), &b, 7),
            Err(Error::ModelSizeGuard { .. })
        ));
    }

    #[test]
    fn products_and_subalgebras() {
        let p = direct_product(&[sl2(), sl2(), sl2(), sl2()]).unwrap();
        assert_eq!(p.size(), 16);
        let sizes = [2; 4];
        let g1 = product_index(&sizes, &[0, 0, 1, 1]);
        let g2 = product_index(&sizes, &[0, 1, 0, 1]);
        let sub = generated_subalgebra(&p, &[g1, g2]).unwrap();
        assert_eq!(sub.algebra.size(), 3);
        assert_eq!(sub.elements[2], product_index(&sizes, &[0, 0, 0, 1]));
        let lz4 = direct_product(&[lz2(), lz2(), lz2(), lz2()]).unwrap();
        assert_eq!(generated_subalgebra(&lz4, &[g1, g2]).unwrap().algebra.size(), 2);
        assert_eq!(direct_product(&[lz2()]).unwrap(), lz2());
    }

    #[test]
    fn subalgebra_terms_name_their_elements() {
        let p = direct_product(&[sl2(), lz2(), rz2()]).unwrap();
        let sub = generated_subalgebra(&p, &[1, 6]).unwrap();
        for (i, t) in sub.repr_terms.iter().enumerate() {
            let asg: BTreeMap<Var, Elem> = [(1, 1), (2, 6)].into();
            assert_eq!(p.evaluate(t, &asg).unwrap(), sub.elements[i]);
        }
    }

    #[test]
    fn model_text_round_trip() {
        let text = "size 2\n*: 0 0 1 1\n";
        assert_eq!(lz2().to_model_text(), text);
        assert_eq!(FiniteAlgebra::parse_model(text, None).unwrap(), lz2());
        let sig = Signature::new([("neg", 1), ("zero", 0)]).unwrap();
        let a = FiniteAlgebra::parse_model("signature neg 1 zero 0\nsize 2\nneg: 1 0\nzero: 0\n", None).unwrap();
        assert_eq!(a.sig(), &sig);
        assert!(FiniteAlgebra::parse_model("size 2\n*: 0 0 1", None).is_err());
        assert!(FiniteAlgebra::parse_model("size 2\n*: 0 0 1 2", None).is_err());
    }
}
