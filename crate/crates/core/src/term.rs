//! Signatures, terms and identities.
//!
//! Terms are plain immutable trees. Operation symbols are stored as indices
//! into the ambient [`Signature`], so a term only has meaning together with
//! the signature it was built against.
//!
//! Variables are numbered from 1. Indices 1, 2 and 3 print as `x`, `y` and
//! `z`; larger indices print as `x4`, `x5`, ... In band words (juxtaposition
//! syntax) the letters `a`..`w` stand for variables 4..26.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Variable index, starting at 1.
pub type Var = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols with their arities (a type).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

const DELIMITERS: &[char] = &['(', ')', ',', '='];

fn is_var_name(name: &str) -> bool {
    match name {
        "x" | "y" | "z" => true,
        _ => {
            name.len() > 1
                && name.starts_with('x')
                && name[1..].chars().all(|c| c.is_ascii_digit())
        }
    }
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        if symbols.is_empty() {
            return Err(Error::InvalidSignature("no operation symbols".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.name.is_empty()
                || s.name.contains(|c: char| c.is_whitespace() || DELIMITERS.contains(&c))
                || s.name == ":="
            {
                return Err(Error::InvalidSignature(format!("bad symbol name `{}`", s.name)));
            }
            if is_var_name(&s.name) {
                return Err(Error::InvalidSignature(format!(
                    "symbol `{}` clashes with a variable name",
                    s.name
                )));
            }
            if symbols[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::InvalidSignature(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    /// The type (2) with its single symbol written `*`.
    pub fn band() -> Self {
        Signature::new([("*", 2)]).expect("static signature")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].arity
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.symbols[sym].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// The symbol used by juxtaposition words, if the signature has exactly
    /// one symbol and it is binary.
    pub fn word_symbol(&self) -> Option<usize> {
        (self.symbols.len() == 1 && self.symbols[0].arity == 2).then_some(0)
    }

    pub fn has_nullary(&self) -> bool {
        self.symbols.iter().any(|s| s.arity == 0)
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.symbols.iter().map(|s| s.arity).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A term: a variable or an operation symbol applied to argument terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(index: Var) -> Term {
        Term::Var(index)
    }

    pub fn app(sym: usize, args: Vec<Term>) -> Term {
        Term::App(sym, args)
    }

    /// `f(x1, ..., xk)`.
    pub fn basic(sym: usize, arity: usize) -> Term {
        Term::App(sym, (1..=arity as Var).map(Term::Var).collect())
    }

    /// Left-associated product of the given letters under a binary symbol.
    ///
    /// Panics on an empty word.
    pub fn word(sym: usize, letters: &[Var]) -> Term {
        let mut it = letters.iter();
        let first = Term::Var(*it.next().expect("nonempty word"));
        it.fold(first, |acc, &v| Term::App(sym, vec![acc, Term::Var(v)]))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_var(&self) -> Var {
        match self {
            Term::Var(v) => *v,
            Term::App(_, args) => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    /// Variables in left-to-right (in-order) leaf order, with repetitions.
    pub fn leaves(&self) -> Vec<Var> {
        fn go(t: &Term, out: &mut Vec<Var>) {
            match t {
                Term::Var(v) => out.push(*v),
                Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Simultaneous substitution. Fails if `env` has no entry for some
    /// variable of the term.
    pub fn substitute(&self, env: &BTreeMap<Var, Term>) -> Result<Term> {
        match self {
            Term::Var(v) => env.get(v).cloned().ok_or(Error::MissingVariable(*v)),
            Term::App(s, args) => Ok(Term::App(
                *s,
                args.iter()
                    .map(|a| a.substitute(env))
                    .collect::<Result<_>>()?,
            )),
        }
    }

    /// Substitution `x_i -> args[i-1]`, used for hypersubstitution images.
    /// The caller guarantees every variable is in range.
    pub(crate) fn instantiate(&self, args: &[Term]) -> Term {
        match self {
            Term::Var(v) => args[*v as usize - 1].clone(),
            Term::App(s, a) => Term::App(*s, a.iter().map(|t| t.instantiate(args)).collect()),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(0) => Err(Error::Parse {
                column: 0,
                message: "variable index 0".into(),
            }),
            Term::Var(_) => Ok(()),
            Term::App(s, args) => {
                let sym = sig
                    .symbols()
                    .get(*s)
                    .ok_or_else(|| Error::UnknownSymbol(format!("#{s}")))?;
                if sym.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: sym.name.clone(),
                        expected: sym.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            flatten: sig.word_symbol().is_some(),
        }
    }
}

pub fn variables_of(t: &Term) -> BTreeSet<Var> {
    t.variables()
}

pub fn substitute(t: &Term, env: &BTreeMap<Var, Term>) -> Result<Term> {
    t.substitute(env)
}

pub fn var_name(v: Var) -> String {
    match v {
        1 => "x".into(),
        2 => "y".into(),
        3 => "z".into(),
        _ => format!("x{v}"),
    }
}

fn letter_of(v: Var) -> Option<char> {
    match v {
        1 => Some('x'),
        2 => Some('y'),
        3 => Some('z'),
        4..=26 => Some((b'a' + (v - 4) as u8) as char),
        _ => None,
    }
}

fn var_of_letter(c: char) -> Option<Var> {
    match c {
        'x' => Some(1),
        'y' => Some(2),
        'z' => Some(3),
        'a'..='w' => Some(c as Var - 'a' as Var + 4),
        _ => None,
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    flatten: bool,
}

impl TermDisplay<'_> {
    pub fn flat(mut self, flatten: bool) -> Self {
        self.flatten = flatten;
        self
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self.term, self.sig, self.flatten))
    }
}

/// Prints a term. With `flatten` and a single binary symbol the result is
/// the juxtaposition word read off the leaves, otherwise function syntax.
pub fn print_term(t: &Term, sig: &Signature, flatten: bool) -> String {
    if flatten && sig.word_symbol().is_some() {
        if let Term::App(..) = t {
            let letters: Option<String> = t.leaves().into_iter().map(letter_of).collect();
            if let Some(w) = letters {
                return w;
            }
        }
    }
    let mut out = String::new();
    write_fn(t, sig, &mut out);
    out
}

fn write_fn(t: &Term, sig: &Signature, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&var_name(*v)),
        Term::App(s, args) => {
            out.push_str(sig.name(*s));
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_fn(a, sig, out);
                }
                out.push(')');
            }
        }
    }
}

/// A pair of terms read as the universally quantified equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        parse_identity(text, sig)
    }

    /// Union of the variables of both sides.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn display(&self, sig: &Signature) -> String {
        format!(
            "{} = {}",
            print_term(&self.lhs, sig, true),
            print_term(&self.rhs, sig, true)
        )
    }
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, sig);
    p.skip_ws();
    if p.at_end() {
        return Err(Error::EmptyInput);
    }
    let t = p.term()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

pub fn parse_identity(text: &str, sig: &Signature) -> Result<Identity> {
    let mut parts = text.split('=');
    let (lhs, rhs) = match (parts.next(), parts.next(), parts.next()) {
        (Some(l), Some(r), None) => (l, r),
        _ => {
            return Err(Error::Parse {
                column: 0,
                message: "identity needs exactly one `=`".into(),
            })
        }
    };
    let lhs = parse_term(lhs, sig)?;
    let rhs = parse_term(rhs, sig)?;
    Ok(Identity { lhs, rhs })
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    sig: &'a Signature,
    word_sym: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            sig,
            word_sym: sig.word_symbol(),
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| !c.is_whitespace() && !DELIMITERS.contains(&c))
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn at_term_end(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), None | Some(')') | Some(',') | Some('='))
    }

    /// A full term. With word sugar enabled this is a left-associated
    /// sequence of factors.
    fn term(&mut self) -> Result<Term> {
        let Some(sym) = self.word_sym else {
            return self.atom();
        };
        let mut letters: Vec<Term> = Vec::new();
        while !self.at_term_end() {
            self.factor(&mut letters)?;
        }
        let mut it = letters.into_iter();
        let first = it.next().ok_or_else(|| self.error("expected a term"))?;
        Ok(it.fold(first, |acc, t| Term::App(sym, vec![acc, t])))
    }

    fn factor(&mut self, out: &mut Vec<Term>) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let t = self.term()?;
            self.expect(')')?;
            out.push(t);
            return Ok(());
        }
        let start = self.pos;
        let name = self.name();
        if name.is_empty() {
            return Err(self.error("expected a term"));
        }
        if self.sig.index_of(&name).is_some() || is_var_name(&name) {
            self.pos = start;
            out.push(self.atom()?);
            return Ok(());
        }
        for (i, c) in name.chars().enumerate() {
            let v = var_of_letter(c).ok_or(Error::Parse {
                column: start + i + 1,
                message: format!("`{c}` is not a variable letter or symbol"),
            })?;
            out.push(Term::Var(v));
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        let name = self.name();
        if name.is_empty() {
            return Err(self.error("expected a term"));
        }
        if let Some(sym) = self.sig.index_of(&name) {
            let arity = self.sig.arity(sym);
            self.skip_ws();
            let mut args = Vec::new();
            if self.peek() == Some('(') {
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                } else {
                    loop {
                        args.push(self.term()?);
                        self.skip_ws();
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some(')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.error("expected `,` or `)`")),
                        }
                    }
                }
            }
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: name,
                    expected: arity,
                    found: args.len(),
                });
            }
            return Ok(Term::App(sym, args));
        }
        if is_var_name(&name) {
            let v = match name.as_str() {
                "x" => 1,
                "y" => 2,
                "z" => 3,
                _ => name[1..].parse::<Var>().map_err(|_| Error::Parse {
                    column: start + 1,
                    message: format!("bad variable `{name}`"),
                })?,
            };
            if v == 0 {
                return Err(Error::Parse {
                    column: start + 1,
                    message: "variable indices start at 1".into(),
                });
            }
            return Ok(Term::Var(v));
        }
        if name.len() > 1 && name.chars().all(|c| var_of_letter(c).is_some()) {
            return Err(Error::WordSugar(name));
        }
        Err(Error::UnknownSymbol(name))
    }
}
