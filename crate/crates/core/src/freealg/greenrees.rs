//! The word problem for free bands.
//!
//! Two words are equal in the free band iff they have the same content and,
//! recursively, the same prefix part, prefix pivot, suffix pivot and suffix
//! part. The prefix part of `w` is the longest prefix missing exactly one
//! letter of the content; the letter right after it is the prefix pivot.
//! Suffix part and suffix pivot are defined dually.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::finalg::FiniteAlgebra;
use crate::freealg::{Exactness, FreeAlgebra};
use crate::term::{Signature, Term, Var};

/// Largest rank `free_band` will build (|F_B(3)| = 159).
pub const MAX_FREE_BAND_RANK: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GreenReesSignature {
    Letter(Var),
    Split {
        content: BTreeSet<Var>,
        prefix: Box<GreenReesSignature>,
        prefix_pivot: Var,
        suffix_pivot: Var,
        suffix: Box<GreenReesSignature>,
    },
}

impl GreenReesSignature {
    pub fn content(&self) -> BTreeSet<Var> {
        match self {
            GreenReesSignature::Letter(v) => [*v].into(),
            GreenReesSignature::Split { content, .. } => content.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Letter(Var),
    Split {
        content: Vec<Var>,
        prefix: u32,
        prefix_pivot: Var,
        suffix_pivot: Var,
        suffix: u32,
    },
}

/// Hash-consed signatures: two words get the same id iff they are equal in
/// the free band.
#[derive(Default)]
pub(crate) struct SignatureTable {
    nodes: Vec<Node>,
    ids: HashMap<Node, u32>,
}

impl SignatureTable {
    fn intern(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    /// Panics on an empty word.
    pub(crate) fn signature(&mut self, word: &[Var]) -> u32 {
        assert!(!word.is_empty(), "empty word has no signature");
        let mut memo = HashMap::new();
        self.range(word, 0, word.len(), &mut memo)
    }

    fn range(&mut self, w: &[Var], lo: usize, hi: usize, memo: &mut HashMap<(usize, usize), u32>) -> u32 {
        if let Some(&id) = memo.get(&(lo, hi)) {
            return id;
        }
        let mut content: Vec<Var> = w[lo..hi].to_vec();
        content.sort_unstable();
        content.dedup();
        let id = if content.len() == 1 {
            self.intern(Node::Letter(content[0]))
        } else {
            let full = content.len();
            let mut seen = BTreeSet::new();
            let mut i = lo;
            loop {
                seen.insert(w[i]);
                if seen.len() == full {
                    break;
                }
                i += 1;
            }
            seen.clear();
            let mut j = hi - 1;
            loop {
                seen.insert(w[j]);
                if seen.len() == full {
                    break;
                }
                j -= 1;
            }
            let prefix = self.range(w, lo, i, memo);
            let suffix = self.range(w, j + 1, hi, memo);
            self.intern(Node::Split {
                content,
                prefix,
                prefix_pivot: w[i],
                suffix_pivot: w[j],
                suffix,
            })
        };
        memo.insert((lo, hi), id);
        id
    }

    fn export(&self, id: u32) -> GreenReesSignature {
        match &self.nodes[id as usize] {
            Node::Letter(v) => GreenReesSignature::Letter(*v),
            Node::Split {
                content,
                prefix,
                prefix_pivot,
                suffix_pivot,
                suffix,
            } => GreenReesSignature::Split {
                content: content.iter().copied().collect(),
                prefix: Box::new(self.export(*prefix)),
                prefix_pivot: *prefix_pivot,
                suffix_pivot: *suffix_pivot,
                suffix: Box::new(self.export(*suffix)),
            },
        }
    }
}

pub fn gr_signature(word: &[Var]) -> Result<GreenReesSignature> {
    if word.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut table = SignatureTable::default();
    let id = table.signature(word);
    Ok(table.export(id))
}

/// Equality of two nonempty words in the free band.
pub fn same_in_free_band(u: &[Var], v: &[Var]) -> Result<bool> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut table = SignatureTable::default();
    Ok(table.signature(u) == table.signature(v))
}

fn len_lex_less(a: &[Var], b: &[Var]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// The free band on `n` generators, `1 <= n <= 3`.
///
/// Elements are the distinct signatures reachable from the generators by
/// concatenating witness words; each keeps the length-lexicographically
/// least word met during the closure. The carrier is ordered by that word.
pub fn free_band(n: usize) -> Result<FreeAlgebra> {
    if !(1..=MAX_FREE_BAND_RANK).contains(&n) {
        return Err(Error::FreeRank {
            requested: n,
            min: 1,
            max: MAX_FREE_BAND_RANK,
        });
    }
    let mut table = SignatureTable::default();
    let mut words: Vec<Vec<Var>> = Vec::new();
    let mut index: HashMap<u32, usize> = HashMap::new();
    for v in 1..=n as Var {
        let id = table.signature(&[v]);
        index.insert(id, words.len());
        words.push(vec![v]);
    }
    let mut buf = Vec::new();
    loop {
        let mut changed = false;
        let len = words.len();
        for i in 0..len {
            for j in 0..len {
                buf.clear();
                buf.extend_from_slice(&words[i]);
                buf.extend_from_slice(&words[j]);
                let id = table.signature(&buf);
                match index.get(&id) {
                    None => {
                        index.insert(id, words.len());
                        words.push(buf.clone());
                        changed = true;
                    }
                    Some(&e) if len_lex_less(&buf, &words[e]) => {
                        words[e] = buf.clone();
                        changed = true;
                    }
                    Some(_) => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    words.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let ids: Vec<u32> = words.iter().map(|w| table.signature(w)).collect();
    let position: HashMap<u32, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let size = words.len();
    let mut mul = Vec::with_capacity(size * size);
    for a in &words {
        for b in &words {
            buf.clear();
            buf.extend_from_slice(a);
            buf.extend_from_slice(b);
            mul.push(position[&table.signature(&buf)]);
        }
    }
    let generators = (1..=n as Var).map(|v| position[&table.signature(&[v])]).collect();
    let base = FiniteAlgebra::new(Signature::band(), size, vec![mul])?;
    Ok(FreeAlgebra {
        base,
        generators,
        repr_terms: words.iter().map(|w| Term::word(0, w)).collect(),
        exactness: Exactness::Exact,
    })
}
