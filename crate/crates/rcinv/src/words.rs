//! Words over a doubled (involutive) alphabet.
//!
//! A generator `x` has a formal inverse written `x'`. Letters are packed as
//! `gen << 1 | inverse_bit`, so the involution is a single xor.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown letter `{token}`")]
    UnknownLetter { token: String },
    #[error("malformed word: {0}")]
    Malformed(String),
    #[error("letter `{0}` is a formal inverse; decoration needs positive letters")]
    UnsupportedDecoration(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
}

/// A signed letter: generator index plus inverse flag.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        Letter(generator << 1 | inverse as u32)
    }
    pub fn pos(generator: u32) -> Self {
        Letter::new(generator, false)
    }
    pub fn neg(generator: u32) -> Self {
        Letter::new(generator, true)
    }
    #[inline]
    pub fn generator(self) -> u32 {
        self.0 >> 1
    }
    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

/// Words are plain letter vectors; the alphabet is passed alongside when
/// names matter.
pub type Word = Vec<Letter>;

/// Ordered set of generator names with the formal-inverse involution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct InvolutiveAlphabet {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl TryFrom<Vec<String>> for InvolutiveAlphabet {
    type Error = WordError;
    fn try_from(names: Vec<String>) -> Result<Self, WordError> {
        InvolutiveAlphabet::new(&names)
    }
}

impl From<InvolutiveAlphabet> for Vec<String> {
    fn from(a: InvolutiveAlphabet) -> Self {
        a.names
    }
}

impl InvolutiveAlphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, WordError> {
        let mut a = InvolutiveAlphabet::default();
        for n in names {
            a.push(n.as_ref())?;
        }
        Ok(a)
    }

    pub fn push(&mut self, name: &str) -> Result<u32, WordError> {
        if !valid_name(name) {
            return Err(WordError::Malformed(format!("bad generator name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(WordError::DuplicateGenerator(name.to_string()));
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn name(&self, generator: u32) -> &str {
        &self.names[generator as usize]
    }
    pub fn id(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }
    pub fn letter(&self, name: &str) -> Result<Letter, WordError> {
        self.id(name)
            .map(Letter::pos)
            .ok_or_else(|| WordError::UnknownLetter { token: name.to_string() })
    }

    pub fn contains(&self, l: Letter) -> bool {
        (l.generator() as usize) < self.names.len()
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}'", self.name(l.generator()))
        } else {
            self.name(l.generator()).to_string()
        }
    }

    /// Space-separated rendering; the empty word is `1`.
    pub fn format(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parse the word syntax: whitespace-separated letters with `'` inverse
    /// suffixes, `1` for the identity, juxtaposition for one-char alphabets.
    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let mut out = Word::new();
        for tok in text.split_whitespace() {
            if tok == "1" || tok == "ε" {
                continue;
            }
            match self.parse_token(tok) {
                Ok(l) => out.push(l),
                Err(e) => {
                    if self.single_char() {
                        out.extend(self.parse_juxtaposed(tok)?);
                    } else {
                        return Err(e);
                    }
                }
            }
        }
        Ok(out)
    }

    fn parse_token(&self, tok: &str) -> Result<Letter, WordError> {
        let base = tok.trim_end_matches('\'');
        let primes = tok.len() - base.len();
        let g = self
            .id(base)
            .ok_or_else(|| WordError::UnknownLetter { token: tok.to_string() })?;
        Ok(Letter::new(g, primes % 2 == 1))
    }

    fn parse_juxtaposed(&self, tok: &str) -> Result<Word, WordError> {
        let mut out = Word::new();
        let chars: Vec<char> = tok.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let name = chars[i].to_string();
            let g = self
                .id(&name)
                .ok_or_else(|| WordError::UnknownLetter { token: tok.to_string() })?;
            i += 1;
            let mut inv = false;
            while i < chars.len() && chars[i] == '\'' {
                inv = !inv;
                i += 1;
            }
            out.push(Letter::new(g, inv));
        }
        Ok(out)
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    // identifier, optionally followed by a `^tag` decoration
    let (base, tag) = match name.split_once('^') {
        Some((b, t)) => (b, Some(t)),
        None => (name, None),
    };
    let ident = |s: &str| {
        let mut cs = s.chars();
        matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
            && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
    };
    ident(base)
        && tag.is_none_or(|t| !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric()))
}

/// Free-group reduction: cancel every `x x'` and `x' x`.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn is_positive(w: &[Letter]) -> bool {
    w.iter().all(|l| !l.is_inverse())
}

/// Positive words over `gens` of length ≤ `max_len`, in shortlex order
/// (by length, then lexicographically by position in `gens`).
pub fn shortlex_words(gens: &[u32], max_len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * gens.len());
        for w in &layer {
            for &g in gens {
                let mut x = w.clone();
                x.push(Letter::pos(g));
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Prefixes in increasing length; `ε` only when asked for.
pub fn prefixes(w: &[Letter], include_empty: bool) -> Vec<Word> {
    let start = if include_empty { 0 } else { 1 };
    (start..=w.len()).map(|i| w[..i].to_vec()).collect()
}

/// Zone tag used by the `^` decoration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZoneTag {
    Index(u32),
    Z,
}

impl fmt::Display for ZoneTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZoneTag::Index(i) => write!(f, "{i}"),
            ZoneTag::Z => write!(f, "z"),
        }
    }
}

pub fn decorated_name(base: &str, tag: ZoneTag) -> String {
    format!("{base}^{tag}")
}

/// `w ↦ w^(tag)`: each letter `a` of `src` becomes `a^tag` in `dst`.
pub fn index_decorate(
    w: &[Letter],
    src: &InvolutiveAlphabet,
    tag: ZoneTag,
    dst: &InvolutiveAlphabet,
) -> Result<Word, WordError> {
    w.iter()
        .map(|&l| {
            if l.is_inverse() {
                return Err(WordError::UnsupportedDecoration(src.letter_name(l)));
            }
            dst.letter(&decorated_name(src.name(l.generator()), tag))
        })
        .collect()
}

/// Erase decorations: `a^1 ↦ a`, `a0 ↦ a`, `p_2 ↦ p`, `q1 ↦ q`.
pub fn forget_name(name: &str) -> &str {
    let base = name.split_once('^').map_or(name, |(b, _)| b);
    let stripped = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stripped = if stripped.len() < base.len() {
        stripped.trim_end_matches('_')
    } else {
        stripped
    };
    if stripped.is_empty() {
        base
    } else {
        stripped
    }
}

pub fn index_forget_names(w: &[Letter], src: &InvolutiveAlphabet) -> Vec<String> {
    w.iter()
        .map(|&l| {
            let n = forget_name(src.name(l.generator()));
            if l.is_inverse() {
                format!("{n}'")
            } else {
                n.to_string()
            }
        })
        .collect()
}

pub fn index_forget(
    w: &[Letter],
    src: &InvolutiveAlphabet,
    dst: &InvolutiveAlphabet,
) -> Result<Word, WordError> {
    w.iter()
        .map(|&l| {
            let g = dst.letter(forget_name(src.name(l.generator())))?;
            Ok(if l.is_inverse() { g.inverse() } else { g })
        })
        .collect()
}

/// Birooted labelled tree, canonically numbered by BFS from the start root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MunnTree {
    pub num_vertices: usize,
    /// `(src, generator, dst)`, sorted.
    pub edges: Vec<(u32, u32, u32)>,
    pub start: u32,
    pub end: u32,
}

pub fn munn_tree(w: &[Letter]) -> MunnTree {
    // out[v]: generator -> child via positive edge; inn[v]: generator -> source
    let mut out: Vec<HashMap<u32, u32>> = vec![HashMap::new()];
    let mut inn: Vec<HashMap<u32, u32>> = vec![HashMap::new()];
    let mut cur = 0u32;
    for &l in w {
        let g = l.generator();
        let table = if l.is_inverse() { &inn } else { &out };
        if let Some(&next) = table[cur as usize].get(&g) {
            cur = next;
            continue;
        }
        let fresh = out.len() as u32;
        out.push(HashMap::new());
        inn.push(HashMap::new());
        if l.is_inverse() {
            out[fresh as usize].insert(g, cur);
            inn[cur as usize].insert(g, fresh);
        } else {
            out[cur as usize].insert(g, fresh);
            inn[fresh as usize].insert(g, cur);
        }
        cur = fresh;
    }

    let n = out.len();
    let mut order = vec![u32::MAX; n];
    let mut queue = VecDeque::from([0u32]);
    order[0] = 0;
    let mut next = 1;
    while let Some(v) = queue.pop_front() {
        let mut nbrs: Vec<(u32, bool, u32)> = out[v as usize]
            .iter()
            .map(|(&g, &t)| (g, false, t))
            .chain(inn[v as usize].iter().map(|(&g, &t)| (g, true, t)))
            .collect();
        nbrs.sort_unstable();
        for (_, _, t) in nbrs {
            if order[t as usize] == u32::MAX {
                order[t as usize] = next;
                next += 1;
                queue.push_back(t);
            }
        }
    }
    let mut edges: Vec<(u32, u32, u32)> = out
        .iter()
        .enumerate()
        .flat_map(|(v, m)| {
            let order = &order;
            m.iter().map(move |(&g, &t)| (order[v], g, order[t as usize]))
        })
        .collect();
    edges.sort_unstable();
    MunnTree {
        num_vertices: n,
        edges,
        start: 0,
        end: order[cur as usize],
    }
}

/// Equality in the free inverse monoid.
pub fn fim_equal(u: &[Letter], v: &[Letter]) -> bool {
    munn_tree(u) == munn_tree(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> InvolutiveAlphabet {
        InvolutiveAlphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let a = ab();
        assert_eq!(free_reduce(&a.parse("a a' b").unwrap()), a.parse("b").unwrap());
        assert!(free_reduce(&[]).is_empty());
        assert_eq!(free_reduce(&a.parse("a b b' a").unwrap()), a.parse("a a").unwrap());
    }

    #[test]
    fn invert_examples() {
        let a = ab();
        assert_eq!(invert_word(&a.parse("a b").unwrap()), a.parse("b' a'").unwrap());
        assert_eq!(invert_word(&a.parse("a'").unwrap()), a.parse("a").unwrap());
    }

    #[test]
    fn juxtaposition() {
        let a = ab();
        assert_eq!(a.parse("aba'").unwrap(), a.parse("a b a'").unwrap());
        assert_eq!(a.format(&a.parse("1").unwrap()), "1");
        assert!(a.parse("c").is_err());
    }

    #[test]
    fn prefix_examples() {
        let a = InvolutiveAlphabet::new(&["a", "b", "c"]).unwrap();
        let p = prefixes(&a.parse("abc").unwrap(), false);
        assert_eq!(p.len(), 3);
        assert_eq!(a.format(&p[1]), "a b");
        assert_eq!(prefixes(&[], true), vec![Word::new()]);
    }

    #[test]
    fn decorate_and_forget() {
        let a = InvolutiveAlphabet::new(&["a", "b"]).unwrap();
        let d = InvolutiveAlphabet::new(&["a^1", "b^1", "a^0"]).unwrap();
        let w = index_decorate(&a.parse("a b").unwrap(), &a, ZoneTag::Index(1), &d).unwrap();
        assert_eq!(d.format(&w), "a^1 b^1");
        assert!(index_decorate(&a.parse("a'").unwrap(), &a, ZoneTag::Index(1), &d).is_err());

        let q = InvolutiveAlphabet::new(&["q0", "a^0", "p0"]).unwrap();
        let f = index_forget_names(&q.parse("q0 a^0 p0").unwrap(), &q);
        assert_eq!(f, vec!["q", "a", "p"]);
        assert_eq!(forget_name("p_2"), "p");
        assert_eq!(forget_name("b^z"), "b");
    }

    #[test]
    fn munn_examples() {
        let a = ab();
        let t = munn_tree(&a.parse("a a'").unwrap());
        assert_eq!(t.num_vertices, 2);
        assert_eq!(t.start, t.end);
        assert!(fim_equal(&a.parse("a a' a").unwrap(), &a.parse("a").unwrap()));
        assert!(fim_equal(&a.parse("a a' b b'").unwrap(), &a.parse("b b' a a'").unwrap()));
        assert!(!fim_equal(&a.parse("a a'").unwrap(), &[]));
        let t = munn_tree(&a.parse("a b").unwrap());
        assert_eq!((t.num_vertices, t.edges.len(), t.end), (3, 2, 2));
    }
}
