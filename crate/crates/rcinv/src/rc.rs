//! Right-cancellative chains: validation, bounded search and the exact
//! oracle for the truncated block-flip family `M_r`.
//!
//! Chain words live over `A ∪ A^R`; the tagged copy of `a` is written `a^R`.
//! All three step kinds only touch the word right after a positive prefix,
//! so the first `R`-letter always marks the edge of the editable region.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::{Kind, Presentation, Relation};
use crate::words::{is_positive, InvolutiveAlphabet, Letter, Word, WordError};

/// Longest chain word the search engine can hold.
pub const MAX_CHAIN_LEN: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RcError {
    #[error("search budget must be positive (max_len={max_len}, max_steps={max_steps})")]
    NonPositiveBudget { max_len: usize, max_steps: usize },
    #[error("max_len {0} exceeds the engine limit {MAX_CHAIN_LEN}")]
    TooLong(usize),
    #[error("presentation has too many generators for the chain engine")]
    AlphabetTooLarge,
    #[error("expected an rc_monoid or monoid presentation, found {0}")]
    WrongKind(Kind),
    #[error("endpoint words must be positive")]
    NotPositive,
    #[error("letter outside the {0} alphabet")]
    BadLetter(&'static str),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("certificate: {0}")]
    Certificate(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    RStep { position: usize, relation: usize, forward: bool },
    Insertion { position: usize, letter: u32 },
    Deletion { position: usize, letter: u32 },
}

/// Words over the chain alphabet: generator `g < n` is `a`, `g + n` is `a^R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RChain {
    pub words: Vec<Word>,
    pub steps: Vec<Step>,
}

impl RChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// `A ∪ A^R` with the copies appended after the originals.
pub fn chain_alphabet(a: &InvolutiveAlphabet) -> InvolutiveAlphabet {
    let mut names: Vec<String> = a.names().to_vec();
    names.extend(a.names().iter().map(|n| format!("{n}^R")));
    InvolutiveAlphabet::new(&names).expect("tagged copies are fresh names")
}

/// Compiled relation pairs over byte letters.
#[derive(Clone, Debug)]
pub struct RcSystem {
    n: u8,
    /// `(from, to, relation index, forward)`
    rules: Vec<(Vec<u8>, Vec<u8>, usize, bool)>,
}

impl RcSystem {
    pub fn new(p: &Presentation) -> Result<Self, RcError> {
        if p.kind != Kind::RcMonoid && p.kind != Kind::Monoid {
            return Err(RcError::WrongKind(p.kind));
        }
        if p.alphabet.len() > 100 {
            return Err(RcError::AlphabetTooLarge);
        }
        let bytes = |w: &Word| -> Result<Vec<u8>, RcError> {
            if !is_positive(w) {
                return Err(RcError::NotPositive);
            }
            Ok(w.iter().map(|l| l.generator() as u8).collect())
        };
        let mut rules = Vec::new();
        for (i, Relation { lhs, rhs }) in p.relations.iter().enumerate() {
            let (l, r) = (bytes(lhs)?, bytes(rhs)?);
            if l == r {
                continue;
            }
            rules.push((l.clone(), r.clone(), i, true));
            rules.push((r, l, i, false));
        }
        Ok(RcSystem { n: p.alphabet.len() as u8, rules })
    }

    pub fn generators(&self) -> usize {
        self.n as usize
    }

    fn first_r(&self, w: &CWord) -> usize {
        w.as_slice().iter().position(|&c| c >= self.n).unwrap_or(w.len as usize)
    }

    /// Every legal single step from `w` whose result fits in `max_len`.
    #[inline]
    fn neighbours(&self, w: &CWord, max_len: usize, mut emit: impl FnMut(CWord)) {
        let s = w.as_slice();
        let len = s.len();
        let f = self.first_r(w);
        for (from, to, _, _) in &self.rules {
            if from.len() > f || len + to.len() > max_len + from.len() {
                continue;
            }
            for pos in 0..=f - from.len() {
                if &s[pos..pos + from.len()] == from.as_slice() {
                    emit(w.splice(pos, from.len(), to));
                }
            }
        }
        if len + 2 <= max_len {
            for pos in 0..=f {
                for a in 0..self.n {
                    emit(w.splice(pos, 0, &[a, a + self.n]));
                }
            }
        }
        if f >= 1 && f < len && s[f] == s[f - 1] + self.n {
            emit(w.splice(f - 1, 2, &[]));
        }
    }

    /// Step record turning `a` into `b`, if one legal step does.
    fn infer_step(&self, a: &CWord, b: &CWord) -> Option<Step> {
        let s = a.as_slice();
        let f = self.first_r(a);
        for (from, to, rel, fwd) in &self.rules {
            if from.len() > f {
                continue;
            }
            for pos in 0..=f - from.len() {
                if &s[pos..pos + from.len()] == from.as_slice() && a.splice(pos, from.len(), to) == *b {
                    return Some(Step::RStep { position: pos, relation: *rel, forward: *fwd });
                }
            }
        }
        for pos in 0..=f {
            for x in 0..self.n {
                if a.len as usize + 2 <= MAX_CHAIN_LEN && a.splice(pos, 0, &[x, x + self.n]) == *b {
                    return Some(Step::Insertion { position: pos, letter: x as u32 });
                }
            }
        }
        if f >= 1 && f < s.len() && s[f] == s[f - 1] + self.n && a.splice(f - 1, 2, &[]) == *b {
            return Some(Step::Deletion { position: f - 1, letter: s[f - 1] as u32 });
        }
        None
    }
}

/// Fixed-capacity chain word; unused slots stay zero so derived hashing works.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CWord {
    len: u8,
    l: [u8; MAX_CHAIN_LEN],
}

impl CWord {
    fn from_slice(s: &[u8]) -> Self {
        let mut l = [0u8; MAX_CHAIN_LEN];
        l[..s.len()].copy_from_slice(s);
        CWord { len: s.len() as u8, l }
    }
    #[inline]
    fn as_slice(&self) -> &[u8] {
        &self.l[..self.len as usize]
    }
    #[inline]
    fn splice(&self, pos: usize, remove: usize, insert: &[u8]) -> CWord {
        let len = self.len as usize;
        let new_len = len - remove + insert.len();
        let mut l = [0u8; MAX_CHAIN_LEN];
        l[..pos].copy_from_slice(&self.l[..pos]);
        l[pos..pos + insert.len()].copy_from_slice(insert);
        l[pos + insert.len()..new_len].copy_from_slice(&self.l[pos + remove..len]);
        CWord { len: new_len as u8, l }
    }
    fn is_pure(&self, n: u8) -> bool {
        self.as_slice().iter().all(|&c| c < n)
    }
    fn to_word(self) -> Word {
        self.as_slice().iter().map(|&c| Letter::pos(c as u32)).collect()
    }
}

fn to_cword(w: &[Letter], n: u8) -> Result<CWord, RcError> {
    if !is_positive(w) {
        return Err(RcError::NotPositive);
    }
    if w.len() > MAX_CHAIN_LEN {
        return Err(RcError::TooLong(w.len()));
    }
    let bytes: Vec<u8> = w.iter().map(|l| l.generator() as u8).collect();
    if bytes.iter().any(|&b| b >= 2 * n) {
        return Err(RcError::BadLetter("chain"));
    }
    Ok(CWord::from_slice(&bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NotFound {
    /// The bounded component of `u` was exhausted without meeting `v`.
    Exhausted { max_len: usize, visited: usize },
    /// The distinct-word budget ran out first.
    Budget { max_len: usize, max_steps: usize, visited: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(RChain),
    NotFound(NotFound),
}

impl SearchOutcome {
    pub fn chain(&self) -> Option<&RChain> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound(_) => None,
        }
    }
}

fn check_budget(max_len: usize, max_steps: usize) -> Result<(), RcError> {
    if max_len == 0 || max_steps == 0 {
        return Err(RcError::NonPositiveBudget { max_len, max_steps });
    }
    if max_len > MAX_CHAIN_LEN {
        return Err(RcError::TooLong(max_len));
    }
    Ok(())
}

/// Bounded bidirectional BFS for an RC-chain from `u` to `v`.
pub fn search_chain(p: &Presentation, u: &[Letter], v: &[Letter], max_len: usize, max_steps: usize) -> Result<SearchOutcome, RcError> {
    check_budget(max_len, max_steps)?;
    let sys = RcSystem::new(p)?;
    let n = sys.n;
    let (cu, cv) = (to_cword(u, n)?, to_cword(v, n)?);
    if !cu.is_pure(n) || !cv.is_pure(n) {
        return Err(RcError::NotPositive);
    }
    if cu == cv {
        return Ok(SearchOutcome::Found(RChain { words: vec![u.to_vec()], steps: vec![] }));
    }
    if cu.len as usize > max_len || cv.len as usize > max_len {
        return Ok(SearchOutcome::NotFound(NotFound::Exhausted { max_len, visited: 0 }));
    }

    let mut parents: [FxHashMap<CWord, CWord>; 2] = [FxHashMap::default(), FxHashMap::default()];
    parents[0].insert(cu, cu);
    parents[1].insert(cv, cv);
    let mut frontier: [Vec<CWord>; 2] = [vec![cu], vec![cv]];
    let mut meet = None;
    'search: while !frontier[0].is_empty() && !frontier[1].is_empty() {
        let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
        let mut next = Vec::new();
        for w in std::mem::take(&mut frontier[side]) {
            let mut hit = None;
            let mut over = false;
            let (mine, theirs) = if side == 0 {
                let (a, b) = parents.split_at_mut(1);
                (&mut a[0], &b[0])
            } else {
                let (a, b) = parents.split_at_mut(1);
                (&mut b[0], &a[0])
            };
            sys.neighbours(&w, max_len, |x| {
                if hit.is_some() || over {
                    return;
                }
                if mine.contains_key(&x) {
                    return;
                }
                mine.insert(x, w);
                if theirs.contains_key(&x) {
                    hit = Some(x);
                    return;
                }
                if mine.len() + theirs.len() > max_steps {
                    over = true;
                    return;
                }
                next.push(x);
            });
            if let Some(x) = hit {
                meet = Some(x);
                break 'search;
            }
            if over {
                let visited = parents[0].len() + parents[1].len();
                return Ok(SearchOutcome::NotFound(NotFound::Budget { max_len, max_steps, visited }));
            }
        }
        frontier[side] = next;
    }
    let visited = parents[0].len() + parents[1].len();
    let Some(m) = meet else {
        return Ok(SearchOutcome::NotFound(NotFound::Exhausted { max_len, visited }));
    };

    let trace = |map: &FxHashMap<CWord, CWord>| {
        let mut path = vec![m];
        let mut cur = m;
        while map[&cur] != cur {
            cur = map[&cur];
            path.push(cur);
        }
        path
    };
    let mut path = trace(&parents[0]);
    path.reverse();
    path.extend(trace(&parents[1]).into_iter().skip(1));
    let steps = path
        .windows(2)
        .map(|w| sys.infer_step(&w[0], &w[1]).expect("search only follows legal steps"))
        .collect();
    Ok(SearchOutcome::Found(RChain { words: path.into_iter().map(CWord::to_word).collect(), steps }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exploration {
    /// Pure words of the bounded component, including the start.
    pub pure: Vec<Word>,
    pub visited: usize,
    /// False when `max_steps` cut the exploration short.
    pub complete: bool,
}

/// Reusable one-sided explorer over the same step relation as `search_chain`.
pub struct Explorer {
    sys: RcSystem,
    seen: FxHashSet<CWord>,
    queue: VecDeque<CWord>,
}

impl Explorer {
    pub fn new(p: &Presentation) -> Result<Self, RcError> {
        Ok(Explorer { sys: RcSystem::new(p)?, seen: FxHashSet::default(), queue: VecDeque::new() })
    }

    /// Every pure word reachable from `u` through words of length ≤ `max_len`.
    pub fn explore(&mut self, u: &[Letter], max_len: usize, max_steps: usize) -> Result<Exploration, RcError> {
        check_budget(max_len, max_steps)?;
        let n = self.sys.n;
        let start = to_cword(u, n)?;
        self.seen.clear();
        self.queue.clear();
        self.seen.insert(start);
        self.queue.push_back(start);
        let mut pure = vec![start];
        let mut complete = true;
        while let Some(w) = self.queue.pop_front() {
            let seen = &mut self.seen;
            let queue = &mut self.queue;
            let mut over = false;
            self.sys.neighbours(&w, max_len, |x| {
                if !over && seen.insert(x) {
                    if x.is_pure(n) {
                        pure.push(x);
                    }
                    queue.push_back(x);
                    if seen.len() >= max_steps {
                        over = true;
                    }
                }
            });
            if over {
                complete = false;
                break;
            }
        }
        Ok(Exploration { pure: pure.into_iter().map(CWord::to_word).collect(), visited: self.seen.len(), complete })
    }
}

pub fn explore_component(p: &Presentation, u: &[Letter], max_len: usize, max_steps: usize) -> Result<Exploration, RcError> {
    Explorer::new(p)?.explore(u, max_len, max_steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainValidation {
    pub valid: bool,
    pub violation: Option<Violation>,
    /// Matched (insertion step, deletion step) pairs.
    pub pairs: Vec<(usize, usize)>,
}

fn apply_step(p: &Presentation, n: u32, w: &[Letter], step: &Step) -> Result<Word, String> {
    let positive_prefix = |pos: usize| -> Result<(), String> {
        if pos > w.len() {
            return Err(format!("position {pos} beyond word length {}", w.len()));
        }
        if w[..pos].iter().any(|l| l.generator() >= n) {
            return Err(format!("prefix of length {pos} is not positive"));
        }
        Ok(())
    };
    match *step {
        Step::RStep { position, relation, forward } => {
            let rel = p.relations.get(relation).ok_or_else(|| format!("no relation {relation}"))?;
            let (from, to) = if forward { (&rel.lhs, &rel.rhs) } else { (&rel.rhs, &rel.lhs) };
            positive_prefix(position)?;
            if position + from.len() > w.len() || w[position..position + from.len()] != from[..] {
                return Err(format!("relation {relation} side does not occur at {position}"));
            }
            let mut out = w[..position].to_vec();
            out.extend_from_slice(to);
            out.extend_from_slice(&w[position + from.len()..]);
            Ok(out)
        }
        Step::Insertion { position, letter } => {
            positive_prefix(position)?;
            if letter >= n {
                return Err(format!("insertion letter {letter} is not in A"));
            }
            let mut out = w[..position].to_vec();
            out.push(Letter::pos(letter));
            out.push(Letter::pos(letter + n));
            out.extend_from_slice(&w[position..]);
            Ok(out)
        }
        Step::Deletion { position, letter } => {
            positive_prefix(position)?;
            if w.get(position) != Some(&Letter::pos(letter)) || w.get(position + 1) != Some(&Letter::pos(letter + n)) {
                return Err(format!("no `a a^R` factor for letter {letter} at {position}"));
            }
            let mut out = w[..position].to_vec();
            out.extend_from_slice(&w[position + 2..]);
            Ok(out)
        }
    }
}

/// Checks every step against the three step rules and the stack pairing.
pub fn validate_chain(p: &Presentation, c: &RChain) -> ChainValidation {
    let n = p.alphabet.len() as u32;
    let fail = |step: usize, reason: String, pairs: Vec<(usize, usize)>| ChainValidation {
        valid: false,
        violation: Some(Violation { step, reason }),
        pairs,
    };
    if c.words.len() != c.steps.len() + 1 {
        return fail(0, "word count must be step count + 1".into(), vec![]);
    }
    for (i, w) in c.words.iter().enumerate() {
        if w.iter().any(|l| l.is_inverse() || l.generator() >= 2 * n) {
            return fail(i, format!("word {i} is not over A ∪ A^R"), vec![]);
        }
    }
    let pure = |w: &Word| w.iter().all(|l| l.generator() < n);
    if !pure(&c.words[0]) || !pure(c.words.last().unwrap()) {
        return fail(0, "endpoints must not contain A^R letters".into(), vec![]);
    }
    let mut stack: Vec<(usize, u32)> = Vec::new();
    let mut pairs = Vec::new();
    for (i, step) in c.steps.iter().enumerate() {
        match apply_step(p, n, &c.words[i], step) {
            Ok(next) if next == c.words[i + 1] => {}
            Ok(_) => return fail(i, "step record does not produce the next word".into(), pairs),
            Err(reason) => return fail(i, reason, pairs),
        }
        match *step {
            Step::Insertion { letter, .. } => stack.push((i, letter)),
            Step::Deletion { letter, .. } => match stack.pop() {
                Some((j, l)) if l == letter => pairs.push((j, i)),
                _ => return fail(i, "deletion does not match the innermost insertion".into(), pairs),
            },
            Step::RStep { .. } => {}
        }
    }
    if !stack.is_empty() {
        return fail(c.steps.len(), "unmatched insertion".into(), pairs);
    }
    ChainValidation { valid: true, violation: None, pairs }
}

/// Replays the step records from the first word.
pub fn replay_chain(p: &Presentation, c: &RChain) -> Result<Word, String> {
    let n = p.alphabet.len() as u32;
    let mut w = c.words.first().cloned().ok_or("empty chain")?;
    for s in &c.steps {
        w = apply_step(p, n, &w, s)?;
    }
    Ok(w)
}

/// Serialised chain: words in text form, steps with letter names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub words: Vec<String>,
    pub steps: Vec<CertStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertStep {
    RStep { position: usize, relation: usize, forward: bool },
    Insertion { position: usize, letter: String },
    Deletion { position: usize, letter: String },
}

impl ChainCertificate {
    pub fn from_chain(p: &Presentation, c: &RChain) -> Self {
        let ca = chain_alphabet(&p.alphabet);
        ChainCertificate {
            words: c.words.iter().map(|w| ca.format(w)).collect(),
            steps: c
                .steps
                .iter()
                .map(|s| match *s {
                    Step::RStep { position, relation, forward } => CertStep::RStep { position, relation, forward },
                    Step::Insertion { position, letter } => {
                        CertStep::Insertion { position, letter: p.alphabet.name(letter).to_string() }
                    }
                    Step::Deletion { position, letter } => {
                        CertStep::Deletion { position, letter: p.alphabet.name(letter).to_string() }
                    }
                })
                .collect(),
        }
    }

    pub fn to_chain(&self, p: &Presentation) -> Result<RChain, RcError> {
        let ca = chain_alphabet(&p.alphabet);
        let words = self.words.iter().map(|w| ca.parse(w)).collect::<Result<Vec<_>, _>>()?;
        let letter = |name: &str| -> Result<u32, RcError> { Ok(p.alphabet.letter(name)?.generator()) };
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(match s {
                    CertStep::RStep { position, relation, forward } => {
                        Step::RStep { position: *position, relation: *relation, forward: *forward }
                    }
                    CertStep::Insertion { position, letter: l } => Step::Insertion { position: *position, letter: letter(l)? },
                    CertStep::Deletion { position, letter: l } => Step::Deletion { position: *position, letter: letter(l)? },
                })
            })
            .collect::<Result<Vec<_>, RcError>>()?;
        Ok(RChain { words, steps })
    }
}

/// Generator order of the six-letter `M_r` alphabet.
pub const MR_GENERATORS: [&str; 6] = ["a0", "a1", "p0", "p1", "q0", "q1"];

pub fn mr_alphabet() -> InvolutiveAlphabet {
    InvolutiveAlphabet::new(&MR_GENERATORS).expect("fixed names")
}

/// `q0 a0^m p0 = q1 a1^m p1` for `0 ≤ m ≤ r`.
pub fn mr_presentation(r: usize) -> Presentation {
    let mut p = Presentation::new(Kind::RcMonoid, mr_alphabet());
    let g = |s: &str| p.alphabet.letter(s).unwrap();
    let (a0, a1, p0, p1, q0, q1) = (g("a0"), g("a1"), g("p0"), g("p1"), g("q0"), g("q1"));
    let mut rels = Vec::new();
    for m in 0..=r {
        let side = |q, a, pp| {
            let mut w = vec![q];
            w.extend(std::iter::repeat_n(a, m));
            w.push(pp);
            w
        };
        rels.push(Relation::new(side(q0, a0, p0), side(q1, a1, p1)));
    }
    p.relations = rels;
    p.name = Some(format!("M_{r}"));
    p.trunc.push(("r".into(), r.to_string()));
    p
}

/// Normal form: each uniform-index block `q_i a_i^k p_i` with `k ≤ r` is sent
/// to index 0; everything else is kept. `r = None` is the untruncated family.
pub fn mr_normal_form(r: Option<usize>, w: &[Letter]) -> Result<Word, RcError> {
    const A0: u32 = 0;
    const P0: u32 = 2;
    const Q0: u32 = 4;
    let mut g = Vec::with_capacity(w.len());
    for l in w {
        if l.is_inverse() || l.generator() >= 6 {
            return Err(RcError::BadLetter("M_r"));
        }
        g.push(l.generator());
    }
    let mut out = Word::with_capacity(w.len());
    let mut i = 0;
    while i < g.len() {
        if g[i] == Q0 || g[i] == Q0 + 1 {
            let idx = g[i] - Q0;
            let mut j = i + 1;
            while j < g.len() && g[j] == A0 + idx {
                j += 1;
            }
            let k = j - i - 1;
            if j < g.len() && g[j] == P0 + idx && r.is_none_or(|r| k <= r) {
                out.push(Letter::pos(Q0));
                out.extend(std::iter::repeat_n(Letter::pos(A0), k));
                out.push(Letter::pos(P0));
                i = j + 1;
                continue;
            }
        }
        out.push(Letter::pos(g[i]));
        i += 1;
    }
    Ok(out)
}

/// Exact equality in `M_r`.
pub fn mr_equal(r: usize, u: &[Letter], v: &[Letter]) -> Result<bool, RcError> {
    Ok(mr_normal_form(Some(r), u)? == mr_normal_form(Some(r), v)?)
}
