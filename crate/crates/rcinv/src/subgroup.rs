//! Coset representatives, boundary words, the generating set `Y` and the
//! rewriting (`φ`) / representation (`ψ`) maps for a subgroup `H` given by
//! a finite `R`-class model.
//!
//! Equalities in `M` are decided by replaying words from the idempotent
//! vertex `e` of the model: for words that stay inside the `R`-class,
//! `e·u = e·v` iff both paths end at the same vertex. `ψ`-words are stored
//! without their leading `e`, which acts trivially when replayed from `e`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{boundary_width, cover_analysis, BoundaryError, RClassModel};
use crate::graphs::Vertex;
use crate::words::{invert_word, Letter, Word};

#[derive(Debug, Error)]
pub enum SubgroupError {
    #[error("the union of the chosen cosets is not connected")]
    NotConnected,
    #[error("coset {0} is not part of the cover")]
    NotInCover(u32),
    #[error("coset {0} is not reachable from the idempotent")]
    Unreachable(u32),
    #[error("word leaves the R-class after {0} letters")]
    Undefined(usize),
    #[error("word does not end in the cover")]
    EndsOutside,
    #[error("malformed system file: {0}")]
    Format(String),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

type Result<T> = std::result::Result<T, SubgroupError>;

/// Generator `[j, w]` of `H`; `w` indexes the boundary-word list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub j: u32,
    pub w: usize,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.j, self.w)
    }
}

#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub model: RClassModel,
    /// Cosets in the cover, in the fixed order `≺` (increasing index).
    pub j: Vec<u32>,
    pub representatives: BTreeMap<u32, Word>,
    /// Vertex `e·r_j` for each coset in the model.
    pub rep_vertex: BTreeMap<u32, Vertex>,
    /// `w_{x,y}` for every boundary pair of the cover.
    pub boundary_words: BTreeMap<(Vertex, Vertex), Word>,
    /// Distinct boundary words; `Symbol::w` indexes into this.
    pub w_list: Vec<Word>,
    /// BFS discovery rank, giving the orders `<_j`.
    pub rank: Vec<u32>,
    pub kappa: u32,
}

impl CosetSystem {
    fn in_cover(&self, v: Vertex) -> bool {
        self.j.contains(&self.model.coset[v as usize])
    }

    /// Coset reached by reading `u` from `e·r_j`, if the read stays in `R`.
    pub fn act(&self, j: u32, u: &[Letter]) -> Option<u32> {
        let v = *self.rep_vertex.get(&j)?;
        self.model.graph.read_end(v, u).map(|t| self.model.coset[t as usize])
    }

    pub fn e(&self) -> Vertex {
        self.model.idempotent
    }

    /// `r_j w r′_{j·w}` (the leading `e` is implicit).
    pub fn psi_symbol(&self, s: Symbol) -> Word {
        let w = &self.w_list[s.w];
        let k = self.act(s.j, w).expect("symbols are only built for defined actions");
        let mut out = self.representatives[&s.j].clone();
        out.extend_from_slice(w);
        out.extend(invert_word(&self.representatives[&k]));
        out
    }

    pub fn psi(&self, word: &[Symbol]) -> Word {
        word.iter().flat_map(|&s| self.psi_symbol(s)).collect()
    }

    /// Replay from `e`.
    pub fn eval(&self, w: &[Letter]) -> Option<Vertex> {
        self.model.graph.read_end(self.e(), w)
    }

    fn w_index(&self, w: &Word) -> Option<usize> {
        self.w_list.iter().position(|x| x == w)
    }

    pub fn symbol_name(&self, s: Symbol) -> String {
        let a = self.model.graph.alphabet();
        let w = &self.w_list[s.w];
        format!("[{},{}]", s.j, if w.is_empty() { "1".to_string() } else { a.format(w) })
    }

    pub fn format_symbols(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&s| self.symbol_name(s)).collect::<Vec<_>>().join(" ")
    }
}

/// Builds representatives (BFS tree words from `e`), `β` words and the
/// boundary words for the cover `⋃_{j∈J} H_j`.
pub fn build_coset_system(model: &RClassModel, j: &BTreeSet<u32>) -> Result<CosetSystem> {
    let g = &model.graph;
    let cover = model.union(j);
    if !j.contains(&1) {
        return Err(SubgroupError::NotInCover(1));
    }
    if !g.is_connected(&cover) {
        return Err(SubgroupError::NotConnected);
    }
    let n = g.num_vertices();
    let e = model.idempotent;
    let mut rank = vec![u32::MAX; n];
    let mut tree_word: Vec<Option<Word>> = vec![None; n];
    rank[e as usize] = 0;
    tree_word[e as usize] = Some(Vec::new());
    let mut next = 1;
    let mut queue = VecDeque::from([e]);
    while let Some(v) = queue.pop_front() {
        for (l, t) in g.sorted_neighbours(v) {
            if rank[t as usize] == u32::MAX {
                rank[t as usize] = next;
                next += 1;
                let mut w = tree_word[v as usize].clone().unwrap();
                w.push(l);
                tree_word[t as usize] = Some(w);
                queue.push_back(t);
            }
        }
    }
    // representative of H_i: first vertex of H_i found by the BFS
    let mut representatives = BTreeMap::new();
    let mut rep_vertex = BTreeMap::new();
    for i in model.cosets() {
        let best = model.members(i).into_iter().filter(|&v| rank[v as usize] != u32::MAX).min_by_key(|&v| rank[v as usize]);
        match best {
            Some(v) => {
                representatives.insert(i, tree_word[v as usize].clone().unwrap());
                rep_vertex.insert(i, v);
            }
            None if j.contains(&i) => return Err(SubgroupError::Unreachable(i)),
            None => {}
        }
    }
    let report = boundary_width(g, &cover);
    let key = |v: Vertex| (model.coset[v as usize], rank[v as usize]);
    let mut boundary_words = BTreeMap::new();
    let pairs: BTreeSet<(Vertex, Vertex)> = report.pairs.iter().map(|p| (p.x, p.y)).collect();
    for &(x, y) in &pairs {
        let w = if x == y {
            Vec::new()
        } else {
            let (lo, hi) = if key(x) < key(y) { (x, y) } else { (y, x) };
            let cj = model.coset[lo as usize];
            let base = rep_vertex[&cj];
            // β_{j,s}: move the pair onto e·r_j (left H-action is a graph automorphism)
            let s = g.shortest_word(lo, hi).expect("boundary pairs are connected");
            let target = g.read_end(base, &s).expect("left translates read the same words");
            let beta = g.shortest_word(base, target).expect("connected");
            if lo == x {
                beta
            } else {
                invert_word(&beta)
            }
        };
        boundary_words.insert((x, y), w);
    }
    let mut w_list: Vec<Word> = Vec::new();
    for w in boundary_words.values() {
        if !w_list.contains(w) {
            w_list.push(w.clone());
        }
    }
    Ok(CosetSystem {
        model: model.clone(),
        j: j.iter().copied().collect(),
        representatives,
        rep_vertex,
        boundary_words,
        w_list,
        rank,
        kappa: report.width,
    })
}

/// Cover grown from `{1}` by the enlargement procedure.
pub fn default_cover(model: &RClassModel) -> Result<BTreeSet<u32>> {
    let a = cover_analysis(model, &BTreeSet::from([1]))?;
    Ok(a.enlarged.into_iter().collect())
}

/// `Y`: every `[j, w]` with `j·w ∈ J`, with its `ψ`-word.
pub fn generator_set_y(cs: &CosetSystem) -> Vec<(Symbol, Word)> {
    let mut out = Vec::new();
    for &j in &cs.j {
        for (wi, w) in cs.w_list.iter().enumerate() {
            if cs.act(j, w).is_some_and(|k| cs.j.contains(&k)) {
                let s = Symbol { j, w: wi };
                out.push((s, cs.psi_symbol(s)));
            }
        }
    }
    out
}

/// `φ(j, u)`: cut `u` at the shortest non-empty prefixes landing in the cover.
pub fn rewrite_phi(cs: &CosetSystem, j: u32, u: &[Letter]) -> Result<Vec<Symbol>> {
    if !cs.j.contains(&j) {
        return Err(SubgroupError::NotInCover(j));
    }
    let g = &cs.model.graph;
    let mut out = Vec::new();
    let mut cur = j;
    let mut start = 0;
    let mut v = cs.rep_vertex[&cur];
    for (i, &l) in u.iter().enumerate() {
        v = g.step(v, l).ok_or(SubgroupError::Undefined(i))?;
        if cs.in_cover(v) {
            let base = cs.rep_vertex[&cur];
            let bar = cs.boundary_words.get(&(base, v)).ok_or(SubgroupError::EndsOutside)?;
            let wi = cs.w_index(bar).expect("boundary words are listed");
            out.push(Symbol { j: cur, w: wi });
            cur = cs.model.coset[v as usize];
            start = i + 1;
            v = cs.rep_vertex[&cur];
        }
    }
    if start != u.len() {
        return Err(SubgroupError::EndsOutside);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckCount {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckCount {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(witness());
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClaimReport {
    pub seed: u64,
    pub representatives: CheckCount,
    pub wprop_replay: CheckCount,
    pub wprop_inverse: CheckCount,
    pub wprop_consistency: CheckCount,
    pub claim1: CheckCount,
    pub claim2: CheckCount,
    pub retraction: CheckCount,
    pub phi_hom: CheckCount,
    pub generates: CheckCount,
}

impl ClaimReport {
    pub fn sections(&self) -> [(&'static str, &CheckCount); 9] {
        [
            ("representatives", &self.representatives),
            ("wprop_replay", &self.wprop_replay),
            ("wprop_inverse", &self.wprop_inverse),
            ("wprop_consistency", &self.wprop_consistency),
            ("claim1", &self.claim1),
            ("claim2", &self.claim2),
            ("retraction", &self.retraction),
            ("phi_hom", &self.phi_hom),
            ("generates", &self.generates),
        ]
    }
    pub fn passed(&self) -> bool {
        self.sections().iter().all(|(_, c)| c.failures.is_empty())
    }
}

/// Random walk from `v` that stops on re-entering the cover (or after `cap` steps).
fn excursion(cs: &CosetSystem, rng: &mut ChaCha8Rng, v: Vertex, cap: usize) -> Option<(Word, Vertex)> {
    let g = &cs.model.graph;
    let mut w = Vec::new();
    let mut cur = v;
    for _ in 0..cap {
        let nb = g.sorted_neighbours(cur);
        let &(l, t) = nb.choose(rng)?;
        w.push(l);
        cur = t;
        if cs.in_cover(cur) {
            return Some((w, cur));
        }
    }
    None
}

/// Walk from `v` of `len` steps, extended until it ends in the cover.
fn walk_into_cover(cs: &CosetSystem, rng: &mut ChaCha8Rng, v: Vertex, len: usize) -> Option<Word> {
    let g = &cs.model.graph;
    let mut w = Vec::new();
    let mut cur = v;
    for _ in 0..len {
        let nb = g.sorted_neighbours(cur);
        let &(l, t) = nb.choose(rng)?;
        w.push(l);
        cur = t;
    }
    if !cs.in_cover(cur) {
        let (tail, _) = excursion(cs, rng, cur, 64)?;
        w.extend(tail);
    }
    Some(w)
}

/// Checks the boundary-word properties, the two claim identities, `ψφ = id`
/// on sampled words of `H`, prefix-compositionality of `φ`, and that `Y`
/// generates `H` in the model.
pub fn verify_claims(cs: &CosetSystem, samples: usize, seed: u64) -> ClaimReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = &cs.model.graph;
    let a = g.alphabet().clone();
    let mut rep = ClaimReport { seed, ..Default::default() };
    let e = cs.e();
    let h: Vec<Vertex> = cs.model.members(1);

    for &hv in &h {
        for (j, r) in &cs.representatives {
            let mut w = r.clone();
            w.extend(invert_word(r));
            rep.representatives.record(g.read_end(hv, &w) == Some(hv), || format!("h={hv} j={j}"));
        }
    }
    for (&(x, y), w) in &cs.boundary_words {
        rep.wprop_replay.record(g.read_end(x, w) == Some(y), || format!("w_{{{x},{y}}} = {}", a.format(w)));
        if let Some(back) = cs.boundary_words.get(&(y, x)) {
            rep.wprop_inverse.record(*back == invert_word(w), || format!("w_{{{y},{x}}} ≠ w_{{{x},{y}}}⁻¹"));
        }
    }
    // property (1) for pairs related by a common s (a shortest x₁→y₁ word)
    let pairs: Vec<(&(Vertex, Vertex), &Word)> = cs.boundary_words.iter().collect();
    for (i, &(&(x1, y1), w1)) in pairs.iter().enumerate() {
        let Some(s) = g.shortest_word(x1, y1) else { continue };
        let j = cs.model.coset[x1 as usize];
        for &(&(x2, y2), w2) in &pairs[i + 1..] {
            if cs.model.coset[x2 as usize] != j || cs.model.coset[y2 as usize] != cs.model.coset[y1 as usize] {
                continue;
            }
            if g.read_end(x2, &s) != Some(y2) {
                continue;
            }
            let base = cs.rep_vertex[&j];
            rep.wprop_consistency.record(g.read_end(base, w1) == g.read_end(base, w2), || {
                format!("e r_{j} w_{{{x1},{y1}}} ≠ e r_{j} w_{{{x2},{y2}}}")
            });
        }
    }

    let js = cs.j.clone();
    // claim 1: excursions leaving the cover and first returning at e·r_j.
    // Sampled until `samples` are found or the attempt budget runs out;
    // vacuous when every neighbour of e·r_j lies in the cover.
    let mut attempts = 0;
    while rep.claim1.checked < samples && attempts < 50 * samples {
        attempts += 1;
        let j = *js.choose(&mut rng).expect("cover is non-empty");
        let base = cs.rep_vertex[&j];
        if let Some((alpha, end)) = excursion(cs, &mut rng, base, 4 * cs.kappa as usize + 8) {
            if end == base {
                let ok = rewrite_phi(cs, j, &alpha)
                    .map(|p| p.len() == 1 && cs.w_list[p[0].w].is_empty() && cs.eval(&cs.psi(&p)) == Some(e));
                rep.claim1.record(ok.unwrap_or(false), || format!("j={j} α={}", a.format(&alpha)));
            }
        }
    }
    for _ in 0..samples {
        let j = *js.choose(&mut rng).expect("cover is non-empty");
        let base = cs.rep_vertex[&j];
        // claim 2
        let len = rng.gen_range(1..=2 * cs.kappa as usize + 4);
        if let Some(alpha) = walk_into_cover(cs, &mut rng, base, len) {
            let k = cs.act(j, &alpha).expect("walk stays in R");
            match (rewrite_phi(cs, j, &alpha), rewrite_phi(cs, k, &invert_word(&alpha))) {
                (Ok(p1), Ok(p2)) => {
                    let mut w = cs.psi(&p1);
                    w.extend(cs.psi(&p2));
                    rep.claim2.record(cs.eval(&w) == Some(e), || {
                        format!("j={j} α={} φφ={} {}", a.format(&alpha), cs.format_symbols(&p1), cs.format_symbols(&p2))
                    });
                }
                (r1, r2) => rep.claim2.record(false, || format!("j={j} α={}: {r1:?} {r2:?}", a.format(&alpha))),
            }
        }
        // retraction and φ-compositionality on γ ∈ L(A, H)
        let len = rng.gen_range(0..=3 * cs.kappa as usize + 6);
        let target = *h.choose(&mut rng).expect("H is non-empty");
        if let Some(mut gamma) = walk_into_cover(cs, &mut rng, e, len) {
            let end = g.read_end(e, &gamma).unwrap();
            gamma.extend(g.shortest_word(end, target).expect("connected model"));
            match rewrite_phi(cs, 1, &gamma) {
                Ok(phi) => {
                    rep.retraction.record(cs.eval(&cs.psi(&phi)) == Some(target), || {
                        format!("γ={} φ={}", a.format(&gamma), cs.format_symbols(&phi))
                    });
                    let mut v = e;
                    for i in 0..gamma.len() {
                        v = g.step(v, gamma[i]).unwrap();
                        if !cs.in_cover(v) {
                            continue;
                        }
                        let k = cs.model.coset[v as usize];
                        let (w1, w2) = gamma.split_at(i + 1);
                        let joined = rewrite_phi(cs, 1, w1).and_then(|mut p| {
                            p.extend(rewrite_phi(cs, k, w2)?);
                            Ok(p)
                        });
                        rep.phi_hom.record(joined.ok().as_ref() == Some(&phi), || format!("γ={} at {}", a.format(&gamma), i + 1));
                    }
                }
                Err(err) => rep.retraction.record(false, || format!("γ={}: {err}", a.format(&gamma))),
            }
        }
    }
    // Y generates H: closure of e under right multiplication by ψ(Y)
    let y = generator_set_y(cs);
    let mut reached = BTreeSet::from([e]);
    let mut queue = VecDeque::from([e]);
    while let Some(v) = queue.pop_front() {
        for (_, w) in &y {
            if let Some(t) = g.read_end(v, w) {
                if reached.insert(t) {
                    queue.push_back(t);
                }
            }
        }
    }
    for &hv in &h {
        rep.generates.record(reached.contains(&hv), || format!("vertex {hv} of H not reached by Y"));
    }
    rep
}

/// Family (1) relations `b = φ(ψ(b))`, and the finite relation set used for
/// the inverse identity: `b₁ = b₂` when `ψ` agrees, `b₁b₂ = 1` when `ψ(b₁b₂) = e`.
/// Emitted for inspection only, at most `cap` of each.
pub fn bounded_relations(cs: &CosetSystem, cap: usize) -> Vec<(String, Vec<Symbol>, Vec<Symbol>)> {
    let y = generator_set_y(cs);
    let mut out = Vec::new();
    for (s, w) in y.iter().take(cap) {
        if let Ok(p) = rewrite_phi(cs, 1, w) {
            out.push(("phi_psi".to_string(), vec![*s], p));
        }
    }
    let mut n_eq = 0;
    let mut n_inv = 0;
    for (s1, w1) in &y {
        for (s2, w2) in &y {
            if s1 < s2 && n_eq < cap && cs.eval(w1) == cs.eval(w2) {
                out.push(("equal_psi".into(), vec![*s1], vec![*s2]));
                n_eq += 1;
            }
            let mut w = w1.clone();
            w.extend_from_slice(w2);
            if n_inv < cap && cs.eval(&w) == Some(cs.e()) {
                out.push(("inverse_pair".into(), vec![*s1, *s2], vec![]));
                n_inv += 1;
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    model: String,
    cover: Vec<u32>,
    representatives: Vec<(u32, String)>,
    boundary_words: Vec<(Vertex, Vertex, String)>,
}

impl CosetSystem {
    pub fn to_json(&self) -> String {
        let a = self.model.graph.alphabet();
        let f = SystemFile {
            model: self.model.to_text(),
            cover: self.j.clone(),
            representatives: self.representatives.iter().map(|(j, w)| (*j, a.format(w))).collect(),
            boundary_words: self.boundary_words.iter().map(|(&(x, y), w)| (x, y, a.format(w))).collect(),
        };
        serde_json::to_string_pretty(&f).expect("serializable")
    }

    /// Loads the stored tables as they are (a tampered file stays tampered).
    pub fn from_json(text: &str) -> Result<Self> {
        let f: SystemFile = serde_json::from_str(text).map_err(|e| SubgroupError::Format(e.to_string()))?;
        let model = RClassModel::parse(&f.model)?;
        let mut cs = build_coset_system(&model, &f.cover.iter().copied().collect())?;
        let a = model.graph.alphabet().clone();
        let parse = |s: &str| -> Result<Word> {
            if s == "1" || s.is_empty() {
                Ok(Vec::new())
            } else {
                a.parse(s).map_err(|e| SubgroupError::Format(e.to_string()))
            }
        };
        for (j, w) in &f.representatives {
            cs.representatives.insert(*j, parse(w)?);
        }
        cs.boundary_words.clear();
        for (x, y, w) in &f.boundary_words {
            cs.boundary_words.insert((*x, *y), parse(w)?);
        }
        cs.w_list.clear();
        for w in cs.boundary_words.values() {
            if !cs.w_list.contains(w) {
                cs.w_list.push(w.clone());
            }
        }
        Ok(cs)
    }

    /// Replaces one stored boundary word (fault injection for tests).
    pub fn corrupt_boundary_word(&mut self, x: Vertex, y: Vertex, w: Word) {
        self.boundary_words.insert((x, y), w.clone());
        if !self.w_list.contains(&w) {
            self.w_list.push(w);
        }
    }
}
