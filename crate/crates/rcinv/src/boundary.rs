//! Boundary pairs and boundary width of vertex sets, ball covers, covers of
//! subgroups by cosets, the `L(k)` generation test for `π₁`, and
//! quasi-isometry constant checks.
//!
//! All graphs are read undirected. Two widths are reported: the literal one
//! (every path counts, including a single edge inside `X`) and the excursion
//! one (paths with at least one intermediate vertex outside `X`). They differ
//! exactly on adjacent pairs of `X`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graphs::{parse_graph_with_extras, Folder, GraphError, LabeledDigraph, Vertex};
use crate::presentations::{prefix_generators, Presentation, PresentationError};
use crate::stephen::{approximate, Budget, StephenError};
use crate::words::{InvolutiveAlphabet, Letter, WordError};

#[derive(Debug, Error)]
pub enum BoundaryError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} is not in the graph")]
    BadVertex(Vertex),
    #[error("coset index {0} is not used by the model")]
    UnknownCoset(u32),
    #[error("model line {line}: {message}")]
    Model { line: usize, message: String },
    #[error("model is inconsistent: {0}")]
    Inconsistent(String),
    #[error("loop enumeration exceeded {0} words")]
    TooManyLoops(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Stephen(#[from] StephenError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

type Result<T> = std::result::Result<T, BoundaryError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryPair {
    pub x: Vertex,
    pub y: Vertex,
    /// Vertex sequence of a boundary path from `x` to `y`.
    pub path: Vec<Vertex>,
    /// Distance in the whole graph.
    pub distance: u32,
}

impl BoundaryPair {
    pub fn single_edge(&self) -> bool {
        self.path.len() == 2
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub subset: Vec<Vertex>,
    pub pairs: Vec<BoundaryPair>,
    /// Max distance over all pairs.
    pub width: u32,
    /// Max distance over pairs with a path leaving `X`.
    pub excursion_width: u32,
    pub no_pairs: bool,
    /// `false` when the graph is only a ball of something infinite; the
    /// width is then a lower bound.
    pub exact: bool,
}

fn mask(n: usize, x: &BTreeSet<Vertex>) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in x {
        m[v as usize] = true;
    }
    m
}

/// Exact boundary width of `x` in a finite graph.
pub fn boundary_width(g: &LabeledDigraph, x: &BTreeSet<Vertex>) -> BoundaryReport {
    let n = g.num_vertices();
    let in_x = mask(n, x);
    let mut pairs = Vec::new();
    for &s in x {
        let dist = g.distances_from(s);
        // single edges
        let mut adj: BTreeSet<Vertex> = BTreeSet::new();
        // BFS through the complement, remembering parents
        let mut parent = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for (_, t) in g.sorted_neighbours(s) {
            if in_x[t as usize] {
                adj.insert(t);
            } else if parent[t as usize] == u32::MAX {
                parent[t as usize] = s;
                queue.push_back(t);
            }
        }
        let mut reentry: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        while let Some(v) = queue.pop_front() {
            for (_, t) in g.sorted_neighbours(v) {
                if in_x[t as usize] {
                    reentry.entry(t).or_insert(v);
                } else if parent[t as usize] == u32::MAX && t != s {
                    parent[t as usize] = v;
                    queue.push_back(t);
                }
            }
        }
        for t in adj {
            pairs.push(BoundaryPair { x: s, y: t, path: vec![s, t], distance: dist[t as usize] });
        }
        for (t, last) in reentry {
            let mut path = vec![t, last];
            let mut cur = last;
            while parent[cur as usize] != s {
                cur = parent[cur as usize];
                path.push(cur);
            }
            path.push(s);
            path.reverse();
            pairs.push(BoundaryPair { x: s, y: t, path, distance: dist[t as usize] });
        }
    }
    let width = pairs.iter().map(|p| p.distance).max().unwrap_or(0);
    let excursion_width = pairs.iter().filter(|p| !p.single_edge()).map(|p| p.distance).max().unwrap_or(0);
    BoundaryReport {
        subset: x.iter().copied().collect(),
        no_pairs: pairs.is_empty(),
        pairs,
        width,
        excursion_width,
        exact: true,
    }
}

/// Same computation on a ball of an infinite graph; the result is only a lower bound.
pub fn boundary_width_on_ball(g: &LabeledDigraph, x: &BTreeSet<Vertex>) -> BoundaryReport {
    BoundaryReport { exact: false, ..boundary_width(g, x) }
}

/// Consecutive path vertices adjacent, ends in `X`, interior outside `X`.
pub fn replay_pair(g: &LabeledDigraph, x: &BTreeSet<Vertex>, p: &BoundaryPair) -> bool {
    let path = &p.path;
    path.len() >= 2
        && path[0] == p.x
        && path[path.len() - 1] == p.y
        && x.contains(&p.x)
        && x.contains(&p.y)
        && path[1..path.len() - 1].iter().all(|v| !x.contains(v))
        && path.windows(2).all(|w| g.neighbours(w[0]).any(|(_, t)| t == w[1]))
}

/// `Δ_r`: union of the radius-`r` balls around `Δ`.
pub fn ball_cover(g: &LabeledDigraph, delta: &BTreeSet<Vertex>, r: u32) -> BTreeSet<Vertex> {
    let n = g.num_vertices();
    let mut dist = vec![u32::MAX; n];
    let mut queue: VecDeque<Vertex> = delta.iter().copied().collect();
    for &v in delta {
        dist[v as usize] = 0;
    }
    while let Some(v) = queue.pop_front() {
        if dist[v as usize] >= r {
            continue;
        }
        for (_, t) in g.neighbours(v) {
            if dist[t as usize] == u32::MAX {
                dist[t as usize] = dist[v as usize] + 1;
                queue.push_back(t);
            }
        }
    }
    (0..n as Vertex).filter(|&v| dist[v as usize] != u32::MAX).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverBoundReport {
    pub r: u32,
    pub k: u32,
    pub k_excursion: u32,
    pub width_r: u32,
    pub width_r_excursion: u32,
    /// `β(Δ_r) ≤ 2r + β(Δ)` for the literal width.
    pub holds: bool,
    /// Same for the excursion width.
    pub holds_excursion: bool,
}

pub fn check_cover_bounds(g: &LabeledDigraph, delta: &BTreeSet<Vertex>, r: u32) -> CoverBoundReport {
    let base = boundary_width(g, delta);
    let cover = boundary_width(g, &ball_cover(g, delta, r));
    CoverBoundReport {
        r,
        k: base.width,
        k_excursion: base.excursion_width,
        width_r: cover.width,
        width_r_excursion: cover.excursion_width,
        holds: cover.width <= 2 * r + base.width,
        holds_excursion: cover.excursion_width <= 2 * r + base.excursion_width,
    }
}

/// Finite model of an `R`-class: its graph, the partition into cosets `H_i`
/// (index 1 is the subgroup `H`), the idempotent `e` and optionally the
/// right action of generators on coset indices (`None` = `⊥`).
#[derive(Clone, Debug)]
pub struct RClassModel {
    pub graph: LabeledDigraph,
    pub coset: Vec<u32>,
    pub idempotent: Vertex,
    pub action: Option<BTreeMap<(u32, Letter), Option<u32>>>,
}

impl RClassModel {
    pub fn new(graph: LabeledDigraph, coset: Vec<u32>, idempotent: Vertex) -> Result<Self> {
        let m = RClassModel { graph, coset, idempotent, action: None };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coset.len() != self.graph.num_vertices() {
            return Err(BoundaryError::Inconsistent("partition does not cover all vertices".into()));
        }
        if self.idempotent as usize >= self.coset.len() {
            return Err(BoundaryError::BadVertex(self.idempotent));
        }
        if self.coset[self.idempotent as usize] != 1 {
            return Err(BoundaryError::Inconsistent("idempotent is not in coset 1".into()));
        }
        if let Some(action) = &self.action {
            let derived = self.derived_action();
            for (&(i, l), &j) in action {
                if let Some(&d) = derived.get(&(i, l)) {
                    if j.is_some() && d != j {
                        return Err(BoundaryError::Inconsistent(format!(
                            "action {i}·{} disagrees with the graph",
                            self.graph.alphabet().letter_name(l)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cosets(&self) -> BTreeSet<u32> {
        self.coset.iter().copied().collect()
    }

    pub fn union(&self, j: &BTreeSet<u32>) -> BTreeSet<Vertex> {
        (0..self.coset.len() as Vertex).filter(|&v| j.contains(&self.coset[v as usize])).collect()
    }

    pub fn members(&self, i: u32) -> Vec<Vertex> {
        (0..self.coset.len() as Vertex).filter(|&v| self.coset[v as usize] == i).collect()
    }

    /// Action read off the graph: `i·a = j` when every vertex of `H_i` has an
    /// `a`-edge and all of them land in `H_j`.
    pub fn derived_action(&self) -> BTreeMap<(u32, Letter), Option<u32>> {
        let g = &self.graph;
        let mut out = BTreeMap::new();
        for i in self.cosets() {
            let members = self.members(i);
            for gen in 0..g.alphabet().len() as u32 {
                for l in [Letter::pos(gen), Letter::neg(gen)] {
                    let targets: BTreeSet<Option<u32>> =
                        members.iter().map(|&v| g.step(v, l).map(|t| self.coset[t as usize])).collect();
                    let j = match targets.into_iter().collect::<Vec<_>>().as_slice() {
                        [Some(j)] => Some(*j),
                        _ => None,
                    };
                    out.insert((i, l), j);
                }
            }
        }
        out
    }

    /// Explicit table if present, else the derived one.
    pub fn act(&self, i: u32, l: Letter) -> Option<u32> {
        match &self.action {
            Some(a) => a.get(&(i, l)).copied().flatten(),
            None => self.derived_action().get(&(i, l)).copied().flatten(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (graph, extras) = parse_graph_with_extras(text, None)?;
        let n = graph.num_vertices();
        let mut coset = vec![u32::MAX; n];
        let mut idempotent = None;
        let mut action: BTreeMap<(u32, Letter), Option<u32>> = BTreeMap::new();
        let bad = |line: usize, m: &str| BoundaryError::Model { line, message: m.into() };
        for (line, l) in extras {
            let t: Vec<&str> = l.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| bad(line, &format!("bad number `{s}`")));
            match t.as_slice() {
                ["coset", v, i] => {
                    let v = num(v)?;
                    if v as usize >= n {
                        return Err(BoundaryError::BadVertex(v));
                    }
                    coset[v as usize] = num(i)?;
                }
                ["idempotent", v] => idempotent = Some(num(v)?),
                ["action", i, a, j] => {
                    let letter = graph.alphabet().letter(a)?;
                    let j = if *j == "_" || *j == "⊥" { None } else { Some(num(j)?) };
                    action.insert((num(i)?, letter), j);
                }
                _ => return Err(bad(line, &format!("unexpected line `{l}`"))),
            }
        }
        if coset.contains(&u32::MAX) {
            return Err(BoundaryError::Inconsistent("partition does not cover all vertices".into()));
        }
        let idempotent = idempotent.ok_or_else(|| bad(0, "missing `idempotent` line"))?;
        let m = RClassModel { graph, coset, idempotent, action: (!action.is_empty()).then_some(action) };
        m.validate()?;
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = self.graph.to_text();
        for (v, c) in self.coset.iter().enumerate() {
            s.push_str(&format!("coset {v} {c}\n"));
        }
        s.push_str(&format!("idempotent {}\n", self.idempotent));
        if let Some(a) = &self.action {
            for (&(i, l), j) in a {
                let j = j.map_or("_".to_string(), |j| j.to_string());
                s.push_str(&format!("action {i} {} {j}\n", self.graph.alphabet().letter_name(l)));
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverAnalysis {
    pub j: Vec<u32>,
    pub connected: bool,
    pub width: BoundaryReport,
    /// Cosets found by growing ball covers of `⋃_J H_j` until connected.
    pub enlarged: Vec<u32>,
    pub enlarged_connected: bool,
    pub enlarged_width: u32,
    /// `K = max d(v, Δ)` over the enlarged union.
    pub k: u32,
    /// `β(Δ″) ≤ κ + 2K`.
    pub coset_bound_holds: bool,
}

pub fn cover_analysis(m: &RClassModel, j: &BTreeSet<u32>) -> Result<CoverAnalysis> {
    let known = m.cosets();
    if let Some(&bad) = j.iter().find(|i| !known.contains(i)) {
        return Err(BoundaryError::UnknownCoset(bad));
    }
    let g = &m.graph;
    if !g.is_connected(&g.all_vertices()) {
        return Err(BoundaryError::Disconnected);
    }
    let delta = m.union(j);
    let width = boundary_width(g, &delta);
    let kappa = width.width;
    let mut radius = kappa;
    let (enlarged, union) = loop {
        let cover = ball_cover(g, &delta, radius);
        let mut jj: BTreeSet<u32> = j.clone();
        jj.extend(cover.iter().map(|&v| m.coset[v as usize]));
        let union = m.union(&jj);
        if g.is_connected(&union) {
            break (jj, union);
        }
        radius += 1;
    };
    let dist_to_delta = distances_to_set(g, &delta);
    let k = union.iter().map(|&v| dist_to_delta[v as usize]).max().unwrap_or(0);
    let enlarged_width = boundary_width(g, &union).width;
    Ok(CoverAnalysis {
        j: j.iter().copied().collect(),
        connected: g.is_connected(&delta),
        width,
        enlarged: enlarged.into_iter().collect(),
        enlarged_connected: true,
        enlarged_width,
        k,
        coset_bound_holds: enlarged_width <= kappa + 2 * k,
    })
}

fn distances_to_set(g: &LabeledDigraph, s: &BTreeSet<Vertex>) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.num_vertices()];
    let mut queue: VecDeque<Vertex> = s.iter().copied().collect();
    for &v in s {
        dist[v as usize] = 0;
    }
    while let Some(v) = queue.pop_front() {
        for (_, t) in g.neighbours(v) {
            if dist[t as usize] == u32::MAX {
                dist[t as usize] = dist[v as usize] + 1;
                queue.push_back(t);
            }
        }
    }
    dist
}

const LOOP_CAP: usize = 200_000;

/// Whether the loops `p q p⁻¹` with `|q| ≤ k` generate `π₁(g, base)`.
///
/// `π₁` is free on the chords of a BFS spanning tree; each loop becomes a
/// chord word, and the flower of those words is folded. The subgroup is
/// everything iff the fold is a single vertex carrying every chord.
pub fn lk_generates_pi1(g: &LabeledDigraph, base: Vertex, k: u32) -> Result<bool> {
    let n = g.num_vertices();
    if base as usize >= n {
        return Err(BoundaryError::BadVertex(base));
    }
    if !g.is_connected(&g.all_vertices()) {
        return Err(BoundaryError::Disconnected);
    }
    let edges = g.edges();
    // incidence: (edge id, forward?, other end)
    let mut inc: Vec<Vec<(usize, bool, Vertex)>> = vec![Vec::new(); n];
    for (e, &(s, _, d)) in edges.iter().enumerate() {
        inc[s as usize].push((e, true, d));
        inc[d as usize].push((e, false, s));
    }
    let mut tree = vec![false; edges.len()];
    let mut seen = vec![false; n];
    seen[base as usize] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &(e, _, t) in &inc[v as usize] {
            if !seen[t as usize] {
                seen[t as usize] = true;
                tree[e] = true;
                queue.push_back(t);
            }
        }
    }
    let chord_id: Vec<Option<u32>> = {
        let mut next = 0;
        tree.iter()
            .map(|&t| {
                (!t).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let rank = chord_id.iter().flatten().count();
    if rank == 0 {
        return Ok(true);
    }
    let mut words: BTreeSet<Vec<Letter>> = BTreeSet::new();
    for v in 0..n as Vertex {
        let mut stack: Vec<(Vertex, Option<usize>, Vec<Letter>, u32)> = vec![(v, None, Vec::new(), 0)];
        while let Some((x, last, w, len)) = stack.pop() {
            if len > 0 && x == v && !w.is_empty() {
                words.insert(w.clone());
                if words.len() > LOOP_CAP {
                    return Err(BoundaryError::TooManyLoops(LOOP_CAP));
                }
            }
            if len == k {
                continue;
            }
            for &(e, fwd, t) in &inc[x as usize] {
                if Some(e) == last {
                    continue;
                }
                let mut w2 = w.clone();
                if let Some(c) = chord_id[e] {
                    w2.push(Letter::new(c, !fwd));
                }
                stack.push((t, Some(e), w2, len + 1));
            }
        }
    }
    let mut f = Folder::new();
    let root = f.add_vertex();
    for w in &words {
        let mut cur = root;
        for (i, &l) in w.iter().enumerate() {
            let next = if i + 1 == w.len() { root } else { f.add_vertex() };
            f.add_letter(cur, l, next);
            cur = next;
        }
    }
    let names: Vec<String> = (0..rank).map(|c| format!("c{c}")).collect();
    let (folded, _) = f.to_graph(Arc::new(InvolutiveAlphabet::new(&names)?), Some(root));
    let r = folded.root().unwrap_or(0);
    Ok(folded.num_vertices() == 1 && (0..rank as u32).all(|c| folded.has_edge(r, c, r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QiParams {
    pub lambda: f64,
    pub epsilon: f64,
    pub mu: f64,
}

impl QiParams {
    pub fn new(lambda: f64, epsilon: f64, mu: f64) -> Self {
        assert!(lambda >= 1.0 && epsilon >= 0.0 && mu >= 0.0, "quasi-isometry constants out of range");
        QiParams { lambda, epsilon, mu }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QiReport {
    pub pairs_checked: usize,
    /// `(x, y, d(x,y), d′(f x, f y))` violating either inequality.
    pub failures: Vec<(Vertex, Vertex, u32, u32)>,
    /// Target vertices farther than `μ` from the image.
    pub density_failures: Vec<Vertex>,
}

impl QiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.density_failures.is_empty()
    }
}

/// Checks the quasi-isometry inequalities on all pairs of sampled points
/// and `μ`-density of the image over `region` (all of `g2` if `None`).
pub fn qi_check(
    g1: &LabeledDigraph,
    g2: &LabeledDigraph,
    map: &[(Vertex, Vertex)],
    params: QiParams,
    region: Option<&BTreeSet<Vertex>>,
) -> QiReport {
    let mut rep = QiReport { pairs_checked: 0, failures: Vec::new(), density_failures: Vec::new() };
    for (i, &(x, fx)) in map.iter().enumerate() {
        let d1 = g1.distances_from(x);
        let d2 = g2.distances_from(fx);
        for &(y, fy) in &map[i..] {
            let (a, b) = (d1[y as usize], d2[fy as usize]);
            if a == u32::MAX || b == u32::MAX {
                continue;
            }
            rep.pairs_checked += 1;
            let (af, bf) = (a as f64, b as f64);
            if af / params.lambda - params.epsilon > bf || bf > params.lambda * af + params.epsilon {
                rep.failures.push((x, y, a, b));
            }
        }
    }
    let image: BTreeSet<Vertex> = map.iter().map(|&(_, f)| f).collect();
    let near = distances_to_set(g2, &image);
    let all = g2.all_vertices();
    for &v in region.unwrap_or(&all) {
        if near[v as usize] as f64 > params.mu {
            rep.density_failures.push(v);
        }
    }
    rep
}

#[derive(Clone, Debug, Serialize)]
pub struct QiR1Report {
    pub lambda: u32,
    pub stabilized: bool,
    pub vertices: usize,
    pub interior: usize,
    pub pairs_checked: usize,
    /// `(x, y, d_Γ, d_Δ)` with `d_Γ > λ·d_Δ`.
    pub upper_failures: Vec<(Vertex, Vertex, u32, u32)>,
    /// `(x, y, d_Γ, d_Δ)` with `d_Δ > 2·d_Γ`.
    pub lower_failures: Vec<(Vertex, Vertex, u32, u32)>,
}

impl QiR1Report {
    pub fn passed(&self) -> bool {
        self.upper_failures.is_empty() && self.lower_failures.is_empty()
    }
}

/// Compares the metric of the Stephen approximation of `SΓ(1)` with the
/// prefix-generator Cayley metric on the same vertices (right units are
/// identified by where they are read from the root).
pub fn qi_r1_check(p: &Presentation, rounds: usize, radius: u32, vertex_cap: usize) -> Result<QiR1Report> {
    let approx = approximate(p, &[], Budget::new(rounds, vertex_cap))?;
    let g = &approx.graph;
    let root = approx.root();
    let gens = prefix_generators(p)?;
    let lambda = p.max_relator_len() as u32;
    let n = g.num_vertices();
    let names: Vec<String> = (0..gens.words.len()).map(|i| format!("x{i}")).collect();
    let mut delta = LabeledDigraph::with_vertices(Arc::new(InvolutiveAlphabet::new(&names)?), n);
    for v in 0..n as Vertex {
        for (i, w) in gens.words.iter().enumerate() {
            if let Some(t) = g.read_end(v, w) {
                if !delta.has_edge(v, i as u32, t) {
                    delta.add_edge(v, i as u32, t);
                }
            }
        }
    }
    let from_root = g.distances_from(root);
    let interior: Vec<Vertex> = (0..n as Vertex).filter(|&v| from_root[v as usize] <= radius).collect();
    let mut rep = QiR1Report {
        lambda,
        stabilized: approx.stabilized,
        vertices: n,
        interior: interior.len(),
        pairs_checked: 0,
        upper_failures: Vec::new(),
        lower_failures: Vec::new(),
    };
    for (i, &x) in interior.iter().enumerate() {
        let dg = g.distances_from(x);
        let dd = delta.distances_from(x);
        for &y in &interior[i..] {
            let (a, b) = (dg[y as usize], dd[y as usize]);
            rep.pairs_checked += 1;
            if a > lambda.saturating_mul(b) {
                rep.upper_failures.push((x, y, a, b));
            }
            if b > 2u32.saturating_mul(a) {
                rep.lower_failures.push((x, y, a, b));
            }
        }
    }
    Ok(rep)
}

/// Ball of radius `r` in the right Cayley graph of `(Z/2) ∗ {x}*` on
/// generators `a` (order two) and `x`, with the `Z/2` factor.
pub fn z2_free_x_ball(r: u32) -> (LabeledDigraph, BTreeSet<Vertex>) {
    // normal forms: words over {a, x} without `aa`
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    let mut i = 0;
    while i < words.len() {
        let w = words[i].clone();
        i += 1;
        if w.len() as u32 == r {
            continue;
        }
        for c in [0u8, 1] {
            if c == 0 && w.last() == Some(&0) {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(c);
            words.push(w2);
        }
    }
    let index: BTreeMap<Vec<u8>, Vertex> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as Vertex)).collect();
    let alphabet = Arc::new(InvolutiveAlphabet::new(&["a", "x"]).expect("alphabet"));
    let mut g = LabeledDigraph::with_vertices(alphabet, words.len());
    g.set_root(Some(0));
    for (v, w) in words.iter().enumerate() {
        for c in [0u8, 1] {
            let mut t = w.clone();
            if c == 0 && t.last() == Some(&0) {
                t.pop();
            } else {
                t.push(c);
            }
            if let Some(&d) = index.get(&t) {
                g.add_edge(v as Vertex, c as u32, d);
            }
        }
    }
    let factor = words.iter().enumerate().filter(|(_, w)| w.iter().all(|&c| c == 0)).map(|(v, _)| v as Vertex).collect();
    (g, factor)
}

/// Cayley-graph model of a finite group given by permutations (composed
/// left to right), cosets `H g` of the subgroup generated by `h_gens`.
pub fn group_coset_model(names: &[&str], perms: &[Vec<usize>], h_gens: &[Vec<usize>]) -> RClassModel {
    let deg = perms[0].len();
    let id: Vec<usize> = (0..deg).collect();
    let compose = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().map(|&i| y[i]).collect() };
    let closure = |gens: &[Vec<usize>]| -> Vec<Vec<usize>> {
        let mut els = vec![id.clone()];
        let mut i = 0;
        while i < els.len() {
            for g in gens {
                let y = compose(&els[i], g);
                if !els.contains(&y) {
                    els.push(y);
                }
            }
            i += 1;
        }
        els
    };
    let els = closure(perms);
    let h = closure(h_gens);
    let alphabet = Arc::new(InvolutiveAlphabet::new(names).expect("alphabet"));
    let mut g = LabeledDigraph::with_vertices(alphabet, els.len());
    g.set_root(Some(0));
    for (v, x) in els.iter().enumerate() {
        for (l, p) in perms.iter().enumerate() {
            let t = els.iter().position(|e| *e == compose(x, p)).expect("closed");
            g.add_edge(v as Vertex, l as u32, t as Vertex);
        }
    }
    // coset of x is H x; number cosets in order of first appearance
    let mut reps: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    let mut coset = Vec::new();
    for x in &els {
        let hx: BTreeSet<Vec<usize>> = h.iter().map(|y| compose(y, x)).collect();
        let idx = match reps.iter().position(|r| *r == hx) {
            Some(i) => i,
            None => {
                reps.push(hx);
                reps.len() - 1
            }
        };
        coset.push(idx as u32 + 1);
    }
    RClassModel::new(g, coset, 0).expect("coset model")
}

/// `Z/n ⊇ ⟨d⟩` (needs `d | n`).
pub fn cyclic_model(n: usize, d: usize) -> RClassModel {
    let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let hgen: Vec<usize> = (0..n).map(|i| (i + d) % n).collect();
    group_coset_model(&["a"], &[shift], &[hgen])
}

/// `S₃ ⊇ ⟨(1 2)⟩` on generators `s = (1 2)`, `t = (1 2 3)`.
pub fn s3_model() -> RClassModel {
    group_coset_model(&["s", "t"], &[vec![1, 0, 2], vec![1, 2, 0]], &[vec![1, 0, 2]])
}

/// `A₄ ⊇ ⟨(0 1 2)⟩` on generators `s = (0 1)(2 3)`, `t = (0 1 2)`.
pub fn a4_model() -> RClassModel {
    group_coset_model(&["s", "t"], &[vec![1, 0, 3, 2], vec![1, 2, 0, 3]], &[vec![1, 2, 0, 3]])
}

/// The `R`-class of the rank-two idempotent `1_{0,1}` in the symmetric
/// inverse monoid on three points: partial bijections with domain `{0,1}`.
/// Generators: `s = (0 1)`, `t = (0 1 2)`, `c` = identity on `{0,1}`.
/// Cosets are the `H`-classes, i.e. the images.
pub fn i3_rank2_model() -> RClassModel {
    // element = (image of 0, image of 1)
    let mut els: Vec<[usize; 2]> = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                els.push([a, b]);
            }
        }
    }
    els.sort_by_key(|e| (e != &[0, 1], *e));
    // generators as partial maps on {0,1,2}
    let gens: [[Option<usize>; 3]; 3] = [
        [Some(1), Some(0), Some(2)],
        [Some(1), Some(2), Some(0)],
        [Some(0), Some(1), None],
    ];
    let alphabet = Arc::new(InvolutiveAlphabet::new(&["s", "t", "c"]).expect("alphabet"));
    let mut g = LabeledDigraph::with_vertices(alphabet, els.len());
    g.set_root(Some(0));
    for (v, e) in els.iter().enumerate() {
        for (l, p) in gens.iter().enumerate() {
            if let (Some(x), Some(y)) = (p[e[0]], p[e[1]]) {
                let t = els.iter().position(|f| *f == [x, y]).expect("rank two");
                g.add_edge(v as Vertex, l as u32, t as Vertex);
            }
        }
    }
    let mut images: Vec<BTreeSet<usize>> = Vec::new();
    let mut coset = Vec::new();
    for e in &els {
        let im: BTreeSet<usize> = e.iter().copied().collect();
        let idx = images.iter().position(|x| *x == im).unwrap_or_else(|| {
            images.push(im);
            images.len() - 1
        });
        coset.push(idx as u32 + 1);
    }
    RClassModel::new(g, coset, 0).expect("I3 model")
}
