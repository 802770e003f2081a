//! Edge-labelled digraphs with an inverse-closed traversal view.
//!
//! Edges carry positive generator labels only; reading `x'` at `v` means
//! following an `x`-edge backwards into `v`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::words::{InvolutiveAlphabet, Letter, WordError};

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("vertex {0} out of range")]
    BadVertex(Vertex),
    #[error("graph has no root")]
    MissingRoot,
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Clone, Debug)]
pub struct LabeledDigraph {
    alphabet: Arc<InvolutiveAlphabet>,
    out: Vec<Vec<(u32, Vertex)>>,
    inc: Vec<Vec<(u32, Vertex)>>,
    root: Option<Vertex>,
    num_edges: usize,
}

impl LabeledDigraph {
    pub fn new(alphabet: Arc<InvolutiveAlphabet>) -> Self {
        LabeledDigraph { alphabet, out: Vec::new(), inc: Vec::new(), root: None, num_edges: 0 }
    }

    pub fn with_vertices(alphabet: Arc<InvolutiveAlphabet>, n: usize) -> Self {
        let mut g = LabeledDigraph::new(alphabet);
        g.out = vec![Vec::new(); n];
        g.inc = vec![Vec::new(); n];
        g
    }

    pub fn alphabet(&self) -> &Arc<InvolutiveAlphabet> {
        &self.alphabet
    }
    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }
    pub fn root(&self) -> Option<Vertex> {
        self.root
    }
    pub fn set_root(&mut self, r: Option<Vertex>) {
        self.root = r;
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        (self.out.len() - 1) as Vertex
    }

    /// Adds `src -label-> dst`; parallel duplicates are kept (fold removes them).
    pub fn add_edge(&mut self, src: Vertex, label: u32, dst: Vertex) {
        self.out[src as usize].push((label, dst));
        self.inc[dst as usize].push((label, src));
        self.num_edges += 1;
    }

    pub fn has_edge(&self, src: Vertex, label: u32, dst: Vertex) -> bool {
        self.out[src as usize].contains(&(label, dst))
    }

    pub fn remove_edges_with_label(&mut self, pred: impl Fn(u32) -> bool) {
        for list in self.out.iter_mut().chain(self.inc.iter_mut()) {
            list.retain(|&(l, _)| !pred(l));
        }
        self.num_edges = self.out.iter().map(Vec::len).sum();
    }

    pub fn out_edges(&self, v: Vertex) -> &[(u32, Vertex)] {
        &self.out[v as usize]
    }
    pub fn in_edges(&self, v: Vertex) -> &[(u32, Vertex)] {
        &self.inc[v as usize]
    }

    /// All edges as `(src, label, dst)`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, u32, Vertex)> {
        let mut e: Vec<_> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(s, l)| l.iter().map(move |&(g, d)| (s as Vertex, g, d)))
            .collect();
        e.sort_unstable();
        e
    }

    /// One step along a signed letter (first matching edge).
    pub fn step(&self, v: Vertex, l: Letter) -> Option<Vertex> {
        let list = if l.is_inverse() { &self.inc[v as usize] } else { &self.out[v as usize] };
        list.iter().find(|(g, _)| *g == l.generator()).map(|&(_, t)| t)
    }

    /// Vertex path traced by `w` from `v`, if readable.
    pub fn read(&self, v: Vertex, w: &[Letter]) -> Option<Vec<Vertex>> {
        let mut path = Vec::with_capacity(w.len() + 1);
        path.push(v);
        let mut cur = v;
        for &l in w {
            cur = self.step(cur, l)?;
            path.push(cur);
        }
        Some(path)
    }

    pub fn read_end(&self, v: Vertex, w: &[Letter]) -> Option<Vertex> {
        w.iter().try_fold(v, |cur, &l| self.step(cur, l))
    }

    /// Neighbours in the undirected view, with the signed letter that leads there.
    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = (Letter, Vertex)> + '_ {
        self.out[v as usize]
            .iter()
            .map(|&(g, t)| (Letter::pos(g), t))
            .chain(self.inc[v as usize].iter().map(|&(g, s)| (Letter::neg(g), s)))
    }

    /// First determinism or co-determinism violation: `(vertex, letter)`.
    pub fn bideterminism_violation(&self, v: Vertex) -> Option<Letter> {
        for (list, inverse) in [(&self.out[v as usize], false), (&self.inc[v as usize], true)] {
            for (i, &(g, _)) in list.iter().enumerate() {
                if list[..i].iter().any(|&(h, _)| h == g) {
                    return Some(Letter::new(g, inverse));
                }
            }
        }
        None
    }

    pub fn is_bideterministic(&self) -> bool {
        (0..self.num_vertices() as Vertex).all(|v| self.bideterminism_violation(v).is_none())
    }

    /// Undirected BFS distances from `src` (`u32::MAX` = unreachable).
    pub fn distances_from(&self, src: Vertex) -> Vec<u32> {
        self.distances_within(src, None, u32::MAX)
    }

    /// BFS distances restricted to `allowed` vertices and `limit` steps.
    pub fn distances_within(&self, src: Vertex, allowed: Option<&[bool]>, limit: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.num_vertices()];
        dist[src as usize] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            if d >= limit {
                continue;
            }
            for (_, t) in self.neighbours(v) {
                if dist[t as usize] == u32::MAX && allowed.is_none_or(|a| a[t as usize]) {
                    dist[t as usize] = d + 1;
                    queue.push_back(t);
                }
            }
        }
        dist
    }

    pub fn undirected_distance(&self, x: Vertex, y: Vertex) -> Option<u32> {
        let d = self.distances_from(x)[y as usize];
        (d != u32::MAX).then_some(d)
    }

    /// Shortest path (as signed-letter word) from `x` to `y`, deterministic
    /// tie-breaking by edge order.
    pub fn shortest_word(&self, x: Vertex, y: Vertex) -> Option<Vec<Letter>> {
        let n = self.num_vertices();
        let mut parent: Vec<Option<(Vertex, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[x as usize] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            if v == y {
                break;
            }
            for (l, t) in self.sorted_neighbours(v) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((v, l));
                    queue.push_back(t);
                }
            }
        }
        if !seen[y as usize] {
            return None;
        }
        let mut w = Vec::new();
        let mut cur = y;
        while let Some((p, l)) = parent[cur as usize] {
            w.push(l);
            cur = p;
        }
        w.reverse();
        Some(w)
    }

    /// Neighbours sorted by (letter, target) for reproducible traversals.
    pub fn sorted_neighbours(&self, v: Vertex) -> Vec<(Letter, Vertex)> {
        let mut n: Vec<_> = self.neighbours(v).collect();
        n.sort_unstable();
        n
    }

    pub fn ball(&self, center: Vertex, r: u32) -> Ball {
        let dist = self.distances_within(center, None, r);
        let members = (0..self.num_vertices() as Vertex).filter(|&v| dist[v as usize] <= r).collect();
        Ball { center, radius: r, members }
    }

    /// Keeps exactly the edges with both endpoints in `s`; vertices renumbered
    /// in increasing order of their old ids. Returns the old ids.
    pub fn induced_subgraph(&self, s: &BTreeSet<Vertex>) -> (LabeledDigraph, Vec<Vertex>) {
        let old: Vec<Vertex> = s.iter().copied().collect();
        let mut new_id = vec![u32::MAX; self.num_vertices()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v as usize] = i as Vertex;
        }
        let mut g = LabeledDigraph::with_vertices(self.alphabet.clone(), old.len());
        for &v in &old {
            for &(l, t) in &self.out[v as usize] {
                if new_id[t as usize] != u32::MAX {
                    g.add_edge(new_id[v as usize], l, new_id[t as usize]);
                }
            }
        }
        g.root = self.root.and_then(|r| (new_id[r as usize] != u32::MAX).then(|| new_id[r as usize]));
        (g, old)
    }

    /// Connectivity of the undirected subgraph induced by `s` (∅ is connected).
    pub fn is_connected(&self, s: &BTreeSet<Vertex>) -> bool {
        let Some(&first) = s.iter().next() else { return true };
        let mut allowed = vec![false; self.num_vertices()];
        for &v in s {
            allowed[v as usize] = true;
        }
        let dist = self.distances_within(first, Some(&allowed), u32::MAX);
        s.iter().all(|&v| dist[v as usize] != u32::MAX)
    }

    pub fn all_vertices(&self) -> BTreeSet<Vertex> {
        (0..self.num_vertices() as Vertex).collect()
    }

    /// DOT rendering with deterministic ordering; the root is a double circle.
    pub fn export_dot(&self, opts: &DotOptions) -> String {
        let mut s = String::from("digraph {\n");
        if let Some(r) = self.root {
            let _ = writeln!(s, "  {r} [shape={}];", opts.root_shape);
        }
        for (v, label) in &opts.vertex_labels {
            let _ = writeln!(s, "  {v} [xlabel=\"{label}\"];");
        }
        for (src, g, dst) in self.edges() {
            let _ = writeln!(s, "  {src} -> {dst} [label=\"{}\"];", self.alphabet.name(g));
        }
        s.push_str("}\n");
        s
    }

    /// Graph file: `vertices N [root R]` then `src label dst` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}", self.num_vertices());
        if let Some(r) = self.root {
            let _ = write!(s, " root {r}");
        }
        s.push('\n');
        for (src, g, dst) in self.edges() {
            let _ = writeln!(s, "{src} {} {dst}", self.alphabet.name(g));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct DotOptions {
    pub root_shape: String,
    pub vertex_labels: Vec<(Vertex, String)>,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions { root_shape: "doublecircle".into(), vertex_labels: Vec::new() }
    }
}

pub fn export_dot(g: &LabeledDigraph, opts: &DotOptions) -> String {
    g.export_dot(opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Vertex,
    pub radius: u32,
    pub members: BTreeSet<Vertex>,
}

/// Parses the graph file format. Labels become generators in order of first
/// appearance unless an alphabet is supplied. `#` starts a comment line.
/// Extra lines the caller understands (e.g. `coset`) are returned untouched.
pub fn parse_graph_with_extras(
    text: &str,
    alphabet: Option<Arc<InvolutiveAlphabet>>,
) -> Result<(LabeledDigraph, Vec<(usize, String)>), GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(GraphError::Syntax { line: 1, message: "empty graph file".into() })?;
    let syntax = |line: usize, m: &str| GraphError::Syntax { line, message: m.to_string() };
    let toks: Vec<&str> = header.split_whitespace().collect();
    let n: usize = match toks.as_slice() {
        ["vertices", n, ..] => n.parse().map_err(|_| syntax(hline, "bad vertex count"))?,
        _ => return Err(syntax(hline, "expected `vertices N [root R]`")),
    };
    let root = match toks.get(2..) {
        Some(["root", r]) => Some(r.parse::<Vertex>().map_err(|_| syntax(hline, "bad root"))?),
        Some([]) | None => None,
        _ => return Err(syntax(hline, "expected `vertices N [root R]`")),
    };
    let mut edges = Vec::new();
    let mut extras = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (line, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        match t.as_slice() {
            [s, label, d] if s.parse::<Vertex>().is_ok() => {
                let s: Vertex = s.parse().unwrap();
                let d: Vertex = d.parse().map_err(|_| syntax(line, "bad target vertex"))?;
                if s as usize >= n || d as usize >= n {
                    return Err(syntax(line, "edge endpoint out of range"));
                }
                if !names.iter().any(|x| x == label) {
                    names.push(label.to_string());
                }
                edges.push((s, label.to_string(), d));
            }
            _ => extras.push((line, l.to_string())),
        }
    }
    let alphabet = match alphabet {
        Some(a) => a,
        None => Arc::new(InvolutiveAlphabet::new(&names)?),
    };
    let mut g = LabeledDigraph::with_vertices(alphabet.clone(), n);
    for (s, label, d) in edges {
        let l = alphabet.letter(&label)?;
        g.add_edge(s, l.generator(), d);
    }
    if let Some(r) = root {
        if r as usize >= n {
            return Err(GraphError::BadVertex(r));
        }
    }
    g.root = root;
    Ok((g, extras))
}

pub fn parse_graph(text: &str) -> Result<LabeledDigraph, GraphError> {
    let (g, extras) = parse_graph_with_extras(text, None)?;
    if let Some((line, l)) = extras.first() {
        return Err(GraphError::Syntax { line: *line, message: format!("unexpected line `{l}`") });
    }
    Ok(g)
}

/// Subset file: one vertex id per line.
pub fn parse_subset(text: &str) -> Result<BTreeSet<Vertex>, GraphError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'))
        .map(|(i, l)| {
            l.trim()
                .parse::<Vertex>()
                .map_err(|_| GraphError::Syntax { line: i + 1, message: format!("bad vertex `{}`", l.trim()) })
        })
        .collect()
}

/// Incremental folding engine: union-find over vertices plus per-vertex
/// adjacency; conflicting edges are queued and merged by `process`.
#[derive(Clone, Debug, Default)]
pub struct Folder {
    parent: Vec<Vertex>,
    size: Vec<u32>,
    out: Vec<Vec<(u32, Vertex)>>,
    inc: Vec<Vec<(u32, Vertex)>>,
    pending: Vec<(Vertex, Vertex)>,
    live: usize,
    /// Bumped on every structural change (new edge or merge).
    pub changes: u64,
}

impl Folder {
    pub fn new() -> Self {
        Folder::default()
    }

    pub fn live_vertices(&self) -> usize {
        self.live
    }
    pub fn capacity(&self) -> usize {
        self.parent.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        let v = self.parent.len() as Vertex;
        self.parent.push(v);
        self.size.push(1);
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.live += 1;
        v
    }

    pub fn find(&mut self, mut v: Vertex) -> Vertex {
        let mut root = v;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[v as usize] != root {
            let next = self.parent[v as usize];
            self.parent[v as usize] = root;
            v = next;
        }
        root
    }

    pub fn is_rep(&self, v: Vertex) -> bool {
        self.parent[v as usize] == v
    }

    fn lookup(&mut self, list_owner: Vertex, label: u32, inverse: bool) -> Option<Vertex> {
        let list = if inverse { &self.inc[list_owner as usize] } else { &self.out[list_owner as usize] };
        let t = list.iter().find(|(g, _)| *g == label).map(|&(_, t)| t)?;
        Some(self.find(t))
    }

    /// Step from a representative along a signed letter.
    pub fn step(&mut self, v: Vertex, l: Letter) -> Option<Vertex> {
        let v = self.find(v);
        self.lookup(v, l.generator(), l.is_inverse())
    }

    pub fn add_edge(&mut self, s: Vertex, label: u32, d: Vertex) {
        let s = self.find(s);
        let d = self.find(d);
        if let Some(t) = self.lookup(s, label, false) {
            if t != d {
                self.pending.push((t, d));
            }
            return;
        }
        if let Some(t) = self.lookup(d, label, true) {
            if t != s {
                self.pending.push((t, s));
            }
            return;
        }
        self.out[s as usize].push((label, d));
        self.inc[d as usize].push((label, s));
        self.changes += 1;
    }

    /// Adds a signed-letter step `s -l-> d`.
    pub fn add_letter(&mut self, s: Vertex, l: Letter, d: Vertex) {
        if l.is_inverse() {
            self.add_edge(d, l.generator(), s)
        } else {
            self.add_edge(s, l.generator(), d)
        }
    }

    pub fn merge(&mut self, a: Vertex, b: Vertex) {
        self.pending.push((a, b));
    }

    /// Runs merges until the graph is bi-deterministic.
    pub fn process(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (big, small) = if self.size[a as usize] >= self.size[b as usize] { (a, b) } else { (b, a) };
            self.parent[small as usize] = big;
            self.size[big as usize] += self.size[small as usize];
            self.live -= 1;
            self.changes += 1;
            for inverse in [false, true] {
                let moved = if inverse {
                    std::mem::take(&mut self.inc[small as usize])
                } else {
                    std::mem::take(&mut self.out[small as usize])
                };
                for (g, t) in moved {
                    let t = self.find(t);
                    match self.lookup(big, g, inverse) {
                        Some(t2) if t2 != t => self.pending.push((t, t2)),
                        Some(_) => {}
                        None => {
                            if inverse {
                                self.inc[big as usize].push((g, t));
                            } else {
                                self.out[big as usize].push((g, t));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Current representatives in increasing id order.
    pub fn reps(&self) -> Vec<Vertex> {
        (0..self.parent.len() as Vertex).filter(|&v| self.is_rep(v)).collect()
    }

    /// Freezes into a graph numbered by BFS from `root` (then by old id),
    /// returning the map old vertex → new vertex.
    pub fn to_graph(&mut self, alphabet: Arc<InvolutiveAlphabet>, root: Option<Vertex>) -> (LabeledDigraph, Vec<Vertex>) {
        self.process();
        let n = self.parent.len();
        let mut new_id = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(self.live);
        let mut queue = VecDeque::new();
        let reps = self.reps();
        let starts: Vec<Vertex> = root.map(|r| self.find(r)).into_iter().chain(reps.iter().copied()).collect();
        for s in starts {
            if new_id[s as usize] != u32::MAX {
                continue;
            }
            new_id[s as usize] = order.len() as Vertex;
            order.push(s);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let mut nb: Vec<(Letter, Vertex)> = Vec::new();
                for i in 0..self.out[v as usize].len() {
                    let (g, t) = self.out[v as usize][i];
                    nb.push((Letter::pos(g), self.find(t)));
                }
                for i in 0..self.inc[v as usize].len() {
                    let (g, t) = self.inc[v as usize][i];
                    nb.push((Letter::neg(g), self.find(t)));
                }
                nb.sort_unstable();
                for (_, t) in nb {
                    if new_id[t as usize] == u32::MAX {
                        new_id[t as usize] = order.len() as Vertex;
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut g = LabeledDigraph::with_vertices(alphabet, order.len());
        for &v in &order {
            let mut list: Vec<(u32, Vertex)> = Vec::new();
            for i in 0..self.out[v as usize].len() {
                let (l, t) = self.out[v as usize][i];
                list.push((l, new_id[self.find(t) as usize]));
            }
            list.sort_unstable();
            list.dedup();
            for (l, t) in list {
                g.add_edge(new_id[v as usize], l, t);
            }
        }
        let map = (0..n as Vertex).map(|v| new_id[self.find(v) as usize]).collect();
        g.root = root.map(|r| new_id[self.find(r) as usize]);
        (g, map)
    }
}

/// Bi-determinises `g`; returns the folded graph and the merge map.
pub fn fold(g: &LabeledDigraph) -> (LabeledDigraph, Vec<Vertex>) {
    let order: Vec<_> = g.edges();
    fold_in_order(g, &order)
}

/// Folds with edges inserted in the given order (used to test confluence).
pub fn fold_in_order(g: &LabeledDigraph, order: &[(Vertex, u32, Vertex)]) -> (LabeledDigraph, Vec<Vertex>) {
    let mut f = Folder::new();
    for _ in 0..g.num_vertices() {
        f.add_vertex();
    }
    for &(s, l, d) in order {
        f.add_edge(s, l, d);
        f.process();
    }
    f.to_graph(g.alphabet.clone(), g.root)
}

/// Label-preserving bijection matching roots, by synchronised traversal.
pub fn rooted_isomorphic(g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<bool, GraphError> {
    let r1 = g1.root.ok_or(GraphError::MissingRoot)?;
    let r2 = g2.root.ok_or(GraphError::MissingRoot)?;
    if g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return Ok(false);
    }
    let n = g1.num_vertices();
    let mut map = vec![u32::MAX; n];
    let mut back = vec![u32::MAX; n];
    map[r1 as usize] = r2;
    back[r2 as usize] = r1;
    let mut queue = VecDeque::from([r1]);
    let mut seen = 1;
    while let Some(v) = queue.pop_front() {
        let w = map[v as usize];
        let mut a = g1.sorted_neighbours(v);
        let mut b = g2.sorted_neighbours(w);
        if a.len() != b.len() {
            return Ok(false);
        }
        a.sort_by_key(|x| x.0);
        b.sort_by_key(|x| x.0);
        for ((l1, t1), (l2, t2)) in a.into_iter().zip(b) {
            if l1 != l2 {
                return Ok(false);
            }
            match (map[t1 as usize], back[t2 as usize]) {
                (u32::MAX, u32::MAX) => {
                    map[t1 as usize] = t2;
                    back[t2 as usize] = t1;
                    seen += 1;
                    queue.push_back(t1);
                }
                (m, b) if m == t2 && b == t1 => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(seen == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(names: &[&str]) -> Arc<InvolutiveAlphabet> {
        Arc::new(InvolutiveAlphabet::new(names).unwrap())
    }

    #[test]
    fn fold_forced_merge() {
        let mut g = LabeledDigraph::with_vertices(alpha(&["a"]), 3);
        g.set_root(Some(0));
        g.add_edge(0, 0, 1);
        g.add_edge(0, 0, 2);
        let (f, map) = fold(&g);
        assert_eq!(f.num_vertices(), 2);
        assert_eq!(map[1], map[2]);
        let (again, id) = fold(&f);
        assert!(rooted_isomorphic(&f, &again).unwrap());
        assert_eq!(id, vec![0, 1]);
    }

    #[test]
    fn fold_linear_aa_inverse() {
        // 0 -a-> 1 <-a- 2 : the linear graph of a a'
        let mut g = LabeledDigraph::with_vertices(alpha(&["a"]), 3);
        g.set_root(Some(0));
        g.add_edge(0, 0, 1);
        g.add_edge(2, 0, 1);
        let (f, _) = fold(&g);
        assert_eq!(f.num_vertices(), 2);
        assert_eq!(f.num_edges(), 1);
    }

    #[test]
    fn distances_and_balls() {
        let mut g = LabeledDigraph::with_vertices(alpha(&["a"]), 3);
        g.add_edge(0, 0, 1);
        g.add_edge(1, 0, 2);
        assert_eq!(g.undirected_distance(0, 0), Some(0));
        assert_eq!(g.undirected_distance(0, 1), Some(1));
        assert_eq!(g.undirected_distance(2, 0), Some(2));
        assert_eq!(g.ball(1, 0).members, BTreeSet::from([1]));
        assert!(g.is_connected(&g.all_vertices()));
        assert!(!g.is_connected(&BTreeSet::from([0, 2])));
        assert!(g.is_connected(&BTreeSet::new()));
        let (sub, old) = g.induced_subgraph(&BTreeSet::from([0, 1]));
        assert_eq!((sub.num_edges(), old), (1, vec![0, 1]));
    }

    #[test]
    fn isomorphism_cases() {
        let mut g = LabeledDigraph::with_vertices(alpha(&["a", "b"]), 2);
        g.set_root(Some(0));
        g.add_edge(0, 0, 1);
        assert!(rooted_isomorphic(&g, &g).unwrap());
        let mut h = g.clone();
        h.add_vertex();
        assert!(!rooted_isomorphic(&g, &h).unwrap());
        let mut k = LabeledDigraph::with_vertices(alpha(&["a", "b"]), 2);
        k.set_root(Some(0));
        k.add_edge(0, 1, 1);
        assert!(!rooted_isomorphic(&g, &k).unwrap());
        k.set_root(None);
        assert!(rooted_isomorphic(&g, &k).is_err());
    }

    #[test]
    fn dot_output() {
        let g = LabeledDigraph::new(alpha(&["a"]));
        let d = g.export_dot(&DotOptions::default());
        assert!(d.starts_with("digraph {") && d.trim_end().ends_with('}'));
        let mut g = LabeledDigraph::with_vertices(alpha(&["a"]), 2);
        g.add_edge(0, 0, 1);
        g.set_root(Some(0));
        let d = g.export_dot(&DotOptions::default());
        assert!(d.contains("0 -> 1 [label=\"a\"]"));
        assert!(d.contains("0 [shape=doublecircle]"));
    }

    #[test]
    fn graph_file_round_trip() {
        let text = "vertices 3 root 0\n0 a 1\n1 b 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.to_text(), text);
        assert!(parse_graph("vertices 2\n0 a 5\n").is_err());
        assert_eq!(parse_subset("1\n2\n").unwrap(), BTreeSet::from([1, 2]));
    }
}
