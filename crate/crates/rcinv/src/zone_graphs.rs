//! The zone model `Ω` of the Schützenberger graph of `M_{S,T}`, and the
//! surgery turning the Cayley graph of `Q` into a `Σ`-labelled graph `Γ′`.
//!
//! Both are infinite; everything here works on balls around the root.
//! Zones are instantiated lazily and nest like a tree: every
//! (vertex, label, direction) slot that leads out of a zone gets its own
//! fresh copy of the child zone.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{build_mst, q_alphabet, ConstructionError, MstInput, MstProvenance};
use crate::graphs::{LabeledDigraph, Vertex};
use crate::presentations::Presentation;
use crate::words::{InvolutiveAlphabet, Letter, Word};

#[derive(Debug, Error)]
pub enum ZoneError {
    #[error("S oracle: {0}")]
    Oracle(String),
    #[error("oracle inconsistent with S: {0}")]
    Inconsistent(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("vertex {vertex} is both type-z and type-p_{index}")]
    Ambiguous { vertex: u32, index: u32 },
    #[error("vertex {vertex} is type-p_{i} and type-p_{j}")]
    AmbiguousP { vertex: u32, i: u32, j: u32 },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

type Result<T> = std::result::Result<T, ZoneError>;

/// Interns words over small alphabets as dense ids.
#[derive(Clone, Debug, Default)]
struct Interner {
    map: FxHashMap<Vec<u32>, u32>,
    items: Vec<Vec<u32>>,
}

impl Interner {
    fn intern(&mut self, w: &[u32]) -> u32 {
        if let Some(&id) = self.map.get(w) {
            return id;
        }
        let id = self.items.len() as u32;
        self.items.push(w.to_vec());
        self.map.insert(w.to_vec(), id);
        id
    }
    fn get(&self, id: u32) -> &[u32] {
        &self.items[id as usize]
    }
}

/// Finite multiplication table for `S` (must be a right cancellative monoid).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    pub names: Vec<String>,
    pub identity: u32,
    /// Image of each generator of `A`, by generator id.
    pub gens: Vec<u32>,
    /// `mul[x * n + y] = x·y`.
    pub mul: Vec<u32>,
}

impl FiniteTable {
    pub fn size(&self) -> usize {
        self.names.len()
    }
    pub fn product(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.size() + y as usize]
    }

    /// `Z/n` generated by a single letter.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| format!("e{i}")).collect();
        let mul = (0..n * n).map(|xy| ((xy / n + xy % n) % n) as u32).collect();
        FiniteTable { names, identity: 0, gens: vec![1 % n as u32], mul }
    }

    /// Parses the `@oracle finite_table` format against `S`'s alphabet.
    pub fn parse(text: &str, a: &InvolutiveAlphabet) -> Result<Self> {
        let err = |line: usize, m: &str| ZoneError::Oracle(format!("line {line}: {m}"));
        let mut names: Vec<String> = Vec::new();
        let mut identity = None;
        let mut gens = vec![None; a.len()];
        let mut entries = Vec::new();
        let mut seen_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (dir, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
            let rest = rest.trim();
            match dir {
                "@oracle" if rest == "finite_table" => seen_header = true,
                "@oracle" => return Err(err(line, "expected `@oracle finite_table`")),
                "@elements" => names = rest.split_whitespace().map(String::from).collect(),
                "@identity" => identity = Some((line, rest.to_string())),
                "@gen" | "@mul" => {
                    let (l, r) = rest.split_once('=').ok_or_else(|| err(line, "missing `=`"))?;
                    entries.push((line, dir == "@gen", l.trim().to_string(), r.trim().to_string()));
                }
                _ => return Err(err(line, "unknown directive")),
            }
        }
        if !seen_header {
            return Err(ZoneError::Oracle("missing `@oracle finite_table` header".into()));
        }
        let idx = |line: usize, s: &str| -> Result<u32> {
            names.iter().position(|n| n == s).map(|p| p as u32).ok_or_else(|| err(line, &format!("unknown element `{s}`")))
        };
        let n = names.len();
        let mut mul = vec![u32::MAX; n * n];
        for (line, is_gen, l, r) in &entries {
            let target = idx(*line, r)?;
            if *is_gen {
                let g = a.id(l).ok_or_else(|| err(*line, &format!("unknown generator `{l}`")))?;
                gens[g as usize] = Some(target);
            } else {
                let (x, y) = l.split_once(char::is_whitespace).ok_or_else(|| err(*line, "expected `@mul x y = z`"))?;
                let (x, y) = (idx(*line, x.trim())?, idx(*line, y.trim())?);
                mul[x as usize * n + y as usize] = target;
            }
        }
        let (iline, iname) = identity.ok_or_else(|| ZoneError::Oracle("missing @identity".into()))?;
        let identity = idx(iline, &iname)?;
        let gens = gens
            .into_iter()
            .enumerate()
            .map(|(g, x)| x.ok_or_else(|| ZoneError::Oracle(format!("no image for generator `{}`", a.name(g as u32)))))
            .collect::<Result<Vec<_>>>()?;
        if mul.contains(&u32::MAX) {
            return Err(ZoneError::Oracle("multiplication table is incomplete".into()));
        }
        let t = FiniteTable { names, identity, gens, mul };
        t.check()?;
        Ok(t)
    }

    pub fn to_text(&self, a: &InvolutiveAlphabet) -> String {
        let mut s = format!("@oracle finite_table\n@elements {}\n@identity {}\n", self.names.join(" "), self.names[self.identity as usize]);
        for (g, &x) in self.gens.iter().enumerate() {
            s.push_str(&format!("@gen {} = {}\n", a.name(g as u32), self.names[x as usize]));
        }
        for x in 0..self.size() as u32 {
            for y in 0..self.size() as u32 {
                let (nx, ny, nz) = (&self.names[x as usize], &self.names[y as usize], &self.names[self.product(x, y) as usize]);
                s.push_str(&format!("@mul {nx} {ny} = {nz}\n"));
            }
        }
        s
    }

    /// Associativity, identity and right cancellativity.
    pub fn check(&self) -> Result<()> {
        let n = self.size() as u32;
        for x in 0..n {
            if self.product(self.identity, x) != x || self.product(x, self.identity) != x {
                return Err(ZoneError::Oracle(format!("`{}` is not the identity", self.names[self.identity as usize])));
            }
            for y in 0..n {
                for z in 0..n {
                    if self.product(self.product(x, y), z) != self.product(x, self.product(y, z)) {
                        return Err(ZoneError::Oracle("table is not associative".into()));
                    }
                }
            }
        }
        for y in 0..n {
            let mut hit = vec![false; n as usize];
            for x in 0..n {
                let p = self.product(x, y) as usize;
                if hit[p] {
                    return Err(ZoneError::Oracle("table is not right cancellative".into()));
                }
                hit[p] = true;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SOracleKind {
    FreeMonoid,
    FiniteTable,
}

/// Exact word problem for `S` plus membership in `T = ⟨B⟩`.
/// Elements are dense ids handed out on first sight.
#[derive(Clone, Debug)]
pub struct SOracle {
    kind: SOracleKind,
    n_gens: usize,
    t_gens: Vec<bool>,
    words: Interner,
    table: Option<FiniteTable>,
    in_t_table: Vec<bool>,
}

impl SOracle {
    /// `S` must be presented by trivial relations only (`u_i ≡ v_i`).
    pub fn free_monoid(input: &MstInput) -> Result<Self> {
        for (i, r) in input.s_pres.relations.iter().enumerate() {
            if r.lhs != r.rhs {
                return Err(ZoneError::Inconsistent(format!("relation {} is not trivial, so S is not free", i + 1)));
            }
        }
        let mut o = SOracle {
            kind: SOracleKind::FreeMonoid,
            n_gens: input.s_pres.alphabet.len(),
            t_gens: Self::t_gens(input),
            words: Interner::default(),
            table: None,
            in_t_table: vec![],
        };
        o.words.intern(&[]);
        Ok(o)
    }

    pub fn finite_table(input: &MstInput, table: FiniteTable) -> Result<Self> {
        table.check()?;
        let a = &input.s_pres.alphabet;
        if table.gens.len() != a.len() {
            return Err(ZoneError::Oracle("table does not cover the generators of S".into()));
        }
        let eval = |w: &Word| w.iter().fold(table.identity, |x, l| table.product(x, table.gens[l.generator() as usize]));
        for (i, r) in input.s_pres.relations.iter().enumerate() {
            if eval(&r.lhs) != eval(&r.rhs) {
                return Err(ZoneError::Inconsistent(format!(
                    "relation {} ({} = {}) fails in the table",
                    i + 1,
                    a.format(&r.lhs),
                    a.format(&r.rhs)
                )));
            }
        }
        let t_gens = Self::t_gens(input);
        let mut in_t = vec![false; table.size()];
        let mut queue = VecDeque::from([table.identity]);
        in_t[table.identity as usize] = true;
        while let Some(x) = queue.pop_front() {
            for (g, &img) in table.gens.iter().enumerate() {
                let y = table.product(x, img);
                if t_gens[g] && !in_t[y as usize] {
                    in_t[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok(SOracle {
            kind: SOracleKind::FiniteTable,
            n_gens: a.len(),
            t_gens,
            words: Interner::default(),
            table: Some(table),
            in_t_table: in_t,
        })
    }

    /// `@oracle free_monoid` or a finite table file.
    pub fn from_text(input: &MstInput, text: &str) -> Result<Self> {
        let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
        match first {
            "@oracle free_monoid" => Self::free_monoid(input),
            "@oracle finite_table" => Self::finite_table(input, FiniteTable::parse(text, &input.s_pres.alphabet)?),
            other => Err(ZoneError::Unsupported(format!("oracle kind `{other}` (word acceptors are not supported)"))),
        }
    }

    fn t_gens(input: &MstInput) -> Vec<bool> {
        let a = &input.s_pres.alphabet;
        (0..a.len() as u32).map(|g| input.b_subset.iter().any(|b| b == a.name(g))).collect()
    }

    pub fn kind(&self) -> SOracleKind {
        self.kind
    }

    pub fn identity(&self) -> u32 {
        match &self.table {
            Some(t) => t.identity,
            None => 0,
        }
    }

    pub fn mul_gen(&mut self, s: u32, a: u32) -> u32 {
        match &self.table {
            Some(t) => t.product(s, t.gens[a as usize]),
            None => {
                let mut w = self.words.get(s).to_vec();
                w.push(a);
                self.words.intern(&w)
            }
        }
    }

    /// The unique `s′` with `s′·a = s`, if any.
    pub fn pred_gen(&mut self, s: u32, a: u32) -> Option<u32> {
        match &self.table {
            Some(t) => {
                let g = t.gens[a as usize];
                (0..t.size() as u32).find(|&x| t.product(x, g) == s)
            }
            None => {
                let w = self.words.get(s);
                if w.last() == Some(&a) {
                    let p = w[..w.len() - 1].to_vec();
                    Some(self.words.intern(&p))
                } else {
                    None
                }
            }
        }
    }

    pub fn in_t(&self, s: u32) -> bool {
        match &self.table {
            Some(_) => self.in_t_table[s as usize],
            None => self.words.get(s).iter().all(|&g| self.t_gens[g as usize]),
        }
    }

    pub fn eval(&mut self, w: &[u32]) -> u32 {
        w.iter().fold(self.identity(), |s, &a| self.mul_gen(s, a))
    }

    pub fn label(&self, s: u32, a: &InvolutiveAlphabet) -> String {
        match &self.table {
            Some(t) => t.names[s as usize].clone(),
            None => {
                let w: Word = self.words.get(s).iter().map(|&g| Letter::pos(g)).collect();
                a.format(&w)
            }
        }
    }

    pub fn generators(&self) -> usize {
        self.n_gens
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum ZoneKind {
    Root,
    P(u32),
    Z,
    /// `x⁻¹`-zone; holds the `Σ` generator id of `x`.
    Inv(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZoneVertex {
    pub kind: ZoneKind,
    pub zone: u32,
    /// Interned word over `A` in `p_i`-zones, `S`-element id in `z`-zones.
    pub coord: u32,
}

#[derive(Clone, Debug)]
struct Zone {
    kind: ZoneKind,
    /// Vertex this zone hangs off (`None` for the root zone).
    parent: Option<Vertex>,
}

#[derive(Clone, Copy)]
enum Target {
    At(u32, u32),
    Child(u32, bool),
    Parent,
}

/// Σ-generator layout of `M_{S,T}` as produced by `build_mst`.
#[derive(Clone, Debug)]
struct SigmaLayout {
    n_a: u32,
    p: Vec<u32>,
    z: u32,
    d: u32,
}

impl SigmaLayout {
    fn new(mst: &Presentation, k: usize) -> Result<Self> {
        let id = |n: &str| {
            mst.alphabet.id(n).ok_or_else(|| ZoneError::Unsupported(format!("generator `{n}` missing from M_{{S,T}}")))
        };
        Ok(SigmaLayout {
            n_a: (mst.alphabet.len() - k - 3) as u32,
            p: (0..=k).map(|i| id(&format!("p{i}"))).collect::<Result<_>>()?,
            z: id("z")?,
            d: id("d")?,
        })
    }
    /// `{z, p_0, …, p_k}`.
    fn x_labels(&self) -> Vec<u32> {
        std::iter::once(self.z).chain(self.p.iter().copied()).collect()
    }
    fn p_index(&self, g: u32) -> Option<u32> {
        self.p.iter().position(|&x| x == g).map(|i| i as u32)
    }
}

/// A ball of `Ω` around its root, with zone annotations.
#[derive(Clone, Debug)]
pub struct OmegaBall {
    pub graph: LabeledDigraph,
    pub info: Vec<ZoneVertex>,
    /// Undirected distance from the root.
    pub depth: Vec<u32>,
    pub radius: u32,
    pub mst: Presentation,
    zones: Vec<ZoneKind>,
}

struct OmegaBuilder<'a> {
    layout: SigmaLayout,
    u: Vec<Vec<u32>>,
    v: Vec<Vec<u32>>,
    oracle: &'a mut SOracle,
    words: Interner,
    zones: Vec<Zone>,
    child: FxHashMap<(Vertex, u32, bool), u32>,
    vmap: FxHashMap<(u32, u32), Vertex>,
    info: Vec<ZoneVertex>,
    depth: Vec<u32>,
    graph: LabeledDigraph,
}

impl OmegaBuilder<'_> {
    fn zone_root_coord(&mut self, kind: ZoneKind) -> u32 {
        match kind {
            ZoneKind::P(_) => self.words.intern(&[]),
            ZoneKind::Z => self.oracle.identity(),
            _ => 0,
        }
    }

    fn vertex(&mut self, zone: u32, coord: u32, create: bool) -> Option<Vertex> {
        if let Some(&v) = self.vmap.get(&(zone, coord)) {
            return Some(v);
        }
        if !create {
            return None;
        }
        let v = self.graph.add_vertex();
        self.vmap.insert((zone, coord), v);
        self.info.push(ZoneVertex { kind: self.zones[zone as usize].kind, zone, coord });
        self.depth.push(u32::MAX);
        Some(v)
    }

    fn child_zone(&mut self, v: Vertex, label: u32, incoming: bool, create: bool) -> Option<u32> {
        if let Some(&z) = self.child.get(&(v, label, incoming)) {
            return Some(z);
        }
        if !create {
            return None;
        }
        let kind = if incoming {
            ZoneKind::Inv(label)
        } else if label == self.layout.z {
            ZoneKind::Z
        } else {
            ZoneKind::P(self.layout.p_index(label).expect("x label"))
        };
        let id = self.zones.len() as u32;
        self.zones.push(Zone { kind, parent: Some(v) });
        self.child.insert((v, label, incoming), id);
        Some(id)
    }

    /// Edges at `v` as `(letter read from v, target)`.
    fn rules(&mut self, v: Vertex) -> Vec<(Letter, Target)> {
        let ZoneVertex { kind, zone, coord } = self.info[v as usize];
        let l = self.layout.clone();
        let xs = l.x_labels();
        let mut out = Vec::new();
        match kind {
            ZoneKind::Root => {
                out.extend(xs.iter().map(|&x| (Letter::pos(x), Target::Child(x, false))));
            }
            ZoneKind::P(i) => {
                let w = self.words.get(coord).to_vec();
                for a in 0..l.n_a {
                    let mut wa = w.clone();
                    wa.push(a);
                    out.push((Letter::pos(a), Target::At(zone, self.words.intern(&wa))));
                }
                if let Some(&last) = w.last() {
                    let prefix = self.words.intern(&w[..w.len() - 1]);
                    out.push((Letter::neg(last), Target::At(zone, prefix)));
                }
                out.extend(xs.iter().map(|&x| (Letter::pos(x), Target::Child(x, false))));
                let pi = l.p[i as usize];
                out.push((Letter::neg(pi), if w.is_empty() { Target::Parent } else { Target::Child(pi, true) }));
                if i == 0 {
                    out.push((Letter::pos(l.d), Target::At(zone, coord)));
                } else {
                    let (ui, vi) = (&self.u[i as usize - 1], &self.v[i as usize - 1]);
                    // W v_i --d--> W u_i
                    if w.ends_with(vi) {
                        let mut t = w[..w.len() - vi.len()].to_vec();
                        t.extend_from_slice(ui);
                        out.push((Letter::pos(l.d), Target::At(zone, self.words.intern(&t))));
                    }
                    if w.ends_with(ui) {
                        let mut t = w[..w.len() - ui.len()].to_vec();
                        t.extend_from_slice(vi);
                        out.push((Letter::neg(l.d), Target::At(zone, self.words.intern(&t))));
                    }
                }
            }
            ZoneKind::Z => {
                for a in 0..l.n_a {
                    let s = self.oracle.mul_gen(coord, a);
                    out.push((Letter::pos(a), Target::At(zone, s)));
                    if let Some(s) = self.oracle.pred_gen(coord, a) {
                        out.push((Letter::neg(a), Target::At(zone, s)));
                    }
                }
                out.extend(xs.iter().map(|&x| (Letter::pos(x), Target::Child(x, false))));
                out.extend(l.p.iter().map(|&p| (Letter::neg(p), Target::Child(p, true))));
                if coord == self.oracle.identity() {
                    out.push((Letter::neg(l.z), Target::Parent));
                } else if self.oracle.in_t(coord) {
                    out.push((Letter::neg(l.z), Target::Child(l.z, true)));
                }
                out.push((Letter::pos(l.d), Target::At(zone, coord)));
            }
            ZoneKind::Inv(x) => {
                out.push((Letter::pos(x), Target::Parent));
                out.extend(xs.iter().filter(|&&y| y != x).map(|&y| (Letter::pos(y), Target::Child(y, false))));
            }
        }
        out
    }

    fn resolve(&mut self, v: Vertex, t: Target, create: bool) -> Option<Vertex> {
        match t {
            Target::At(zone, coord) => self.vertex(zone, coord, create),
            Target::Parent => {
                let zone = self.info[v as usize].zone;
                self.zones[zone as usize].parent
            }
            Target::Child(label, incoming) => {
                let z = self.child_zone(v, label, incoming, create)?;
                let kind = self.zones[z as usize].kind;
                let coord = self.zone_root_coord(kind);
                self.vertex(z, coord, create)
            }
        }
    }
}

/// Ball of radius `radius` (undirected) around the root of `Ω`.
pub fn omega_ball(input: &MstInput, oracle: &mut SOracle, radius: u32) -> Result<OmegaBall> {
    let mst = build_mst(input)?;
    let k = input.k();
    let layout = SigmaLayout::new(&mst, k)?;
    let to_ids = |w: &Word| w.iter().map(|l| l.generator()).collect::<Vec<u32>>();
    let mut b = OmegaBuilder {
        layout,
        u: input.s_pres.relations.iter().map(|r| to_ids(&r.lhs)).collect(),
        v: input.s_pres.relations.iter().map(|r| to_ids(&r.rhs)).collect(),
        oracle,
        words: Interner::default(),
        zones: vec![Zone { kind: ZoneKind::Root, parent: None }],
        child: FxHashMap::default(),
        vmap: FxHashMap::default(),
        info: Vec::new(),
        depth: Vec::new(),
        graph: LabeledDigraph::new(Arc::new(mst.alphabet.clone())),
    };
    let root = b.vertex(0, 0, true).expect("root");
    b.depth[root as usize] = 0;
    b.graph.set_root(Some(root));
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let dv = b.depth[v as usize];
        let create = dv < radius;
        for (l, t) in b.rules(v) {
            let Some(w) = b.resolve(v, t, create) else { continue };
            if b.depth[w as usize] == u32::MAX {
                b.depth[w as usize] = dv + 1;
                queue.push_back(w);
            }
            let (s, d) = if l.is_inverse() { (w, v) } else { (v, w) };
            if !b.graph.has_edge(s, l.generator(), d) {
                b.graph.add_edge(s, l.generator(), d);
            }
        }
    }
    let zones = b.zones.iter().map(|z| z.kind).collect();
    Ok(OmegaBall { graph: b.graph, info: b.info, depth: b.depth, radius, mst, zones })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaChecks {
    pub bidet: bool,
    pub relators: bool,
    pub zones: bool,
}

impl OmegaChecks {
    pub const ALL: OmegaChecks = OmegaChecks { bidet: true, relators: true, zones: true };
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OmegaReport {
    pub vertices: usize,
    pub edges: usize,
    /// `(vertex, letter)` with two edges sharing that letter.
    pub bidet_violations: Vec<(u32, String)>,
    /// `(vertex, relator index)` for relators not read around a closed walk.
    pub relator_failures: Vec<(u32, usize)>,
    pub relator_vertices_checked: usize,
    pub zone_violations: Vec<String>,
    /// Vertices where "in a z-zone ⇔ incoming p_i and p_j, i ≠ j" fails.
    pub incoming_p_violations: Vec<u32>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.bidet_violations.is_empty()
            && self.relator_failures.is_empty()
            && self.zone_violations.is_empty()
            && self.incoming_p_violations.is_empty()
    }
}

/// Relators are only read at vertices whose closed walks stay inside the
/// ball: `depth + ⌊|r|/2⌋ ≤ radius`.
pub fn check_omega(ball: &OmegaBall, checks: OmegaChecks) -> OmegaReport {
    let g = &ball.graph;
    let n = g.num_vertices();
    let mut rep = OmegaReport { vertices: n, edges: g.num_edges(), ..Default::default() };
    if checks.bidet {
        for v in 0..n as Vertex {
            if let Some(l) = g.bideterminism_violation(v) {
                rep.bidet_violations.push((v, g.alphabet().letter_name(l)));
            }
        }
    }
    if checks.relators {
        let relators = ball.mst.relators();
        for v in 0..n as Vertex {
            let mut checked = false;
            for (i, r) in relators.iter().enumerate() {
                if ball.depth[v as usize] + (r.len() as u32) / 2 > ball.radius {
                    continue;
                }
                checked = true;
                if g.read_end(v, r) != Some(v) {
                    rep.relator_failures.push((v, i));
                }
            }
            rep.relator_vertices_checked += checked as usize;
        }
    }
    if checks.zones {
        let layout = SigmaLayout::new(&ball.mst, (ball.mst.alphabet.len() - 3) - layout_na(&ball.mst)).ok();
        let mut keys = FxHashMap::default();
        for (v, info) in ball.info.iter().enumerate() {
            if ball.zones[info.zone as usize] != info.kind {
                rep.zone_violations.push(format!("vertex {v}: kind disagrees with its zone"));
            }
            if (info.kind == ZoneKind::Root) != (v as Vertex == g.root().unwrap_or(0)) {
                rep.zone_violations.push(format!("vertex {v}: root kind misplaced"));
            }
            if let Some(w) = keys.insert((info.zone, info.coord), v) {
                rep.zone_violations.push(format!("vertices {w} and {v} share a zone slot"));
            }
        }
        if let Some(layout) = layout {
            for v in 0..n as Vertex {
                if ball.depth[v as usize] >= ball.radius {
                    continue;
                }
                let mut ps: Vec<u32> = g.in_edges(v).iter().filter_map(|&(l, _)| layout.p_index(l)).collect();
                ps.sort_unstable();
                ps.dedup();
                let in_z = ball.info[v as usize].kind == ZoneKind::Z;
                if in_z != (ps.len() >= 2) {
                    rep.incoming_p_violations.push(v);
                }
            }
        }
    }
    rep
}

/// `|A|` recovered from the provenance of an `M_{S,T}` presentation.
fn layout_na(mst: &Presentation) -> usize {
    MstProvenance::read(mst).map(|p| p.a.len()).unwrap_or(0)
}

impl OmegaBall {
    pub fn zone_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for i in &self.info {
            let key = match i.kind {
                ZoneKind::Root => "root".to_string(),
                ZoneKind::P(i) => format!("p{i}"),
                ZoneKind::Z => "z".into(),
                ZoneKind::Inv(x) => format!("{}^-1", self.mst.alphabet.name(x)),
            };
            *m.entry(key).or_insert(0) += 1;
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Q and Γ′

/// Token of a normal form in `Q` (case `B = ∅`).
///
/// `Tail(i, s)` is `q_i w^(i)` with `w` representing `s ∈ S`; it is only
/// open for extension when it is the last token. `Block(s)` is
/// `q_0 w^(0) p_0 = q_i w^(i) p_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QTok {
    Lit(u32),
    Tail(u32, u32),
    Block(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum QGen {
    P(u32),
    Q(u32),
    A(u32, u32),
}

/// Exact multiplication in the untruncated `Q` by right generators.
#[derive(Clone, Debug)]
pub struct QOracle {
    pub alphabet: InvolutiveAlphabet,
    pub s: SOracle,
    gens: Vec<QGen>,
    k: u32,
}

impl QOracle {
    pub fn new(input: &MstInput, s: SOracle) -> Result<Self> {
        if !input.b_subset.is_empty() {
            return Err(ZoneError::Unsupported("exact Q oracle needs B = ∅".into()));
        }
        let k = input.k() as u32;
        let n_a = input.s_pres.alphabet.len() as u32;
        let prov = MstProvenance::read(&build_mst(input)?)?;
        let alphabet = q_alphabet(&prov)?;
        let mut gens: Vec<QGen> = (0..=k).map(QGen::P).collect();
        gens.extend((0..=k).map(QGen::Q));
        for i in 0..=k {
            gens.extend((0..n_a).map(|a| QGen::A(i, a)));
        }
        Ok(QOracle { alphabet, s, gens, k })
    }

    pub fn generators(&self) -> usize {
        self.gens.len()
    }
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn succ(&mut self, x: &[QTok], g: u32) -> Vec<QTok> {
        let mut y = x.to_vec();
        match self.gens[g as usize] {
            QGen::A(i, a) => match y.last_mut() {
                Some(QTok::Tail(j, s)) if *j == i => *s = self.s.mul_gen(*s, a),
                _ => y.push(QTok::Lit(g)),
            },
            QGen::P(i) => match y.last().copied() {
                Some(QTok::Tail(j, s)) if j == i => *y.last_mut().unwrap() = QTok::Block(s),
                _ => y.push(QTok::Lit(g)),
            },
            QGen::Q(i) => y.push(QTok::Tail(i, self.s.identity())),
        }
        y
    }

    /// The unique `y` with `y·g = x`, if any.
    pub fn pred(&mut self, x: &[QTok], g: u32) -> Option<Vec<QTok>> {
        let (&last, rest) = x.split_last()?;
        let open_tail = |r: &[QTok], i: u32| matches!(r.last(), Some(QTok::Tail(j, _)) if *j == i);
        match (self.gens[g as usize], last) {
            (QGen::A(i, a), QTok::Tail(j, s)) if i == j => {
                let s = self.s.pred_gen(s, a)?;
                let mut y = rest.to_vec();
                y.push(QTok::Tail(i, s));
                Some(y)
            }
            (QGen::A(i, _), QTok::Lit(h)) if h == g && !open_tail(rest, i) => Some(rest.to_vec()),
            (QGen::P(i), QTok::Block(s)) => {
                let mut y = rest.to_vec();
                y.push(QTok::Tail(i, s));
                Some(y)
            }
            (QGen::P(i), QTok::Lit(h)) if h == g && !open_tail(rest, i) => Some(rest.to_vec()),
            (QGen::Q(i), QTok::Tail(j, s)) if i == j && s == self.s.identity() => Some(rest.to_vec()),
            _ => None,
        }
    }

    pub fn normal_form(&mut self, w: &[Letter]) -> Vec<QTok> {
        w.iter().fold(Vec::new(), |x, l| self.succ(&x, l.generator()))
    }

    pub fn equal(&mut self, u: &[Letter], v: &[Letter]) -> bool {
        self.normal_form(u) == self.normal_form(v)
    }

    fn gen_p(&self, i: u32) -> u32 {
        i
    }
    fn gen_q(&self, i: u32) -> u32 {
        self.k + 1 + i
    }
    fn gen_a(&self, i: u32, a: u32) -> u32 {
        2 * (self.k + 1) + i * self.s.generators() as u32 + a
    }
}

pub const NONE: u32 = u32::MAX;

/// Ball of the right Cayley graph of `Q`, as dense successor/predecessor tables.
pub struct QBall {
    pub n: usize,
    pub gens: usize,
    pub succ: Vec<u32>,
    pub pred: Vec<u32>,
    pub depth: Vec<u8>,
    pub radius: u32,
    pub words: Vec<Vec<QTok>>,
    index: FxHashMap<Vec<QTok>, u32>,
}

impl QBall {
    /// Undirected BFS from `1`; vertices on the sphere only get edges to
    /// vertices already in the ball.
    pub fn build(q: &mut QOracle, radius: u32) -> QBall {
        let gens = q.generators();
        let mut b = QBall {
            n: 0,
            gens,
            succ: Vec::new(),
            pred: Vec::new(),
            depth: Vec::new(),
            radius,
            words: Vec::new(),
            index: FxHashMap::default(),
        };
        b.add(Vec::new(), 0);
        let mut head = 0;
        while head < b.n {
            let v = head as u32;
            head += 1;
            let dv = b.depth[v as usize] as u32;
            let x = b.words[v as usize].clone();
            for g in 0..gens as u32 {
                let fwd = q.succ(&x, g);
                let back = q.pred(&x, g);
                for (y, forward) in [(Some(fwd), true), (back, false)] {
                    let Some(y) = y else { continue };
                    let w = match b.index.get(&y) {
                        Some(&w) => w,
                        None if dv < radius => b.add(y, dv + 1),
                        None => continue,
                    };
                    let (s, d) = if forward { (v, w) } else { (w, v) };
                    b.succ[s as usize * gens + g as usize] = d;
                    b.pred[d as usize * gens + g as usize] = s;
                }
            }
        }
        b
    }

    fn add(&mut self, x: Vec<QTok>, depth: u32) -> u32 {
        let id = self.n as u32;
        self.n += 1;
        self.index.insert(x.clone(), id);
        self.words.push(x);
        self.depth.push(depth as u8);
        self.succ.extend(std::iter::repeat_n(NONE, self.gens));
        self.pred.extend(std::iter::repeat_n(NONE, self.gens));
        id
    }

    pub fn vertex_of(&self, x: &[QTok]) -> Option<u32> {
        self.index.get(x).copied()
    }
    #[inline]
    pub fn out(&self, v: u32, g: u32) -> Option<u32> {
        Some(self.succ[v as usize * self.gens + g as usize]).filter(|&x| x != NONE)
    }
    #[inline]
    pub fn inc(&self, v: u32, g: u32) -> Option<u32> {
        Some(self.pred[v as usize * self.gens + g as usize]).filter(|&x| x != NONE)
    }
    /// Sphere vertices may be missing edges that leave the ball.
    pub fn on_sphere(&self, v: u32) -> bool {
        self.depth[v as usize] as u32 >= self.radius
    }

    pub fn read(&self, v: u32, w: &[Letter]) -> Option<u32> {
        w.iter().try_fold(v, |x, l| if l.is_inverse() { self.inc(x, l.generator()) } else { self.out(x, l.generator()) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "index", rename_all = "snake_case")]
pub enum VType {
    Z,
    P(u32),
    Untyped,
    /// The evidence needed lies outside the ball.
    Unknown,
}

/// Types every vertex by walking back from each incoming `p_i` edge along
/// `a^(i)` edges to the last letter that is not an `a^(i)`.
pub fn classify_types(q: &QOracle, ball: &QBall) -> Result<Vec<VType>> {
    let k = q.k();
    let n_a = q.s.generators() as u32;
    let mut types = vec![VType::Untyped; ball.n];
    let mut stack = Vec::new();
    let mut seen: FxHashMap<u32, ()> = FxHashMap::default();
    for v in 0..ball.n as u32 {
        let mut z = false;
        let mut ps: Vec<u32> = Vec::new();
        let mut incomplete = ball.on_sphere(v);
        for i in 0..=k {
            let Some(u) = ball.inc(v, q.gen_p(i)) else { continue };
            let (mut ev_z, mut ev_p) = (false, false);
            stack.clear();
            seen.clear();
            stack.push(u);
            seen.insert(u, ());
            while let Some(x) = stack.pop() {
                if x == 0 {
                    ev_p = true;
                }
                if ball.on_sphere(x) {
                    incomplete = true;
                }
                for g in 0..ball.gens as u32 {
                    let Some(y) = ball.inc(x, g) else { continue };
                    let is_ai = (0..n_a).any(|a| q.gen_a(i, a) == g);
                    if is_ai {
                        if seen.insert(y, ()).is_none() {
                            stack.push(y);
                        }
                    } else if g == q.gen_q(i) {
                        ev_z = true;
                    } else {
                        ev_p = true;
                    }
                }
            }
            if ev_z && ev_p {
                return Err(ZoneError::Ambiguous { vertex: v, index: i });
            }
            z |= ev_z;
            if ev_p {
                ps.push(i);
            }
        }
        if z && !ps.is_empty() {
            return Err(ZoneError::Ambiguous { vertex: v, index: ps[0] });
        }
        if ps.len() > 1 {
            return Err(ZoneError::AmbiguousP { vertex: v, i: ps[0], j: ps[1] });
        }
        types[v as usize] = if z {
            VType::Z
        } else if let Some(&i) = ps.first() {
            VType::P(i)
        } else if incomplete {
            VType::Unknown
        } else {
            VType::Untyped
        };
    }
    Ok(types)
}

/// `Γ′` on a ball: one slot per (vertex, label) in each direction, so a
/// second, different edge in a slot is recorded as a conflict.
pub struct GammaPrime {
    pub n: usize,
    pub sigma: Arc<InvolutiveAlphabet>,
    labels: usize,
    out: Vec<u32>,
    inc: Vec<u32>,
    /// `(vertex, label, incoming)` slots that received two targets.
    pub conflicts: Vec<(u32, u32, bool)>,
    /// Vertices whose `Γ′` neighbourhood may be cut off by the ball.
    pub complete: Vec<bool>,
    pub depth: Vec<u8>,
    pub radius: u32,
}

impl GammaPrime {
    pub fn add_edge(&mut self, s: u32, l: u32, d: u32) {
        for (slot_v, other, incoming) in [(s, d, false), (d, s, true)] {
            let table = if incoming { &mut self.inc } else { &mut self.out };
            let slot = &mut table[slot_v as usize * self.labels + l as usize];
            if *slot == NONE {
                *slot = other;
            } else if *slot != other {
                self.conflicts.push((slot_v, l, incoming));
            }
        }
    }

    pub fn remove_edge(&mut self, s: u32, l: u32) {
        let d = self.out[s as usize * self.labels + l as usize];
        if d != NONE {
            self.out[s as usize * self.labels + l as usize] = NONE;
            self.inc[d as usize * self.labels + l as usize] = NONE;
        }
    }

    pub fn step(&self, v: u32, l: Letter) -> Option<u32> {
        let t = if l.is_inverse() { &self.inc } else { &self.out };
        Some(t[v as usize * self.labels + l.generator() as usize]).filter(|&x| x != NONE)
    }

    pub fn out(&self, v: u32, label: u32) -> Option<u32> {
        self.step(v, Letter::pos(label))
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().filter(|&&x| x != NONE).count()
    }

    /// Small balls only: copy into a general graph.
    pub fn to_digraph(&self) -> LabeledDigraph {
        let mut g = LabeledDigraph::with_vertices(self.sigma.clone(), self.n);
        g.set_root(Some(0));
        for v in 0..self.n {
            for l in 0..self.labels {
                let d = self.out[v * self.labels + l];
                if d != NONE {
                    g.add_edge(v as u32, l as u32, d);
                }
            }
        }
        g
    }
}

/// The five surgery steps, in order, on a classified ball.
pub fn gamma_prime(input: &MstInput, q: &QOracle, ball: &QBall, types: &[VType]) -> Result<GammaPrime> {
    let mst = build_mst(input)?;
    let k = q.k();
    let layout = SigmaLayout::new(&mst, k as usize)?;
    let labels = mst.alphabet.len();
    let n = ball.n;
    let mut g = GammaPrime {
        n,
        sigma: Arc::new(mst.alphabet.clone()),
        labels,
        out: vec![NONE; n * labels],
        inc: vec![NONE; n * labels],
        conflicts: Vec::new(),
        complete: vec![false; n],
        depth: ball.depth.clone(),
        radius: ball.radius,
    };
    let n_a = q.s.generators() as u32;
    // 1. z-edges along q_0 p_0
    for u in 0..n as u32 {
        if let Some(u3) = ball.out(u, q.gen_q(0)).and_then(|u2| ball.out(u2, q.gen_p(0))) {
            g.add_edge(u, layout.z, u3);
        }
    }
    // 2. a-edges between p_i companions; p_i edges are kept as they are
    for u1 in 0..n as u32 {
        for i in 0..=k {
            let Some(v1) = ball.out(u1, q.gen_p(i)) else { continue };
            g.add_edge(u1, layout.p[i as usize], v1);
            for a in 0..n_a {
                if let Some(v2) = ball.out(u1, q.gen_a(i, a)).and_then(|u2| ball.out(u2, q.gen_p(i))) {
                    g.add_edge(v1, a, v2);
                }
            }
        }
    }
    // 3. b-edges: none, B = ∅ for the exact oracle.
    // 4. q_i, a^(i), b^(z) edges are simply never copied.
    // 5. d-edges
    for (w, t) in types.iter().enumerate() {
        match *t {
            VType::Z | VType::P(0) => g.add_edge(w as u32, layout.d, w as u32),
            VType::P(i) => {
                let r = &input.s_pres.relations[i as usize - 1];
                let (Some(u), Some(v)) = (read_pos(&g, w as u32, &r.lhs), read_pos(&g, w as u32, &r.rhs)) else { continue };
                if types[u as usize] == VType::P(i) && types[v as usize] == VType::P(i) {
                    g.add_edge(v, layout.d, u);
                }
            }
            _ => {}
        }
    }
    let max_uv = input.s_pres.relations.iter().map(|r| r.lhs.len() + r.rhs.len()).max().unwrap_or(0);
    let margin = completeness_margin(max_uv);
    for (v, c) in g.complete.iter_mut().enumerate().take(n) {
        *c = ball.depth[v] as u32 + margin <= ball.radius && types[v] != VType::Unknown;
    }
    Ok(g)
}

/// Every `Γ′` edge at `V` is witnessed by `Γ` vertices within this distance.
pub fn completeness_margin(max_uv_len: usize) -> u32 {
    3u32.max(3 * max_uv_len as u32)
}

fn read_pos(g: &GammaPrime, v: u32, w: &[Letter]) -> Option<u32> {
    w.iter().try_fold(v, |x, &l| g.step(x, l))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GammaReport {
    pub vertices: usize,
    pub edges: usize,
    pub interior: usize,
    pub complete: usize,
    pub type_counts: BTreeMap<String, usize>,
    /// `(vertex, relator index)` not readable around a closed walk.
    pub closed_walk_failures: Vec<(u32, usize)>,
    /// Relator reads that ran into an incomplete vertex (not failures).
    pub horizon_skips: usize,
    /// `(vertex, label, incoming)` determinism violations at complete vertices.
    pub determinism_failures: Vec<(u32, String, bool)>,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.closed_walk_failures.is_empty() && self.determinism_failures.is_empty()
    }
}

/// (i) relators close up at interior vertices (`depth + interior ≤ radius`);
/// (ii) determinism at complete vertices.
pub fn check_gamma_prime(g: &GammaPrime, mst: &Presentation, interior: u32, types: &[VType]) -> GammaReport {
    let mut rep = GammaReport { vertices: g.n, edges: g.num_edges(), ..Default::default() };
    for t in types {
        let key = match t {
            VType::Z => "z".to_string(),
            VType::P(i) => format!("p{i}"),
            VType::Untyped => "untyped".into(),
            VType::Unknown => "unknown".into(),
        };
        *rep.type_counts.entry(key).or_insert(0) += 1;
    }
    let relators = mst.relators();
    for v in 0..g.n as u32 {
        if g.complete[v as usize] {
            rep.complete += 1;
        }
        if g.depth[v as usize] as u32 + interior > g.radius {
            continue;
        }
        rep.interior += 1;
        'rel: for (i, r) in relators.iter().enumerate() {
            let mut x = v;
            for &l in r {
                match g.step(x, l) {
                    Some(y) => x = y,
                    None if !g.complete[x as usize] => {
                        rep.horizon_skips += 1;
                        continue 'rel;
                    }
                    None => {
                        rep.closed_walk_failures.push((v, i));
                        continue 'rel;
                    }
                }
            }
            if x != v {
                rep.closed_walk_failures.push((v, i));
            }
        }
    }
    for &(v, l, incoming) in &g.conflicts {
        if g.complete[v as usize] {
            rep.determinism_failures.push((v, g.sigma.name(l).to_string(), incoming));
        }
    }
    rep
}

/// Everything needed for the `Γ′` checks in one call.
pub struct GammaPrimeRun {
    pub ball: QBall,
    pub types: Vec<VType>,
    pub gamma: GammaPrime,
    pub oracle: QOracle,
    pub mst: Presentation,
}

pub fn run_gamma_prime(input: &MstInput, s: SOracle, radius: u32) -> Result<GammaPrimeRun> {
    let mut oracle = QOracle::new(input, s)?;
    let ball = QBall::build(&mut oracle, radius);
    let types = classify_types(&oracle, &ball)?;
    let gamma = gamma_prime(input, &oracle, &ball, &types)?;
    Ok(GammaPrimeRun { ball, types, gamma, oracle, mst: build_mst(input)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::worked_example;
    use crate::presentations::Kind;
    use crate::rc::mr_normal_form;

    fn z2_input() -> MstInput {
        let s = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a a", "1")]).unwrap();
        MstInput::new(s, &[]).unwrap()
    }

    #[test]
    fn root_edges() {
        let input = worked_example();
        let mut o = SOracle::free_monoid(&input).unwrap();
        let ball = omega_ball(&input, &mut o, 1).unwrap();
        let root = ball.graph.root().unwrap();
        let outs: Vec<String> =
            ball.graph.out_edges(root).iter().map(|&(l, _)| ball.mst.alphabet.name(l).to_string()).collect();
        let mut sorted = outs.clone();
        sorted.sort();
        assert_eq!(sorted, ["p0", "p1", "z"]);
        assert!(ball.graph.in_edges(root).is_empty());
    }

    #[test]
    fn zone_features() {
        let input = worked_example();
        let mut o = SOracle::free_monoid(&input).unwrap();
        let ball = omega_ball(&input, &mut o, 4).unwrap();
        let g = &ball.graph;
        let a = &ball.mst.alphabet;
        let root = g.root().unwrap();
        let zr = g.step(root, a.letter("z").unwrap()).unwrap();
        assert_eq!(g.step(zr, a.letter("d").unwrap()), Some(zr));
        let p1 = g.step(root, a.letter("p1").unwrap()).unwrap();
        assert_eq!(g.step(p1, a.letter("d").unwrap()), None);
        let w = g.read_end(p1, &a.parse("a").unwrap()).unwrap();
        assert_eq!(g.step(w, a.letter("d").unwrap()), Some(w));
        let rep = check_omega(&ball, OmegaChecks::ALL);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.relator_vertices_checked > 0);
    }

    #[test]
    fn fault_is_caught() {
        let input = worked_example();
        let mut o = SOracle::free_monoid(&input).unwrap();
        let mut ball = omega_ball(&input, &mut o, 3).unwrap();
        let root = ball.graph.root().unwrap();
        let other = ball.graph.num_vertices() as u32 - 1;
        let z = ball.mst.alphabet.id("z").unwrap();
        ball.graph.add_edge(root, z, other);
        let rep = check_omega(&ball, OmegaChecks { bidet: true, relators: false, zones: false });
        assert!(rep.bidet_violations.iter().any(|(v, _)| *v == root));
    }

    #[test]
    fn finite_table_round_trip() {
        let input = z2_input();
        let t = FiniteTable::cyclic(2);
        let text = t.to_text(&input.s_pres.alphabet);
        assert_eq!(FiniteTable::parse(&text, &input.s_pres.alphabet).unwrap(), t);
        assert!(SOracle::finite_table(&input, FiniteTable::cyclic(3)).is_err());
        let bad = text.replace("@mul e1 e1 = e0", "@mul e1 e1 = e1");
        assert!(FiniteTable::parse(&bad, &input.s_pres.alphabet).is_err());
        let mut o = SOracle::from_text(&input, &text).unwrap();
        let ball = omega_ball(&input, &mut o, 4).unwrap();
        assert!(check_omega(&ball, OmegaChecks::ALL).passed());
    }

    /// For the worked example `Q` is `M_∞` after renaming; compare normal forms.
    #[test]
    fn q_oracle_matches_block_flips() {
        let input = worked_example();
        let mut q = QOracle::new(&input, SOracle::free_monoid(&input).unwrap()).unwrap();
        let m = crate::rc::mr_alphabet();
        let qa = q.alphabet.clone();
        let rename = |w: &Word| -> Word {
            w.iter()
                .map(|l| {
                    let n = qa.name(l.generator()).replace('^', "");
                    m.letter(&n).unwrap()
                })
                .collect()
        };
        let words = crate::words::shortlex_words(&(0..6).collect::<Vec<_>>(), 4);
        let mut classes_q: FxHashMap<Vec<QTok>, Vec<usize>> = FxHashMap::default();
        let mut classes_m: FxHashMap<Word, Vec<usize>> = FxHashMap::default();
        for (i, w) in words.iter().enumerate() {
            classes_q.entry(q.normal_form(w)).or_default().push(i);
            classes_m.entry(mr_normal_form(None, &rename(w)).unwrap()).or_default().push(i);
        }
        let mut a: Vec<_> = classes_q.into_values().collect();
        let mut b: Vec<_> = classes_m.into_values().collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn types_and_gamma_prime() {
        let input = worked_example();
        let run = run_gamma_prime(&input, SOracle::free_monoid(&input).unwrap(), 5).unwrap();
        let mut q = run.oracle;
        let qa = q.alphabet.clone();
        let at = |q: &mut QOracle, s: &str| run.ball.vertex_of(&q.normal_form(&qa.parse(s).unwrap())).unwrap();
        assert_eq!(run.types[at(&mut q, "q0 p0") as usize], VType::Z);
        assert_eq!(run.types[at(&mut q, "p0") as usize], VType::P(0));
        assert_eq!(run.types[at(&mut q, "p1 p0") as usize], VType::P(0));
        assert_eq!(run.types[0], VType::Untyped);
        let g = &run.gamma;
        let z = g.sigma.id("z").unwrap();
        let root_z = g.out(0, z).unwrap();
        assert_eq!(root_z, at(&mut q, "q1 p1"));
        let rep = check_gamma_prime(g, &run.mst, 3, &run.types);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.interior > 0);
    }

    #[test]
    fn gamma_prime_fault() {
        let input = worked_example();
        let mut run = run_gamma_prime(&input, SOracle::free_monoid(&input).unwrap(), 6).unwrap();
        let z = run.gamma.sigma.id("z").unwrap();
        let rep = check_gamma_prime(&run.gamma, &run.mst, 6, &run.types);
        assert!(rep.passed() && rep.interior == 1);
        let root_z = run.gamma.out(0, z).unwrap();
        run.gamma.add_edge(0, z, run.gamma.out(root_z, 0).unwrap());
        let rep = check_gamma_prime(&run.gamma, &run.mst, 6, &run.types);
        assert_eq!(rep.determinism_failures.len(), 1);
        run.gamma.remove_edge(0, z);
        let rep = check_gamma_prime(&run.gamma, &run.mst, 6, &run.types);
        assert!(!rep.closed_walk_failures.is_empty());
    }
}
