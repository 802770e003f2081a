//! Budgeted Stephen's procedure.
//!
//! Rounds are synchronous: every vertex alive at the start of a round gets a
//! loop for every relator, then the graph is folded. Sewing reads as much of
//! the relator as already exists from both ends and only adds the missing
//! middle segment, which folds to the same graph as sewing the full loop.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graphs::{rooted_isomorphic, Folder, LabeledDigraph, Vertex};
use crate::presentations::{Kind, Presentation};
use crate::words::{invert_word, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StephenError {
    #[error("Stephen's procedure needs a special inverse presentation, got {0}")]
    WrongKind(Kind),
    #[error("word uses a letter outside the presentation's alphabet")]
    MalformedWord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub rounds: usize,
    pub vertex_cap: usize,
}

impl Budget {
    pub fn new(rounds: usize, vertex_cap: usize) -> Self {
        Budget { rounds, vertex_cap }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rounds: 4, vertex_cap: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub struct SchutzenbergerApprox {
    pub graph: LabeledDigraph,
    pub rounds_completed: usize,
    pub vertex_cap: usize,
    pub stabilized: bool,
    /// A round was abandoned because the vertex cap was hit.
    pub capped: bool,
    /// Image of the start of the base word; the root is the image of its end.
    pub start: Vertex,
    /// Expansion schedule, recorded for reproducibility.
    pub schedule: &'static str,
}

pub const SCHEDULE: &str = "synchronous-rounds";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiDecision {
    pub verdict: Verdict,
    /// Vertex walk(s) in the approximation backing a `yes`.
    pub witness: Option<Vec<Vec<Vertex>>>,
    pub rounds_used: usize,
    pub vertices: usize,
}

impl SemiDecision {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

fn check_word(p: &Presentation, w: &[Letter]) -> Result<(), StephenError> {
    if w.iter().all(|&l| p.alphabet.contains(l)) {
        Ok(())
    } else {
        Err(StephenError::MalformedWord)
    }
}

/// Sews relator `r` at `v`, adding only the unread middle part.
fn sew(f: &mut Folder, v: Vertex, r: &[Letter]) {
    let v = f.find(v);
    let mut head = v;
    let mut i = 0;
    while i < r.len() {
        match f.step(head, r[i]) {
            Some(t) => {
                head = t;
                i += 1;
            }
            None => break,
        }
    }
    if i == r.len() {
        if head != v {
            f.merge(head, v);
        }
        return;
    }
    let mut tail = v;
    let mut j = r.len();
    while j > i {
        match f.step(tail, r[j - 1].inverse()) {
            Some(t) => {
                tail = t;
                j -= 1;
            }
            None => break,
        }
    }
    if i == j {
        f.merge(head, tail);
        return;
    }
    let mut cur = head;
    for (k, &l) in r[i..j].iter().enumerate() {
        let next = if i + k + 1 == j { tail } else { f.add_vertex() };
        f.add_letter(cur, l, next);
        cur = next;
    }
}

/// Approximates the Schützenberger graph of `base` (ε gives SΓ(1)).
pub fn approximate(p: &Presentation, base: &[Letter], budget: Budget) -> Result<SchutzenbergerApprox, StephenError> {
    if p.kind != Kind::SpecialInverse && p.kind != Kind::Group {
        return Err(StephenError::WrongKind(p.kind));
    }
    check_word(p, base)?;
    let alphabet = Arc::new(p.alphabet.clone());
    let relators: Vec<Word> = p.relators().into_iter().filter(|r| !r.is_empty()).collect();

    let mut f = Folder::new();
    let start = f.add_vertex();
    let mut root = start;
    for &l in base {
        let next = f.add_vertex();
        f.add_letter(root, l, next);
        root = next;
    }
    f.process();

    let mut rounds_completed = 0;
    let mut stabilized = relators.is_empty();
    let mut capped = false;
    let (mut prev, _) = f.to_graph(alphabet.clone(), Some(root));
    while !stabilized && rounds_completed < budget.rounds {
        let snapshot = f.clone();
        let before = f.changes;
        let mut aborted = false;
        'round: for v in snapshot.reps() {
            for r in &relators {
                sew(&mut f, v, r);
                f.process();
                if f.live_vertices() > budget.vertex_cap {
                    aborted = true;
                    break 'round;
                }
            }
        }
        if aborted {
            // discard the partial round so the invariant still holds
            f = snapshot;
            capped = true;
            break;
        }
        rounds_completed += 1;
        let (g, _) = f.to_graph(alphabet.clone(), Some(root));
        if f.changes == before || rooted_isomorphic(&prev, &g).unwrap_or(false) {
            stabilized = true;
        }
        prev = g;
    }
    let (graph, map) = f.to_graph(alphabet, Some(root));
    Ok(SchutzenbergerApprox {
        graph,
        start: map[start as usize],
        rounds_completed,
        vertex_cap: budget.vertex_cap,
        stabilized,
        capped,
        schedule: SCHEDULE,
    })
}

impl SchutzenbergerApprox {
    pub fn root(&self) -> Vertex {
        self.graph.root().expect("approximations are rooted")
    }

    fn decision(&self, witness: Option<Vec<Vec<Vertex>>>) -> SemiDecision {
        SemiDecision {
            verdict: if witness.is_some() { Verdict::Yes } else { Verdict::Unknown },
            witness,
            rounds_used: self.rounds_completed,
            vertices: self.graph.num_vertices(),
        }
    }

    pub fn right_unit(&self, w: &[Letter]) -> SemiDecision {
        self.decision(self.graph.read(self.root(), w).map(|p| vec![p]))
    }

    pub fn equal_right_units(&self, u: &[Letter], v: &[Letter]) -> SemiDecision {
        let root = self.root();
        let witness = match (self.graph.read(root, u), self.graph.read(root, v)) {
            (Some(a), Some(b)) if a.last() == b.last() => Some(vec![a, b]),
            _ => None,
        };
        self.decision(witness)
    }

    pub fn unit(&self, w: &[Letter]) -> SemiDecision {
        let root = self.root();
        let witness = match (self.graph.read(root, w), self.graph.read(root, &invert_word(w))) {
            (Some(a), Some(b)) => Some(vec![a, b]),
            _ => None,
        };
        self.decision(witness)
    }

    /// Relator closure at every vertex (checks the returned graph directly).
    pub fn relator_failures(&self, p: &Presentation) -> Vec<(Vertex, usize)> {
        let mut bad = Vec::new();
        for v in 0..self.graph.num_vertices() as Vertex {
            for (i, r) in p.relators().iter().enumerate() {
                if self.graph.read_end(v, r) != Some(v) {
                    bad.push((v, i));
                }
            }
        }
        bad
    }
}

pub fn is_right_unit(p: &Presentation, w: &[Letter], budget: Budget) -> Result<SemiDecision, StephenError> {
    check_word(p, w)?;
    Ok(approximate(p, &[], budget)?.right_unit(w))
}

pub fn equal_right_units(p: &Presentation, u: &[Letter], v: &[Letter], budget: Budget) -> Result<SemiDecision, StephenError> {
    check_word(p, u)?;
    check_word(p, v)?;
    Ok(approximate(p, &[], budget)?.equal_right_units(u, v))
}

pub fn is_unit(p: &Presentation, w: &[Letter], budget: Budget) -> Result<SemiDecision, StephenError> {
    check_word(p, w)?;
    Ok(approximate(p, &[], budget)?.unit(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Presentation {
        let rel = vec!["a"; n].join(" ");
        Presentation::from_strs(Kind::SpecialInverse, &["a"], &[(rel.as_str(), "1")]).unwrap()
    }

    #[test]
    fn z2_stabilizes() {
        let p = cyclic(2);
        let s = approximate(&p, &[], Budget::new(3, 100)).unwrap();
        assert!(s.stabilized);
        assert_eq!(s.graph.num_vertices(), 2);
        assert!(s.relator_failures(&p).is_empty());
        let a = p.alphabet.parse("a").unwrap();
        let moved = approximate(&p, &a, Budget::new(3, 100)).unwrap();
        assert_eq!(moved.graph.num_vertices(), 2);
        assert_eq!(moved.graph.read_end(moved.start, &a), Some(moved.root()));
        assert_ne!(moved.start, moved.root());
    }

    #[test]
    fn no_relators() {
        let p = Presentation::from_strs(Kind::SpecialInverse, &["a"], &[]).unwrap();
        let s = approximate(&p, &[], Budget::new(3, 100)).unwrap();
        assert!(s.stabilized);
        assert_eq!(s.graph.num_vertices(), 1);
    }

    #[test]
    fn right_units() {
        let p = Presentation::from_strs(Kind::SpecialInverse, &["a", "b"], &[("a b", "1")]).unwrap();
        let a = p.alphabet.parse("a").unwrap();
        assert!(is_right_unit(&p, &a, Budget::new(2, 1000)).unwrap().is_yes());
        assert!(is_right_unit(&p, &[], Budget::new(0, 1)).unwrap().is_yes());
        let aa = p.alphabet.parse("a a'").unwrap();
        let d = is_unit(&p, &aa, Budget::new(2, 1000)).unwrap();
        if d.is_yes() {
            assert_eq!(d.witness.as_ref().map(Vec::len), Some(2));
        }
        let z2 = cyclic(2);
        let ai = z2.alphabet.parse("a'").unwrap();
        assert!(is_right_unit(&z2, &ai, Budget::new(3, 100)).unwrap().is_yes());
        assert!(is_unit(&z2, &a, Budget::new(3, 100)).unwrap().is_yes());
    }

    #[test]
    fn cap_aborts_cleanly() {
        let p = Presentation::from_strs(Kind::SpecialInverse, &["a", "b"], &[("a b a' b'", "1")]).unwrap();
        let s = approximate(&p, &[], Budget::new(10, 50)).unwrap();
        assert!(s.capped && !s.stabilized);
        assert!(s.graph.num_vertices() <= 50);
    }
}
