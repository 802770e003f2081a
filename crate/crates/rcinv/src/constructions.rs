//! Builders for `M_{S,T}`, the truncated RC presentation `Q` of its right
//! units, the `ψ` substitution, and the `M_{Q,W}` / `R_{Q,W}` pair.

use thiserror::Error;

use crate::presentations::{Kind, Presentation, PresentationError, Relation, META_INVERSE_LETTERS};
use crate::rc::{explore_component, search_chain, RChain, RcError, SearchOutcome};
use crate::words::{
    decorated_name, free_reduce, invert_word, shortlex_words, InvolutiveAlphabet, Letter, Word, WordError, ZoneTag,
};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("B must be a subset of A; `{0}` is not a generator of S")]
    BNotInA(String),
    #[error("S needs at least one relation (k ≥ 1)")]
    NoRelations,
    #[error("generator name `{0}` clashes with a generator the construction adds")]
    NameClash(String),
    #[error("expected a {expected} presentation, found {found}")]
    WrongKind { expected: &'static str, found: Kind },
    #[error("provenance missing or malformed: {0}")]
    Provenance(String),
    #[error("relator set must be nonempty")]
    EmptyRelators,
    #[error("letter `{0}` has no ψ image")]
    UnknownLetter(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Rc(#[from] RcError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// `S = Mon_RC⟨A | u_i = v_i⟩` together with `B ⊆ A` generating `T`.
#[derive(Clone, Debug)]
pub struct MstInput {
    pub s_pres: Presentation,
    pub b_subset: Vec<String>,
}

impl MstInput {
    pub fn new(s_pres: Presentation, b: &[&str]) -> Result<Self> {
        if !matches!(s_pres.kind, Kind::RcMonoid | Kind::Monoid) {
            return Err(ConstructionError::WrongKind { expected: "rc_monoid", found: s_pres.kind });
        }
        if s_pres.relations.is_empty() {
            return Err(ConstructionError::NoRelations);
        }
        for name in b {
            if s_pres.alphabet.id(name).is_none() {
                return Err(ConstructionError::BNotInA(name.to_string()));
            }
        }
        if let Some(n) = s_pres.alphabet.names().iter().find(|n| n.contains('^')) {
            return Err(ConstructionError::NameClash(n.clone()));
        }
        Ok(MstInput { s_pres, b_subset: b.iter().map(|s| s.to_string()).collect() })
    }

    /// Normalisation: `T` is generated by arbitrary words; add a fresh
    /// generator `b = w_b` for each of them and take those as `B`.
    pub fn with_generating_words(mut s_pres: Presentation, t_words: &[Word]) -> Result<Self> {
        let mut names = Vec::new();
        for w in t_words {
            let mut j = 1;
            while s_pres.alphabet.id(&format!("b{j}")).is_some() {
                j += 1;
            }
            let name = format!("b{j}");
            let id = s_pres.alphabet.push(&name)?;
            s_pres.relations.push(Relation::new(vec![Letter::pos(id)], w.clone()));
            names.push(name);
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        MstInput::new(s_pres, &refs)
    }

    pub fn k(&self) -> usize {
        self.s_pres.relations.len()
    }
}

/// The worked example: `S = ⟨a | a = a⟩` (free on `a`, `k = 1`) with `B = ∅`.
pub fn worked_example() -> MstInput {
    let s = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a", "a")]).expect("fixed input");
    MstInput::new(s, &[]).expect("fixed input")
}

/// Same `S` with `B = {a}`, so `T = S`.
pub fn worked_example_with_b() -> MstInput {
    let s = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a", "a")]).expect("fixed input");
    MstInput::new(s, &["a"]).expect("fixed input")
}

/// Words inside `@meta` values: tokens joined by `.`, `1` for `ε`.
pub fn encode_word(a: &InvolutiveAlphabet, w: &[Letter]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|&l| a.letter_name(l)).collect::<Vec<_>>().join(".")
    }
}

pub fn decode_word(a: &InvolutiveAlphabet, s: &str) -> std::result::Result<Word, WordError> {
    a.parse(&s.replace('.', " "))
}

fn p_name(i: usize) -> String {
    format!("p{i}")
}
fn q_name(i: usize) -> String {
    format!("q{i}")
}

/// Provenance recorded by `build_mst` / `build_q` in `@meta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MstProvenance {
    pub k: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    /// `(u_i, v_i)` in text form over `A`.
    pub s_relations: Vec<(String, String)>,
}

impl MstProvenance {
    fn write(&self, p: &mut Presentation, construction: &str) {
        p.set_meta("construction", construction);
        p.set_meta("k", self.k.to_string());
        p.set_meta("A", self.a.join(","));
        p.set_meta("B", self.b.join(","));
        for (i, (u, v)) in self.s_relations.iter().enumerate() {
            p.set_meta(&format!("u{}", i + 1), u.clone());
            p.set_meta(&format!("v{}", i + 1), v.clone());
        }
    }

    pub fn read(p: &Presentation) -> Result<Self> {
        let get = |k: &str| p.meta(k).ok_or_else(|| ConstructionError::Provenance(format!("no `{k}` entry")));
        let k: usize = get("k")?.parse().map_err(|_| ConstructionError::Provenance("bad k".into()))?;
        let list = |s: &str| -> Vec<String> { s.split(',').filter(|x| !x.is_empty()).map(String::from).collect() };
        let s_relations = (1..=k)
            .map(|i| Ok((get(&format!("u{i}"))?.to_string(), get(&format!("v{i}"))?.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(MstProvenance { k, a: list(get("A")?), b: list(get("B")?), s_relations })
    }

    fn from_input(input: &MstInput) -> Self {
        let a = &input.s_pres.alphabet;
        MstProvenance {
            k: input.k(),
            a: a.names().to_vec(),
            b: input.b_subset.clone(),
            s_relations: input.s_pres.relations.iter().map(|r| (encode_word(a, &r.lhs), encode_word(a, &r.rhs))).collect(),
        }
    }

    /// Rebuilds the `MstInput` this provenance came from.
    pub fn input(&self) -> Result<MstInput> {
        let alphabet = InvolutiveAlphabet::new(&self.a)?;
        let mut s = Presentation::new(Kind::RcMonoid, alphabet);
        for (u, v) in &self.s_relations {
            let r = Relation::new(decode_word(&s.alphabet, u)?, decode_word(&s.alphabet, v)?);
            s.relations.push(r);
        }
        let b: Vec<&str> = self.b.iter().map(String::as_str).collect();
        MstInput::new(s, &b)
    }
}

/// `M_{S,T}` over `Σ = A ∪ {p_0..p_k, z, d}`.
pub fn build_mst(input: &MstInput) -> Result<Presentation> {
    let k = input.k();
    let s = &input.s_pres;
    for name in &input.b_subset {
        if s.alphabet.id(name).is_none() {
            return Err(ConstructionError::BNotInA(name.clone()));
        }
    }
    let mut sigma = s.alphabet.clone();
    for name in (0..=k).map(p_name).chain(["z".to_string(), "d".to_string()]) {
        if sigma.id(&name).is_some() {
            return Err(ConstructionError::NameClash(name));
        }
        sigma.push(&name)?;
    }
    let g = |n: &str| sigma.letter(n).expect("just added");
    let p: Vec<Letter> = (0..=k).map(|i| g(&p_name(i))).collect();
    let (z, d) = (g("z"), g("d"));
    let n_a = s.alphabet.len() as u32;

    let mut rels = Vec::new();
    for &pi in &p {
        for a in 0..n_a {
            let a = Letter::pos(a);
            rels.push(vec![pi, a, pi.inverse(), pi, a.inverse(), pi.inverse()]);
        }
    }
    for (i, r) in s.relations.iter().enumerate() {
        let pi = p[i + 1];
        let mut w = vec![pi];
        w.extend_from_slice(&r.lhs);
        w.push(d.inverse());
        w.extend(invert_word(&r.rhs));
        w.push(pi.inverse());
        rels.push(w);
    }
    rels.push(vec![p[0], d, p[0].inverse()]);
    for b in &input.b_subset {
        let b = g(b);
        rels.push(vec![z, b, z.inverse(), z, b.inverse(), z.inverse()]);
    }
    let mut last = vec![z];
    for &pi in &p {
        last.push(pi.inverse());
        last.push(pi);
    }
    last.push(z.inverse());
    rels.push(last);

    let mut out = Presentation::new(Kind::SpecialInverse, sigma);
    out.relations = rels.into_iter().map(Relation::relator).collect();
    out.name = Some("M_{S,T}".into());
    MstProvenance::from_input(input).write(&mut out, "mst");
    Ok(out)
}

/// `p_i, z p_i′, p_i a p_i′, z b z′`, in that order.
pub fn ru_generators(mst: &Presentation) -> Result<Vec<Word>> {
    if mst.meta("construction") != Some("mst") {
        return Err(ConstructionError::Provenance("not built by build_mst".into()));
    }
    let prov = MstProvenance::read(mst)?;
    let g = |n: &str| mst.alphabet.letter(n).map_err(ConstructionError::from);
    let p = (0..=prov.k).map(|i| g(&p_name(i))).collect::<Result<Vec<_>>>()?;
    let z = g("z")?;
    let mut out: Vec<Word> = p.iter().map(|&pi| vec![pi]).collect();
    out.extend(p.iter().map(|&pi| vec![z, pi.inverse()]));
    for &pi in &p {
        for a in &prov.a {
            out.push(vec![pi, g(a)?, pi.inverse()]);
        }
    }
    for b in &prov.b {
        let b = g(b)?;
        out.push(vec![z, b, z.inverse()]);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QTruncation {
    /// Word-length bound `L` for families 1 and 2.
    pub l: usize,
    /// Budget handed to the RC engine when certifying `u = v` in `S`.
    pub s_max_len: usize,
    pub s_max_steps: usize,
}

impl QTruncation {
    pub fn new(l: usize) -> Self {
        QTruncation { l, s_max_len: l + 4, s_max_steps: 20_000 }
    }
}

#[derive(Clone, Debug)]
pub struct CertifiedPair {
    pub u: Word,
    pub v: Word,
    pub chain: RChain,
}

#[derive(Clone, Debug)]
pub struct QBuild {
    pub presentation: Presentation,
    /// Chains over `S` backing each family-2 pair.
    pub certified: Vec<CertifiedPair>,
    /// Candidate pairs left out because no chain was found within budget.
    pub uncertified: usize,
}

/// Alphabet of `Q`: `p_i`, `q_i`, then `a^(i)` grouped by `i`, then `b^(z)`.
pub fn q_alphabet(prov: &MstProvenance) -> Result<InvolutiveAlphabet> {
    let mut names: Vec<String> = (0..=prov.k).map(p_name).collect();
    names.extend((0..=prov.k).map(q_name));
    for i in 0..=prov.k {
        names.extend(prov.a.iter().map(|a| decorated_name(a, ZoneTag::Index(i as u32))));
    }
    names.extend(prov.b.iter().map(|b| decorated_name(b, ZoneTag::Z)));
    InvolutiveAlphabet::new(&names).map_err(|e| match e {
        WordError::DuplicateGenerator(n) => ConstructionError::NameClash(n),
        e => e.into(),
    })
}

/// Truncated RC presentation of the right units of `M_{S,T}`.
pub fn build_q(input: &MstInput, t: QTruncation) -> Result<QBuild> {
    let prov = MstProvenance::from_input(input);
    let alphabet = q_alphabet(&prov)?;
    let s = &input.s_pres;
    let g = |n: &str| alphabet.letter(n).expect("q alphabet");
    let deco = |w: &[Letter], i: usize| -> Word {
        w.iter().map(|l| g(&decorated_name(s.alphabet.name(l.generator()), ZoneTag::Index(i as u32)))).collect()
    };
    let k = input.k();
    let gens: Vec<u32> = (0..s.alphabet.len() as u32).collect();
    let words = shortlex_words(&gens, t.l);

    let mut rels = Vec::new();
    for w in &words {
        for i in 1..=k {
            let mut lhs = vec![g(&q_name(i))];
            lhs.extend(deco(w, i));
            lhs.push(g(&p_name(i)));
            let mut rhs = vec![g(&q_name(0))];
            rhs.extend(deco(w, 0));
            rhs.push(g(&p_name(0)));
            rels.push(Relation::new(lhs, rhs));
        }
    }

    // family 2: only pairs the RC engine certifies equal in S
    let mut certified = Vec::new();
    let mut uncertified = 0;
    for (x, u) in words.iter().enumerate() {
        let comp = explore_component(s, u, t.s_max_len, t.s_max_steps)?;
        for v in &words[x + 1..] {
            let reachable = comp.pure.contains(v);
            if !reachable && comp.complete {
                continue;
            }
            match search_chain(s, u, v, t.s_max_len, t.s_max_steps)? {
                SearchOutcome::Found(chain) => {
                    for i in 0..=k {
                        let q = g(&q_name(i));
                        let mut lhs = vec![q];
                        lhs.extend(deco(u, i));
                        let mut rhs = vec![q];
                        rhs.extend(deco(v, i));
                        rels.push(Relation::new(lhs, rhs));
                    }
                    certified.push(CertifiedPair { u: u.clone(), v: v.clone(), chain });
                }
                SearchOutcome::NotFound(_) => uncertified += 1,
            }
        }
    }

    for b in &input.b_subset {
        let bz = g(&decorated_name(b, ZoneTag::Z));
        for i in 0..=k {
            let q = g(&q_name(i));
            let bi = g(&decorated_name(b, ZoneTag::Index(i as u32)));
            rels.push(Relation::new(vec![q, bi], vec![bz, q]));
        }
    }

    let mut p = Presentation::new(Kind::RcMonoid, alphabet);
    p.relations = rels;
    p.name = Some("Q".into());
    prov.write(&mut p, "q");
    p.trunc = vec![
        ("L".into(), t.l.to_string()),
        ("s_max_len".into(), t.s_max_len.to_string()),
        ("s_max_steps".into(), t.s_max_steps.to_string()),
        ("family2_certified".into(), certified.len().to_string()),
        ("family2_uncertified".into(), uncertified.to_string()),
    ];
    Ok(QBuild { presentation: p, certified, uncertified })
}

/// Index of a name of the form `<prefix><digits>`.
fn indexed(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Letterwise `p_i ↦ p_i`, `q_i ↦ z p_i′`, `a^(i) ↦ p_i a p_i′`, `b^(z) ↦ z b z′`.
pub fn psi_substitute(w: &[Letter], q: &InvolutiveAlphabet, mst: &InvolutiveAlphabet) -> Result<Word> {
    let g = |n: &str| mst.letter(n).map_err(|_| ConstructionError::UnknownLetter(n.to_string()));
    let mut out = Word::new();
    for &l in w {
        let name = q.name(l.generator());
        if l.is_inverse() || !q.contains(l) {
            return Err(ConstructionError::UnknownLetter(q.letter_name(l)));
        }
        if let Some((base, tag)) = name.split_once('^') {
            let conj = if tag == "z" {
                g("z")?
            } else if tag.chars().all(|c| c.is_ascii_digit()) {
                g(&format!("p{tag}"))?
            } else {
                return Err(ConstructionError::UnknownLetter(name.to_string()));
            };
            out.extend([conj, g(base)?, conj.inverse()]);
        } else if indexed(name, 'p').is_some() {
            out.push(g(name)?);
        } else if let Some(i) = indexed(name, 'q') {
            out.extend([g("z")?, g(&p_name(i))?.inverse()]);
        } else {
            return Err(ConstructionError::UnknownLetter(name.to_string()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MqwBuild {
    /// `f r_1 = 1, r_i = 1 (i ≥ 2)`.
    pub primary: Presentation,
    /// `r_i = 1`, `a a′ = a′ a = 1`, `t w_j t′ t w_j′ t′ = 1`.
    pub alternate: Presentation,
}

fn group_with_t(group: &Presentation) -> Result<(InvolutiveAlphabet, Letter)> {
    if group.kind != Kind::Group {
        return Err(ConstructionError::WrongKind { expected: "group", found: group.kind });
    }
    if group.relations.is_empty() {
        return Err(ConstructionError::EmptyRelators);
    }
    let mut a = group.alphabet.clone();
    if a.id("t").is_some() {
        return Err(ConstructionError::NameClash("t".into()));
    }
    let t = Letter::pos(a.push("t")?);
    Ok((a, t))
}

fn check_w(group: &Presentation, w: &[Word]) -> Result<()> {
    for x in w {
        if let Some(l) = x.iter().find(|l| !group.alphabet.contains(**l)) {
            return Err(ConstructionError::UnknownLetter(format!("#{}", l.generator())));
        }
    }
    Ok(())
}

/// `e(u_1, …, u_m) = u_1 u_1′ ⋯ u_m u_m′`.
pub fn e_word(parts: &[Word]) -> Word {
    let mut out = Word::new();
    for u in parts {
        out.extend_from_slice(u);
        out.extend(invert_word(u));
    }
    out
}

pub fn build_mqw(group: &Presentation, w: &[Word]) -> Result<MqwBuild> {
    let (alphabet, t) = group_with_t(group)?;
    check_w(group, w)?;
    let relators = group.relators();
    let n = group.alphabet.len() as u32;
    let conj = |x: &Word| {
        let mut c = vec![t];
        c.extend_from_slice(x);
        c.push(t.inverse());
        c
    };

    let mut parts: Vec<Word> = (0..n).map(|a| vec![Letter::pos(a)]).collect();
    parts.extend(w.iter().map(conj));
    parts.extend((0..n).map(|a| vec![Letter::neg(a)]));
    let mut first = e_word(&parts);
    first.extend_from_slice(&relators[0]);

    let mut primary = Presentation::new(Kind::SpecialInverse, alphabet.clone());
    primary.relations.push(Relation::relator(first));
    primary.relations.extend(relators[1..].iter().cloned().map(Relation::relator));
    primary.name = Some("M_{Q,W}".into());

    let mut alternate = Presentation::new(Kind::SpecialInverse, alphabet);
    alternate.relations.extend(relators.iter().cloned().map(Relation::relator));
    for a in 0..n {
        alternate.relations.push(Relation::relator(vec![Letter::pos(a), Letter::neg(a)]));
        alternate.relations.push(Relation::relator(vec![Letter::neg(a), Letter::pos(a)]));
    }
    for x in w {
        let mut r = conj(x);
        r.extend(conj(&invert_word(x)));
        alternate.relations.push(Relation::relator(r));
    }
    alternate.name = Some("M_{Q,W} (alternate)".into());
    for p in [&mut primary, &mut alternate] {
        p.set_meta("construction", "mqw");
        for (j, x) in w.iter().enumerate() {
            let enc = encode_word(&p.alphabet, x);
            p.set_meta(&format!("w{}", j + 1), enc);
        }
    }
    Ok(MqwBuild { primary, alternate })
}

/// `R_{Q,W}` over `Ā ∪ B ∪ {t}`; formal inverses of `A` act as generators.
pub fn build_rqw(group: &Presentation, w: &[Word]) -> Result<Presentation> {
    let (mut alphabet, t) = group_with_t(group)?;
    check_w(group, w)?;
    let n = group.alphabet.len() as u32;
    let mut b = Vec::new();
    for j in 1..=w.len() {
        let name = format!("b{j}");
        if alphabet.id(&name).is_some() {
            return Err(ConstructionError::NameClash(name));
        }
        b.push(Letter::pos(alphabet.push(&name)?));
    }
    let mut p = Presentation::new(Kind::RcMonoid, alphabet);
    p.set_meta(META_INVERSE_LETTERS, "generators");
    p.set_meta("construction", "rqw");
    for a in 0..n {
        p.relations.push(Relation::new(vec![Letter::pos(a), Letter::neg(a)], vec![]));
        p.relations.push(Relation::new(vec![Letter::neg(a), Letter::pos(a)], vec![]));
    }
    p.relations.extend(group.relators().into_iter().map(|r| Relation::new(r, vec![])));
    for (x, &bj) in w.iter().zip(&b) {
        let mut lhs = vec![t];
        lhs.extend_from_slice(x);
        p.relations.push(Relation::new(lhs, vec![bj, t]));
    }
    for (j, x) in w.iter().enumerate() {
        let enc = encode_word(&p.alphabet, x);
        p.set_meta(&format!("b{}", j + 1), enc);
    }
    p.name = Some("R_{Q,W}".into());
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeReport {
    pub ok: bool,
    /// Relations whose substituted `lhs′·rhs` is neither `ε` nor a pure `A`-relator.
    pub failing: Vec<usize>,
}

/// Eliminates `b_j ↦ t w_j t′` and checks only the `r_i` survive, so the
/// group image is `K_Q ∗ FG(t)`.
pub fn tietze_check_rqw(p: &Presentation) -> Result<TietzeReport> {
    if p.meta("construction") != Some("rqw") {
        return Err(ConstructionError::Provenance("not built by build_rqw".into()));
    }
    let t = p.alphabet.letter("t")?;
    let mut subst: Vec<Option<Word>> = vec![None; p.alphabet.len()];
    let mut j = 1;
    while let Some(enc) = p.meta(&format!("b{j}")) {
        let bj = p.alphabet.letter(&format!("b{j}"))?;
        let mut img = vec![t];
        img.extend(decode_word(&p.alphabet, enc)?);
        img.push(t.inverse());
        subst[bj.generator() as usize] = Some(img);
        j += 1;
    }
    let expand = |w: &[Letter]| -> Word {
        let mut out = Word::new();
        for &l in w {
            match &subst[l.generator() as usize] {
                Some(img) if l.is_inverse() => out.extend(invert_word(img)),
                Some(img) => out.extend_from_slice(img),
                None => out.push(l),
            }
        }
        out
    };
    let mut failing = Vec::new();
    for (i, r) in p.relations.iter().enumerate() {
        let mut w = invert_word(&expand(&r.lhs));
        w.extend(expand(&r.rhs));
        let reduced = free_reduce(&w);
        let kept_relator = r.rhs.is_empty()
            && r.lhs.iter().all(|l| l.generator() != t.generator() && subst[l.generator() as usize].is_none());
        if !reduced.is_empty() && !kept_relator {
            failing.push(i);
        }
    }
    Ok(TietzeReport { ok: failing.is_empty(), failing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::index_decorate;

    fn names(p: &Presentation, ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| p.alphabet.format(w)).collect()
    }

    #[test]
    fn mst_example() {
        let m = build_mst(&worked_example()).unwrap();
        assert_eq!(m.alphabet.names(), ["a", "p0", "p1", "z", "d"]);
        let rel = names(&m, &m.relators());
        assert_eq!(
            rel,
            [
                "p0 a p0' p0 a' p0'",
                "p1 a p1' p1 a' p1'",
                "p1 a d' a' p1'",
                "p0 d p0'",
                "z p0' p0 p1' p1 z'"
            ]
        );
        let mb = build_mst(&worked_example_with_b()).unwrap();
        assert!(names(&mb, &mb.relators()).contains(&"z a z' z a' z'".to_string()));
        let s = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a", "a")]).unwrap();
        assert!(matches!(MstInput::new(s, &["c"]), Err(ConstructionError::BNotInA(_))));
        let clash = Presentation::from_strs(Kind::RcMonoid, &["z"], &[("z", "z")]).unwrap();
        assert!(build_mst(&MstInput::new(clash, &[]).unwrap()).is_err());
    }

    #[test]
    fn ru_generator_list() {
        let m = build_mst(&worked_example()).unwrap();
        let gens = ru_generators(&m).unwrap();
        assert_eq!(names(&m, &gens), ["p0", "p1", "z p0'", "z p1'", "p0 a p0'", "p1 a p1'"]);
        let mb = build_mst(&worked_example_with_b()).unwrap();
        let gb = ru_generators(&mb).unwrap();
        assert_eq!(gb.len(), 2 + 2 + 2 + 1);
        assert_eq!(mb.alphabet.format(gb.last().unwrap()), "z a z'");
    }

    #[test]
    fn q_truncations() {
        let q = build_q(&worked_example(), QTruncation::new(2)).unwrap().presentation;
        let rels: Vec<String> = q
            .relations
            .iter()
            .map(|r| format!("{} = {}", q.alphabet.format(&r.lhs), q.alphabet.format(&r.rhs)))
            .collect();
        assert_eq!(rels, ["q1 p1 = q0 p0", "q1 a^1 p1 = q0 a^0 p0", "q1 a^1 a^1 p1 = q0 a^0 a^0 p0"]);
        assert_eq!(q.trunc_value("L"), Some("2"));
        let q0 = build_q(&worked_example(), QTruncation::new(0)).unwrap().presentation;
        assert_eq!(q0.relations.len(), 1);
        let qb = build_q(&worked_example_with_b(), QTruncation::new(0)).unwrap().presentation;
        let tail: Vec<String> =
            qb.relations[1..].iter().map(|r| format!("{} = {}", qb.alphabet.format(&r.lhs), qb.alphabet.format(&r.rhs))).collect();
        assert_eq!(tail, ["q0 a^0 = a^z q0", "q1 a^1 = a^z q1"]);
    }

    #[test]
    fn q_family_two_certified() {
        // S = ⟨a, b | ab = ba⟩: the pair (ab, ba) must be certified.
        let s = Presentation::from_strs(Kind::RcMonoid, &["a", "b"], &[("a b", "b a")]).unwrap();
        let qb = build_q(&MstInput::new(s, &[]).unwrap(), QTruncation::new(2)).unwrap();
        assert_eq!(qb.certified.len(), 1);
        let q = &qb.presentation;
        assert!(q.relations.iter().any(|r| q.alphabet.format(&r.lhs) == "q0 a^0 b^0" && q.alphabet.format(&r.rhs) == "q0 b^0 a^0"));
        let back = MstProvenance::read(q).unwrap().input().unwrap();
        assert_eq!(back.s_pres.relations, MstProvenance::read(q).unwrap().input().unwrap().s_pres.relations);
        assert_eq!(back.k(), 1);
    }

    #[test]
    fn q_monotone() {
        let s = Presentation::from_strs(Kind::RcMonoid, &["a", "b"], &[("a b", "b a")]).unwrap();
        let input = MstInput::new(s, &["a"]).unwrap();
        let small = build_q(&input, QTruncation::new(1)).unwrap().presentation;
        let big = build_q(&input, QTruncation::new(2)).unwrap().presentation;
        assert!(small.relations.iter().all(|r| big.relations.contains(r)));
    }

    #[test]
    fn psi_images() {
        let input = worked_example_with_b();
        let m = build_mst(&input).unwrap();
        let q = build_q(&input, QTruncation::new(0)).unwrap().presentation;
        let psi = |s: &str| m.alphabet.format(&psi_substitute(&q.alphabet.parse(s).unwrap(), &q.alphabet, &m.alphabet).unwrap());
        assert_eq!(psi("q0"), "z p0'");
        assert_eq!(psi("a^1"), "p1 a p1'");
        assert_eq!(psi("a^z"), "z a z'");
        assert_eq!(psi("p1"), "p1");
        assert_eq!(psi("1"), "1");
        // w^(i)ψ = p_i w p_i′ after free reduction
        let s = &input.s_pres;
        let w = s.alphabet.parse("a a").unwrap();
        let wi = index_decorate(&w, &s.alphabet, ZoneTag::Index(1), &q.alphabet).unwrap();
        let img = psi_substitute(&wi, &q.alphabet, &m.alphabet).unwrap();
        assert_eq!(m.alphabet.format(&free_reduce(&img)), "p1 a a p1'");
    }

    fn cyclic_group() -> Presentation {
        Presentation::from_strs(Kind::Group, &["a"], &[("a a a", "1")]).unwrap()
    }

    #[test]
    fn mqw_forms() {
        let g = cyclic_group();
        let w = vec![g.alphabet.parse("a").unwrap()];
        let b = build_mqw(&g, &w).unwrap();
        assert_eq!(b.primary.relations.len(), 1);
        let f = b.primary.alphabet.format(&b.primary.relations[0].lhs);
        assert_eq!(f, "a a' t a t' t a' t' a' a a a a");
        let alt: Vec<String> = b.alternate.relators().iter().map(|r| b.alternate.alphabet.format(r)).collect();
        assert!(alt.contains(&"t a t' t a' t'".to_string()));
        assert!(alt.contains(&"a a'".to_string()) && alt.contains(&"a' a".to_string()));
        let empty = Presentation::from_strs(Kind::Group, &["a"], &[]).unwrap();
        assert!(matches!(build_mqw(&empty, &w), Err(ConstructionError::EmptyRelators)));
    }

    #[test]
    fn rqw_and_tietze() {
        let g = cyclic_group();
        let w = vec![g.alphabet.parse("a").unwrap()];
        let mut r = build_rqw(&g, &w).unwrap();
        let text: Vec<String> =
            r.relations.iter().map(|x| format!("{} = {}", r.alphabet.format(&x.lhs), r.alphabet.format(&x.rhs))).collect();
        assert_eq!(text, ["a a' = 1", "a' a = 1", "a a a = 1", "t a = b1 t"]);
        assert!(tietze_check_rqw(&r).unwrap().ok);
        // round trip through the file format keeps the b ↦ w bookkeeping
        let back = crate::presentations::parse_presentation(&r.to_text()).unwrap();
        assert!(tietze_check_rqw(&back).unwrap().ok);
        let b1 = r.alphabet.letter("b1").unwrap();
        r.relations[3].rhs = vec![b1];
        assert_eq!(tietze_check_rqw(&r).unwrap().failing, vec![3]);
    }

    #[test]
    fn normalisation_adds_fresh_generators() {
        let s = Presentation::from_strs(Kind::RcMonoid, &["a", "b1"], &[("a", "a")]).unwrap();
        let w = vec![s.alphabet.parse("a a").unwrap()];
        let input = MstInput::with_generating_words(s, &w).unwrap();
        assert_eq!(input.b_subset, ["b2"]);
        assert_eq!(input.k(), 2);
    }
}
