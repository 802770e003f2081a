use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use rcinv::boundary::{ball_cover, boundary_width, check_cover_bounds};
use rcinv::graphs::{parse_graph, LabeledDigraph};
use rcinv::presentations::{parse_presentation, Kind, Presentation};
use rcinv::rc::{mr_alphabet, mr_equal, mr_normal_form, mr_presentation, search_chain, ChainCertificate};
use rcinv::stephen::{is_right_unit, Budget};
use rcinv::words::{fim_equal, free_reduce, invert_word, InvolutiveAlphabet, Letter, Word};
use rcinv::zone_graphs::FiniteTable;

fn letters(gens: u32, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)), 0..=max)
}

fn positive(gens: u32, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens).prop_map(Letter::pos), 0..=max)
}

fn graph() -> impl Strategy<Value = (usize, Vec<(u32, u32)>, Vec<bool>)> {
    (2usize..=10).prop_flat_map(|n| {
        let tree = (1..n).map(|v| (0..v as u32).prop_map(move |p| (p, v as u32))).collect::<Vec<_>>();
        let extra = prop::collection::vec((0..n as u32, 0..n as u32), 0..=n);
        let subset = prop::collection::vec(any::<bool>(), n);
        (Just(n), tree, extra, subset).prop_map(|(n, mut t, e, s)| {
            t.extend(e.into_iter().filter(|(a, b)| a != b));
            (n, t, s)
        })
    })
}

fn build(n: usize, edges: &[(u32, u32)]) -> LabeledDigraph {
    let a = Arc::new(InvolutiveAlphabet::new(&["x"]).unwrap());
    let mut g = LabeledDigraph::with_vertices(a, n);
    for &(s, d) in edges {
        g.add_edge(s, 0, d);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduction_is_idempotent(w in letters(3, 12)) {
        let r = free_reduce(&w);
        prop_assert_eq!(free_reduce(&r), r.clone());
        let mut ww = w.clone();
        ww.extend(invert_word(&w));
        prop_assert!(free_reduce(&ww).is_empty());
    }

    #[test]
    fn inverse_monoid_identities(u in letters(2, 5), v in letters(2, 5)) {
        // w w′ w = w and idempotents commute
        let mut w3 = u.clone();
        w3.extend(invert_word(&u));
        w3.extend(u.iter().copied());
        prop_assert!(fim_equal(&w3, &u));
        let e = |x: &Word| -> Word { let mut y = x.clone(); y.extend(invert_word(x)); y };
        let (mut ef, mut fe) = (e(&u), e(&v));
        ef.extend(e(&v));
        fe.extend(e(&u));
        prop_assert!(fim_equal(&ef, &fe));
    }

    #[test]
    fn mr_oracle_is_an_equivalence(u in positive(6, 7), v in positive(6, 7), r in 0usize..3) {
        prop_assert!(mr_equal(r, &u, &u).unwrap());
        prop_assert_eq!(mr_equal(r, &u, &v).unwrap(), mr_equal(r, &v, &u).unwrap());
        let nf = mr_normal_form(Some(r), &u).unwrap();
        prop_assert_eq!(mr_normal_form(Some(r), &nf).unwrap(), nf.clone());
        prop_assert!(mr_equal(r, &u, &nf).unwrap());
    }

    #[test]
    fn stephen_yes_is_monotone(w in letters(2, 4)) {
        let p = Presentation::from_strs(Kind::SpecialInverse, &["a", "b"], &[("a b", "1")]).unwrap();
        let small = is_right_unit(&p, &w, Budget::new(2, 5_000)).unwrap();
        let big = is_right_unit(&p, &w, Budget::new(3, 5_000)).unwrap();
        prop_assert!(!small.is_yes() || big.is_yes());
    }

    #[test]
    fn cover_bound_and_width_replay((n, edges, mask) in graph(), r in 0u32..=2) {
        let g = build(n, &edges);
        let mut delta: BTreeSet<u32> = (0..n as u32).filter(|&v| mask[v as usize]).collect();
        if delta.is_empty() {
            delta.insert(0);
        }
        let rep = check_cover_bounds(&g, &delta, r);
        prop_assert!(rep.holds && rep.holds_excursion);
        let cover = ball_cover(&g, &delta, r);
        prop_assert!(delta.is_subset(&cover));
        for p in boundary_width(&g, &cover).pairs {
            prop_assert!(rcinv::boundary::replay_pair(&g, &cover, &p));
        }
    }

    #[test]
    fn graph_text_round_trip((n, edges, _m) in graph()) {
        let g = build(n, &edges);
        let back = parse_graph(&g.to_text()).unwrap();
        prop_assert_eq!(back.num_vertices(), n);
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn finite_cyclic_tables(n in 1usize..7, x in 0u32..7, y in 0u32..7) {
        let t = FiniteTable::cyclic(n);
        prop_assert!(t.check().is_ok());
        let (x, y) = (x % n as u32, y % n as u32);
        prop_assert_eq!(t.product(x, y), (x + y) % n as u32);
    }
}

#[test]
fn presentation_text_round_trip() {
    for r in 0..3 {
        let p = mr_presentation(r);
        assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
    }
}

#[test]
fn certificates_survive_json() {
    let p = mr_presentation(2);
    let a = mr_alphabet();
    let u = a.parse("q0 a0 a0 p0 a1").unwrap();
    let v = a.parse("q1 a1 a1 p1 a1").unwrap();
    let found = search_chain(&p, &u, &v, 12, 100_000).unwrap();
    let chain = found.chain().expect("equal in M_2");
    let cert = ChainCertificate::from_chain(&p, chain);
    let text = serde_json::to_string(&cert).unwrap();
    let back: ChainCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(&back.to_chain(&p).unwrap(), chain);
}
