//! One pass/fail line per acceptance criterion, each with its time limit.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rcinv::boundary::{
    a4_model, boundary_width, check_cover_bounds, i3_rank2_model, lk_generates_pi1, qi_r1_check, s3_model,
    z2_free_x_ball, RClassModel,
};
use rcinv::constructions::{build_mst, build_q, worked_example, worked_example_with_b, psi_substitute, MstInput, QTruncation};
use rcinv::graphs::LabeledDigraph;
use rcinv::presentations::{Kind, Presentation};
use rcinv::rc::{mr_equal, mr_presentation, search_chain, validate_chain, Explorer};
use rcinv::stephen::{approximate, equal_right_units, Budget};
use rcinv::subgroup::{build_coset_system, verify_claims};
use rcinv::words::{shortlex_words, InvolutiveAlphabet, Letter, Word};
use rcinv::zone_graphs::{
    check_gamma_prime, check_omega, completeness_margin, omega_ball, run_gamma_prime, FiniteTable, OmegaBall,
    OmegaChecks, SOracle,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn mr_word(s: &str) -> Word {
    rcinv::rc::mr_alphabet().parse(s).unwrap()
}

fn sep_pair(m: usize) -> (Word, Word) {
    let a0 = " a0".repeat(m);
    let a1 = " a1".repeat(m);
    (mr_word(&format!("q0{a0} p0")), mr_word(&format!("q1{a1} p1")))
}

/// `q0 a0^m p0 = q1 a1^m p1` in `M_r` exactly when `m ≤ r`.
fn c1_mr_separation() -> Outcome {
    let mut bad = Vec::new();
    let mut found = 0;
    for r in 0..=3 {
        let p = mr_presentation(r);
        for m in 0..=r + 1 {
            let (u, v) = sep_pair(m);
            let expect = m <= r;
            if mr_equal(r, &u, &v).unwrap() != expect {
                bad.push(format!("mr_equal r={r} m={m}"));
            }
            let s = search_chain(&p, &u, &v, 12, 100_000).unwrap();
            match s.chain() {
                Some(c) => {
                    found += 1;
                    let val = validate_chain(&p, c);
                    if !expect || !val.valid || c.words.first() != Some(&u) || c.words.last() != Some(&v) {
                        bad.push(format!("chain r={r} m={m}"));
                    }
                }
                None if expect => bad.push(format!("no chain r={r} m={m}")),
                None => {}
            }
        }
    }
    outcome(bad.is_empty(), format!("{found} chains found, 4 separations confirmed; failures {bad:?}"))
}

/// Zero false positives of the chain search against the exact oracle.
fn c2_oracle_search_agreement() -> Outcome {
    let p = mr_presentation(1);
    let gens: Vec<u32> = (0..6).collect();
    let words = shortlex_words(&gens, 6);
    // Components of the bounded step relation, each explored once; every
    // pair inside a component is a pair the search finds.
    let mut ex = Explorer::new(&p).unwrap();
    let mut done: HashSet<Word> = HashSet::new();
    let (mut components, mut pairs, mut false_pos, mut incomplete) = (0usize, 0usize, 0usize, 0usize);
    for u in &words {
        if done.contains(u) {
            continue;
        }
        let e = ex.explore(u, 8, 1_000_000).unwrap();
        components += 1;
        incomplete += usize::from(!e.complete);
        let short: Vec<&Word> = e.pure.iter().filter(|w| w.len() <= 6).collect();
        pairs += short.len() * short.len();
        for v in &short {
            if !mr_equal(1, u, v).unwrap() {
                false_pos += 1;
            }
            done.insert((*v).clone());
        }
    }
    // Direct searches at the larger budget on seeded pairs, biased towards
    // words sharing their first and last letters.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut direct = 0;
    for _ in 0..300 {
        let u = words.choose(&mut rng).unwrap();
        let v = words.choose(&mut rng).unwrap();
        if u.first().map(|l| l.generator() >= 4) != v.first().map(|l| l.generator() >= 4) {
            continue;
        }
        direct += 1;
        if let Some(c) = search_chain(&p, u, v, 12, 20_000).unwrap().chain() {
            if !validate_chain(&p, c).valid || !mr_equal(1, u, v).unwrap() {
                false_pos += 1;
            }
        }
    }
    outcome(
        false_pos == 0 && incomplete == 0,
        format!(
            "{} words, {components} components, {pairs} found pairs, {direct} direct searches, {false_pos} false positives",
            words.len()
        ),
    )
}

/// Stephen on `Inv⟨a | a^n = 1⟩` stabilises on an `n`-cycle.
fn c3_stephen_cycles() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let rel = vec!["a"; n].join(" ");
        let p = Presentation::from_strs(Kind::SpecialInverse, &["a"], &[(&rel, "1")]).unwrap();
        let t = Instant::now();
        let approx = approximate(&p, &[], Budget::new(5, 10_000)).unwrap();
        let g = &approx.graph;
        let a = Letter::pos(0);
        let root = approx.root();
        // oracle: the a-edges form a permutation with a single orbit of size n
        let mut orbit = vec![root];
        let mut cur = root;
        while let Some(next) = g.step(cur, a) {
            if next == root {
                break;
            }
            orbit.push(next);
            cur = next;
        }
        let perm = (0..g.num_vertices() as u32).all(|v| g.step(v, a).is_some() && g.step(v, a.inverse()).is_some());
        let good = approx.stabilized
            && approx.rounds_completed <= 5
            && g.num_vertices() == n
            && g.num_edges() == n
            && orbit.len() == n
            && perm
            && t.elapsed() < Duration::from_secs(1);
        ok &= good;
        notes.push(format!("n={n}: {} vertices in {} rounds", g.num_vertices(), approx.rounds_completed));
    }
    outcome(ok, notes.join(", "))
}

/// Bi-determinism and relator readability recomputed directly on the graph.
fn omega_direct(ball: &OmegaBall) -> (usize, usize) {
    let g = &ball.graph;
    let mut seen_out = HashSet::new();
    let mut seen_in = HashSet::new();
    let mut bidet = 0;
    for (s, l, d) in g.edges() {
        bidet += usize::from(!seen_out.insert((s, l)));
        bidet += usize::from(!seen_in.insert((d, l)));
    }
    let mut relators = 0;
    for r in ball.mst.relators() {
        for v in 0..g.num_vertices() as u32 {
            if ball.depth[v as usize] + (r.len() as u32).div_ceil(2) <= ball.radius && g.read_end(v, &r) != Some(v) {
                relators += 1;
            }
        }
    }
    (bidet, relators)
}

fn c4_omega() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let z2 = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a a", "1")]).unwrap();
    let z2_input = MstInput::new(z2, &[]).unwrap();
    let worked = worked_example();
    let cases: [(&str, &MstInput, SOracle); 2] = [
        ("worked", &worked, SOracle::free_monoid(&worked).unwrap()),
        ("Z/2", &z2_input, SOracle::finite_table(&z2_input, FiniteTable::cyclic(2)).unwrap()),
    ];
    for (name, input, mut s) in cases {
        let ball = omega_ball(input, &mut s, 6).unwrap();
        let rep = check_omega(&ball, OmegaChecks::ALL);
        let (bidet, relators) = omega_direct(&ball);
        ok &= rep.passed() && bidet == 0 && relators == 0 && rep.relator_vertices_checked > 0;
        notes.push(format!(
            "{name}: {} vertices, {} relator sites, violations {}/{}/{}",
            rep.vertices,
            rep.relator_vertices_checked,
            rep.bidet_violations.len() + bidet,
            rep.relator_failures.len() + relators,
            rep.zone_violations.len() + rep.incoming_p_violations.len()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn c5_gamma_prime() -> Outcome {
    let input = worked_example();
    let mut run = run_gamma_prime(&input, SOracle::free_monoid(&input).unwrap(), 8).unwrap();
    let margin = completeness_margin(2);
    let rep = check_gamma_prime(&run.gamma, &run.mst, margin, &run.types);
    let clean = rep.passed() && rep.interior > 0;

    // fault 1: a second z-edge out of the root
    let z = run.gamma.sigma.id("z").unwrap();
    let zt = run.gamma.out(0, z).unwrap();
    let other = run.gamma.out(zt, 0).unwrap();
    run.gamma.add_edge(0, z, other);
    let det = check_gamma_prime(&run.gamma, &run.mst, margin, &run.types).determinism_failures.len();
    // fault 2: the z-edge deleted
    run.gamma.remove_edge(0, z);
    let walk = check_gamma_prime(&run.gamma, &run.mst, margin, &run.types).closed_walk_failures.len();
    outcome(
        clean && det > 0 && walk > 0,
        format!(
            "{} vertices, {} interior, {} complete, clean pass {clean}; injected faults caught: determinism {det}, closed walks {walk}",
            rep.vertices, rep.interior, rep.complete
        ),
    )
}

/// Test-side width oracle: all-pairs distances, and pairs joined through a
/// component of the complement (or directly by an edge).
fn width_oracle(n: usize, edges: &[(u32, u32)], x: &BTreeSet<u32>) -> (u32, u32) {
    const INF: u32 = u32::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        let (a, b) = (a as usize, b as usize);
        if a != b {
            d[a][b] = 1;
            d[b][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], v: usize) -> usize {
        if c[v] != v {
            let r = find(c, c[v]);
            c[v] = r;
        }
        c[v]
    }
    for &(a, b) in edges {
        if !x.contains(&a) && !x.contains(&b) {
            let (ra, rb) = (find(&mut comp, a as usize), find(&mut comp, b as usize));
            comp[ra] = rb;
        }
    }
    let mut touches: BTreeMap<usize, BTreeSet<u32>> = BTreeMap::new();
    let (mut literal, mut excursion) = (0, 0);
    for &(a, b) in edges {
        for (p, q) in [(a, b), (b, a)] {
            if x.contains(&p) && x.contains(&q) {
                literal = literal.max(d[p as usize][q as usize]);
            }
            if x.contains(&p) && !x.contains(&q) {
                let c = find(&mut comp, q as usize);
                touches.entry(c).or_default().insert(p);
            }
        }
    }
    for ends in touches.values() {
        for &p in ends {
            for &q in ends {
                excursion = excursion.max(d[p as usize][q as usize]);
            }
        }
    }
    (literal.max(excursion), excursion)
}

fn random_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(u32, u32)>) {
    let n = rng.gen_range(2..=12);
    let mut edges = Vec::new();
    for v in 1..n as u32 {
        edges.push((rng.gen_range(0..v), v));
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
        if a != b {
            edges.push((a, b));
        }
    }
    (n, edges)
}

fn c6_boundary_bounds() -> Outcome {
    let alphabet = Arc::new(InvolutiveAlphabet::new(&["x"]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut checked, mut mismatches, mut literal_fail, mut excursion_fail) = (0, 0, 0, 0);
    for _ in 0..100 {
        let (n, edges) = random_graph(&mut rng);
        let mut g = LabeledDigraph::with_vertices(alphabet.clone(), n);
        for &(a, b) in &edges {
            g.add_edge(a, 0, b);
        }
        let size = rng.gen_range(1..=n);
        let mut verts: Vec<u32> = (0..n as u32).collect();
        verts.shuffle(&mut rng);
        let delta: BTreeSet<u32> = verts[..size].iter().copied().collect();
        let base = width_oracle(n, &edges, &delta);
        let lib = boundary_width(&g, &delta);
        mismatches += usize::from((lib.width, lib.excursion_width) != base);
        for r in 0..=2u32 {
            checked += 1;
            let rep = check_cover_bounds(&g, &delta, r);
            let cover = rcinv::boundary::ball_cover(&g, &delta, r);
            let cw = width_oracle(n, &edges, &cover);
            mismatches += usize::from((rep.width_r, rep.width_r_excursion) != cw || (rep.k, rep.k_excursion) != base);
            literal_fail += usize::from(cw.0 > 2 * r + base.0);
            excursion_fail += usize::from(cw.1 > 2 * r + base.1);
        }
    }
    let (ball, factor) = z2_free_x_ball(4);
    let fp = boundary_width(&ball, &factor);
    let ok = mismatches == 0 && literal_fail == 0 && excursion_fail == 0 && fp.excursion_width == 0;
    outcome(
        ok,
        format!(
            "{checked} (graph, Δ, r) cases, oracle mismatches {mismatches}, bound failures {literal_fail}/{excursion_fail}; free-product factor on {} vertices: excursion width {} (literal {})",
            ball.num_vertices(),
            fp.excursion_width,
            fp.width
        ),
    )
}

fn c7_unit_metric() -> Outcome {
    let z2 = Presentation::from_strs(Kind::SpecialInverse, &["a"], &[("a a", "1")]).unwrap();
    let exact = qi_r1_check(&z2, 4, 3, 1000).unwrap();
    let mst = build_mst(&worked_example()).unwrap();
    let ball = qi_r1_check(&mst, 5, 5, 500_000).unwrap();
    let ok = exact.stabilized && exact.passed() && ball.passed() && ball.interior > 0 && ball.lambda == 6;
    outcome(
        ok,
        format!(
            "Inv<a|aa=1>: {} pairs, λ={}; worked M_ST: {} vertices, {} interior, {} pairs, λ={}, failures {}/{}",
            exact.pairs_checked,
            exact.lambda,
            ball.vertices,
            ball.interior,
            ball.pairs_checked,
            ball.lambda,
            ball.upper_failures.len(),
            ball.lower_failures.len()
        ),
    )
}

fn c8_psi_and_t_equiv() -> Outcome {
    let input = worked_example();
    let m = build_mst(&input).unwrap();
    let q = build_q(&input, QTruncation::new(2)).unwrap().presentation;
    let budget = Budget::new(4, 200_000);
    let mut psi_yes = 0;
    for r in &q.relations {
        let u = psi_substitute(&r.lhs, &q.alphabet, &m.alphabet).unwrap();
        let v = psi_substitute(&r.rhs, &q.alphabet, &m.alphabet).unwrap();
        psi_yes += usize::from(equal_right_units(&m, &u, &v, budget).unwrap().is_yes());
    }

    // t-equiv on B = {a}: T is free on a, so u = v in T iff u ≡ v.
    let input_b = worked_example_with_b();
    let mb = build_mst(&input_b).unwrap();
    let mut s = SOracle::free_monoid(&input_b).unwrap();
    let omega = omega_ball(&input_b, &mut s, 6).unwrap();
    let root = omega.graph.root().unwrap();
    let powers = ["1", "a", "a a"];
    let mut t_ok = 0;
    for u in powers {
        for v in powers {
            let wu = mb.alphabet.parse(&format!("z {u} z'")).unwrap();
            let wv = mb.alphabet.parse(&format!("z {v} z'")).unwrap();
            let stephen = equal_right_units(&mb, &wu, &wv, budget).unwrap().is_yes();
            let (eu, ev) = (omega.graph.read_end(root, &wu), omega.graph.read_end(root, &wv));
            let same = eu.is_some() && eu == ev;
            t_ok += usize::from(stephen == (u == v) && same == (u == v));
        }
    }
    outcome(
        psi_yes == q.relations.len() && t_ok == 9,
        format!("{psi_yes}/{} ψ-images certified; t-equiv {t_ok}/9 pairs agree both ways", q.relations.len()),
    )
}

fn c9_subgroup() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let models: [(&str, RClassModel); 3] = [("S3", s3_model()), ("A4", a4_model()), ("I3 rank 2", i3_rank2_model())];
    for (name, m) in models {
        let cs = build_coset_system(&m, &BTreeSet::from([1])).unwrap();
        let g = &cs.model.graph;
        // replays done here, not by the library
        let replay = cs.boundary_words.iter().all(|(&(x, y), w)| g.read_end(x, w) == Some(y))
            && cs.representatives.iter().all(|(j, r)| g.read_end(cs.e(), r).map(|v| m.coset[v as usize]) == Some(*j));
        let rep = verify_claims(&cs, 50, 9);
        let sampled = rep.claim1.checked == 50 && rep.claim2.checked == 50 && rep.retraction.checked == 50;
        ok &= replay && rep.passed() && sampled && m.graph.num_vertices() <= 30;
        notes.push(format!(
            "{name}: {} vertices, claim1/claim2/retraction {}/{}/{} samples, failures {}",
            m.graph.num_vertices(),
            rep.claim1.checked,
            rep.claim2.checked,
            rep.retraction.checked,
            rep.sections().iter().map(|(_, c)| c.failures.len()).sum::<usize>()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn cycle(n: usize) -> LabeledDigraph {
    let alphabet = Arc::new(InvolutiveAlphabet::new(&["x"]).unwrap());
    let mut g = LabeledDigraph::with_vertices(alphabet, n);
    for i in 0..n as u32 {
        g.add_edge(i, 0, (i + 1) % n as u32);
    }
    g.set_root(Some(0));
    g
}

/// Girth of a graph whose cycle space has rank one: the shortest
/// non-trivial reduced closed walk.
fn girth_oracle(g: &LabeledDigraph) -> u32 {
    let edges = g.edges();
    let mut best = u32::MAX;
    for (i, &(s, _, d)) in edges.iter().enumerate() {
        if s == d {
            return 1;
        }
        // BFS from s to d without edge i
        let n = g.num_vertices();
        let mut dist = vec![u32::MAX; n];
        dist[s as usize] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for (j, &(a, _, b)) in edges.iter().enumerate() {
                if j == i {
                    continue;
                }
                for (p, q) in [(a, b), (b, a)] {
                    if p == v && dist[q as usize] == u32::MAX {
                        dist[q as usize] = dist[v as usize] + 1;
                        queue.push_back(q);
                    }
                }
            }
        }
        if dist[d as usize] != u32::MAX {
            best = best.min(dist[d as usize] + 1);
        }
    }
    best
}

fn c10_pi1() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 1..=8 {
        let g = cycle(n);
        let girth = girth_oracle(&g);
        for k in 1..=n as u32 + 2 {
            checked += 1;
            match lk_generates_pi1(&g, 0, k) {
                Ok(got) if got == (k >= girth) && girth == n as u32 => {}
                other => bad.push(format!("C{n} k={k}: {other:?}")),
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (n, k) cases; mismatches {bad:?}"))
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "M_r separation", 10, c1_mr_separation),
        (2, "oracle/search agreement", 60, c2_oracle_search_agreement),
        (3, "Stephen stabilization", 3, c3_stephen_cycles),
        (4, "Omega checks", 30, c4_omega),
        (5, "Gamma' properties", 60, c5_gamma_prime),
        (6, "boundary-width bounds", 30, c6_boundary_bounds),
        (7, "right-unit metric constants", 120, c7_unit_metric),
        (8, "psi soundness and t-equiv", 120, c8_psi_and_t_equiv),
        (9, "subgroup kernel", 30, c9_subgroup),
        (10, "L(k)/pi_1 criterion", 5, c10_pi1),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let t = Instant::now();
        let o = run();
        let secs = t.elapsed().as_secs_f64();
        let pass = o.ok && secs < limit as f64;
        println!(
            "criterion {id:2} {name:28} {}  [{secs:.2}s / {limit}s]  {}",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
