//! Browser demo: three operations exported to JavaScript, each returning a
//! JSON string. The `*_json` functions are plain Rust so they run natively too.

use serde_json::json;
use wasm_bindgen::prelude::*;

use rcinv::constructions::{build_mst, worked_example, MstInput};
use rcinv::presentations::{parse_presentation, Kind, Presentation};
use rcinv::rc::{chain_alphabet, mr_alphabet, mr_equal, mr_normal_form, mr_presentation, search_chain};
use rcinv::stephen::{approximate, Budget};
use rcinv::zone_graphs::{
    check_gamma_prime, check_omega, completeness_margin, omega_ball, run_gamma_prime, FiniteTable, OmegaChecks,
    SOracle,
};

/// Keeps the page responsive.
const MAX_VERTICES: usize = 400;
const MAX_RADIUS: u32 = 6;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Stephen approximation of the Schützenberger graph of `base`.
pub fn stephen_json(pres: &str, base: &str, rounds: usize) -> Result<String, String> {
    let p = parse_presentation(pres).map_err(err)?;
    let w = p.alphabet.parse(base).map_err(err)?;
    let a = approximate(&p, &w, Budget::new(rounds.min(8), MAX_VERTICES)).map_err(err)?;
    let g = &a.graph;
    let edges: Vec<_> = g.edges().into_iter().map(|(s, l, d)| json!([s, p.alphabet.name(l), d])).collect();
    Ok(json!({
        "vertices": g.num_vertices(),
        "edges": edges,
        "root": a.root(),
        "start": a.start,
        "rounds": a.rounds_completed,
        "stabilized": a.stabilized,
        "capped": a.capped,
    })
    .to_string())
}

/// Exact equality in `M_r` next to a bounded chain search.
pub fn mr_json(r: usize, left: &str, right: &str, max_len: usize) -> Result<String, String> {
    let a = mr_alphabet();
    let u = a.parse(left).map_err(err)?;
    let v = a.parse(right).map_err(err)?;
    let eq = mr_equal(r, &u, &v).map_err(err)?;
    let p = mr_presentation(r);
    let found = search_chain(&p, &u, &v, max_len.clamp(1, 12), 50_000).map_err(err)?;
    let ca = chain_alphabet(&p.alphabet);
    let chain = found.chain().map(|c| c.words.iter().map(|w| ca.format(w)).collect::<Vec<_>>());
    Ok(json!({
        "equal": eq,
        "normal_forms": [
            a.format(&mr_normal_form(Some(r), &u).map_err(err)?),
            a.format(&mr_normal_form(Some(r), &v).map_err(err)?),
        ],
        "chain": chain,
    })
    .to_string())
}

fn instance(name: &str) -> Result<(MstInput, SOracle), String> {
    match name {
        "worked" => {
            let input = worked_example();
            let s = SOracle::free_monoid(&input).map_err(err)?;
            Ok((input, s))
        }
        "z2" => {
            let p = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a a", "1")]).map_err(err)?;
            let input = MstInput::new(p, &[]).map_err(err)?;
            let s = SOracle::finite_table(&input, FiniteTable::cyclic(2)).map_err(err)?;
            Ok((input, s))
        }
        other => Err(format!("unknown instance `{other}`")),
    }
}

/// Ω and Γ′ ball statistics for a built-in instance (`worked` or `z2`).
pub fn balls_json(name: &str, radius: u32) -> Result<String, String> {
    let radius = radius.min(MAX_RADIUS);
    let (input, mut s) = instance(name)?;
    let ball = omega_ball(&input, &mut s, radius).map_err(err)?;
    let omega = check_omega(&ball, OmegaChecks::ALL);
    let (_, s) = instance(name)?;
    let run = run_gamma_prime(&input, s, radius).map_err(err)?;
    let max_uv = input.s_pres.relations.iter().map(|r| r.lhs.len() + r.rhs.len()).max().unwrap_or(0);
    let gamma = check_gamma_prime(&run.gamma, &run.mst, completeness_margin(max_uv), &run.types);
    let mst = build_mst(&input).map_err(err)?;
    Ok(json!({
        "mst": mst.to_text(),
        "omega": {"passed": omega.passed(), "report": omega, "zones": ball.zone_counts()},
        "gamma": {"passed": gamma.passed(), "report": gamma},
    })
    .to_string())
}

#[wasm_bindgen]
pub fn stephen(pres: &str, base: &str, rounds: usize) -> Result<String, JsValue> {
    stephen_json(pres, base, rounds).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn mr_check(r: usize, left: &str, right: &str, max_len: usize) -> Result<String, JsValue> {
    mr_json(r, left, right, max_len).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn balls(name: &str, radius: u32) -> Result<String, JsValue> {
    balls_json(name, radius).map_err(|e| JsValue::from_str(&e))
}
