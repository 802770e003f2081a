use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rcinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn rcinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcinv")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    let out = rcinv(args);
    out.status.code().expect("exited")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(rcinv(args).stdout).unwrap()
}

#[test]
fn validate_good_and_bad() {
    assert_eq!(code(&["pres", "validate", &data("good.pres")]), 0);
    assert_eq!(code(&["pres", "validate", &data("bad.pres")]), 2);
    assert_eq!(code(&["pres", "validate", &data("missing.pres")]), 1);
}

#[test]
fn mr_separation() {
    assert_eq!(code(&["rc", "mr", "--r", "1", "--left", "q0 a0 a0 p0", "--right", "q1 a1 a1 p1"]), 2);
    assert_eq!(code(&["rc", "mr", "--r", "1", "--left", "q0 a0 p0", "--right", "q1 a1 p1"]), 0);
}

#[test]
fn stephen_verdicts() {
    let b = data("bicyclic.pres");
    assert_eq!(code(&["stephen", "member", "--pres", &b, "--word", "a", "--rounds", "2"]), 0);
    // b is not a right unit of the bicyclic monoid; only `unknown` may come back
    assert_eq!(code(&["stephen", "member", "--pres", &b, "--word", "b", "--rounds", "2"]), 3);
    let z2 = data("z2.pres");
    assert_eq!(code(&["stephen", "equal", "--pres", &z2, "--left", "a", "--right", "a'", "--rounds", "3"]), 0);
    let dot = tmp("z3.dot");
    let d = dot.to_str().unwrap();
    assert_eq!(code(&["stephen", "run", "--pres", &data("good.pres"), "--rounds", "4", "--cap", "100", "--dot", d]), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
}

#[test]
fn certificate_round_trip() {
    let m1 = data("m1.pres");
    let cert = tmp("chain.json");
    let c = cert.to_str().unwrap();
    let solve = ["rc", "solve", "--pres", &m1, "--left", "q0 a0 p0", "--right", "q1 a1 p1", "--cert", c];
    assert_eq!(code(&solve), 0);
    assert_eq!(code(&["rc", "verify", "--pres", &m1, "--cert", c]), 0);

    // swap the endpoint: the chain no longer ends where the file claims
    let text = std::fs::read_to_string(&cert).unwrap();
    let bad = tmp("bad_chain.json");
    std::fs::write(&bad, text.replace("\"right\": \"q1 a1 p1\"", "\"right\": \"q1 a1 a1 p1\"")).unwrap();
    assert_eq!(code(&["rc", "verify", "--pres", &m1, "--cert", bad.to_str().unwrap()]), 2);

    let not_found = ["rc", "solve", "--pres", &m1, "--left", "q0 a0 a0 p0", "--right", "q1 a1 a1 p1"];
    assert_eq!(code(&[&not_found[..], &["--max-len", "8", "--max-steps", "5000"]].concat()), 3);
}

#[test]
fn json_reports_are_deterministic() {
    let (a, b) = (tmp("v1.json"), tmp("v2.json"));
    let sys = tmp("s3.sys");
    let s = sys.to_str().unwrap();
    assert_eq!(code(&["subgroup", "build", "--model", &data("s3.model"), "--j", "1", "-o", s]), 0);
    for out in [&a, &b] {
        let args = ["subgroup", "verify", "--sys", s, "--samples", "20", "--seed", "11", "--json-out", out.to_str().unwrap()];
        assert_eq!(code(&args), 0);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["report"]["claim2"]["checked"], 20);
}

#[test]
fn subgroup_rewrite() {
    let sys = tmp("a4.sys");
    let s = sys.to_str().unwrap();
    assert_eq!(code(&["subgroup", "build", "--model", &data("a4.model"), "--j", "1", "-o", s]), 0);
    let out = stdout(&["subgroup", "rewrite", "--sys", s, "--j", "1", "--word", "t t t"]);
    assert!(out.contains("phi = "), "{out}");
    // coset 2 is outside the cover
    assert_eq!(code(&["subgroup", "rewrite", "--sys", s, "--j", "2", "--word", "t"]), 1);
}

#[test]
fn constructions_write_files() {
    let out = tmp("mst.pres");
    let o = out.to_str().unwrap();
    assert_eq!(code(&["construct", "mst", "--in", &data("worked_s.pres"), "-o", o]), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(data("worked_mst.pres")).unwrap());
    assert_eq!(code(&["pres", "validate", o]), 0);

    let q = tmp("q.pres");
    assert_eq!(code(&["construct", "q", "--in", &data("worked_s.pres"), "--trunc", "2", "-o", q.to_str().unwrap()]), 0);
    assert_eq!(code(&["pres", "validate", q.to_str().unwrap()]), 0);

    let r = tmp("rqw.pres");
    let g = data("baumslag_solitar.pres");
    assert_eq!(code(&["construct", "rqw", "--in", &g, "--w", "a,b", "-o", r.to_str().unwrap()]), 0);
    let (m, alt) = (tmp("mqw.pres"), tmp("mqw_alt.pres"));
    let args = ["construct", "mqw", "--in", &g, "--w", "a,b", "-o", m.to_str().unwrap(), "--alt-out", alt.to_str().unwrap()];
    assert_eq!(code(&args), 0);
    assert!(alt.exists());
}

#[test]
fn omega_and_gamma_prime() {
    let s = data("worked_s.pres");
    assert_eq!(code(&["omega", "ball", "--in", &s, "--radius", "3", "--check", "bidet,relators,zones"]), 0);
    assert_eq!(code(&["omega", "ball", "--in", &data("worked_mst.pres"), "--radius", "3"]), 0);
    let z2 = data("z2_s.pres");
    assert_eq!(code(&["omega", "ball", "--in", &z2, "--oracle", &data("z2.oracle"), "--radius", "3"]), 0);
    assert_eq!(code(&["omega", "ball", "--in", &s, "--radius", "3", "--check", "nonsense"]), 1);
    assert_eq!(code(&["gammaprime", "check", "--in", &s, "--radius", "5", "--interior", "3"]), 0);
}

#[test]
fn boundary_commands() {
    let json = tmp("width.json");
    let args = [
        "boundary",
        "width",
        "--graph",
        &data("triangle.graph"),
        "--subset",
        &data("triangle_all.subset"),
        "--json-out",
        json.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["report"]["width"], 1);
    assert_eq!(v["report"]["excursion_width"], 0);

    let p = data("path4.graph");
    let ends = data("path_ends.subset");
    assert_eq!(code(&["boundary", "cover", "--graph", &p, "--subset", &ends, "--r", "1"]), 0);
    assert_eq!(code(&["boundary", "cosets", "--model", &data("s3.model"), "--j", "1"]), 0);

    let c5 = data("c5.graph");
    assert_eq!(code(&["boundary", "rips", "--graph", &c5, "--base", "0", "--k", "4"]), 2);
    assert_eq!(code(&["boundary", "rips", "--graph", &c5, "--base", "0", "--k", "5"]), 0);

    let ball = data("z2_free_x_ball3.graph");
    let out = stdout(&["boundary", "width", "--graph", &ball, "--subset", &data("z2_factor.subset")]);
    assert!(out.contains("excursion width 0"), "{out}");
}

#[test]
fn qi_on_z2() {
    assert_eq!(code(&["qi", "check", "--pres", &data("z2.pres"), "--rounds", "4", "--radius", "3"]), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["rc", "mr", "--r", "1"]), 1);
    assert_eq!(code(&["--help"]), 0);
}
