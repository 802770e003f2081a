//! `rcinv`: command-line front end.
//!
//! Exit codes: 0 yes/pass, 3 unknown, 2 property violation, 1 usage or I/O error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rcinv::boundary::{
    boundary_width, check_cover_bounds, cover_analysis, lk_generates_pi1, qi_r1_check, RClassModel,
};
use rcinv::constructions::{
    build_mqw, build_mst, build_q, build_rqw, tietze_check_rqw, MstInput, MstProvenance, QTruncation,
};
use rcinv::graphs::{parse_graph, parse_subset, DotOptions};
use rcinv::presentations::{parse_presentation, Presentation};
use rcinv::rc::{
    chain_alphabet, mr_alphabet, mr_equal, mr_normal_form, search_chain, validate_chain, ChainCertificate,
    SearchOutcome,
};
use rcinv::stephen::{approximate, equal_right_units, is_right_unit, Budget, SemiDecision};
use rcinv::subgroup::{build_coset_system, default_cover, rewrite_phi, verify_claims, CosetSystem};
use rcinv::words::Word;
use rcinv::zone_graphs::{
    check_gamma_prime, check_omega, completeness_margin, omega_ball, run_gamma_prime, OmegaChecks, SOracle,
};

#[derive(Parser)]
#[command(name = "rcinv", version, about = "Special inverse monoids, RC chains and boundary widths")]
struct Cli {
    /// Also write a JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Presentation files.
    Pres {
        #[command(subcommand)]
        cmd: PresCmd,
    },
    /// Stephen's procedure.
    Stephen {
        #[command(subcommand)]
        cmd: StephenCmd,
    },
    /// Right-cancellative chains and the exact M_r oracle.
    Rc {
        #[command(subcommand)]
        cmd: RcCmd,
    },
    /// Build a derived presentation.
    Construct {
        #[arg(value_enum)]
        which: Construction,
        #[arg(long = "in", value_name = "F")]
        input: PathBuf,
        /// Comma-separated subset B of the generators.
        #[arg(long, default_value = "")]
        b: String,
        /// Comma-separated words w_1,…,w_m.
        #[arg(long, default_value = "")]
        w: String,
        #[arg(long, default_value_t = 2)]
        trunc: usize,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Where to put the alternate presentation for `mqw`.
        #[arg(long)]
        alt_out: Option<PathBuf>,
    },
    /// Zone graphs.
    Omega {
        #[command(subcommand)]
        cmd: OmegaCmd,
    },
    /// The classified Cayley ball Γ′.
    Gammaprime {
        #[command(subcommand)]
        cmd: GammaCmd,
    },
    /// Boundary widths, covers and coset analysis.
    Boundary {
        #[command(subcommand)]
        cmd: BoundaryCmd,
    },
    /// Quasi-isometry of the Schützenberger graph of 1 with the right-unit group.
    Qi {
        #[command(subcommand)]
        cmd: QiCmd,
    },
    /// Coset systems and the rewriting φ.
    Subgroup {
        #[command(subcommand)]
        cmd: SubgroupCmd,
    },
}

#[derive(Subcommand)]
enum PresCmd {
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum StephenCmd {
    Run {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long, default_value = "1")]
        base: String,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    Member {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
    Equal {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum RcCmd {
    Solve {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    Mr {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Mst,
    Q,
    Mqw,
    Rqw,
}

#[derive(Subcommand)]
enum OmegaCmd {
    Ball {
        /// An `M_{S,T}` presentation with provenance, or `S` itself (then use `--b`).
        #[arg(long = "in", value_name = "F")]
        input: PathBuf,
        /// Oracle file for `S`; defaults to the free monoid.
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value = "")]
        b: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value = "bidet,relators,zones")]
        check: String,
    },
}

#[derive(Subcommand)]
enum GammaCmd {
    Check {
        #[arg(long = "in", value_name = "F")]
        input: PathBuf,
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long)]
        radius: u32,
        /// Interior margin; defaults to the completeness margin of the instance.
        #[arg(long)]
        interior: Option<u32>,
    },
}

#[derive(Subcommand)]
enum BoundaryCmd {
    Width {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        subset: PathBuf,
    },
    Cover {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        subset: PathBuf,
        #[arg(long)]
        r: u32,
    },
    Cosets {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        j: String,
    },
    Rips {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        base: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum QiCmd {
    Check {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum SubgroupCmd {
    Build {
        #[arg(long)]
        model: PathBuf,
        /// Cover cosets; defaults to the enlarged cover of the identity coset.
        #[arg(long)]
        j: Option<String>,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    Rewrite {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        word: String,
    },
    Verify {
        #[arg(long)]
        sys: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Yes,
    Violation,
    Unknown,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Yes => 0,
            Status::Violation => 2,
            Status::Unknown => 3,
        }
    }
    fn name(self) -> &'static str {
        match self {
            Status::Yes => "pass",
            Status::Violation => "violation",
            Status::Unknown => "unknown",
        }
    }
    fn of(ok: bool) -> Status {
        if ok {
            Status::Yes
        } else {
            Status::Violation
        }
    }
}

struct Report {
    command: &'static str,
    status: Status,
    seed: Option<u64>,
    human: String,
    json: Value,
}

impl Report {
    fn new(command: &'static str, status: Status, human: String, json: Value) -> Self {
        Report { command, status, seed: None, human, json }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_pres(path: &Path) -> Result<Presentation> {
    parse_presentation(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn word(p: &Presentation, text: &str) -> Result<Word> {
    p.alphabet.parse(text).with_context(|| format!("word `{text}`"))
}

fn list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn u32_list(s: &str) -> Result<BTreeSet<u32>> {
    list(s).into_iter().map(|x| x.parse::<u32>().map_err(|_| anyhow!("bad index `{x}`"))).collect()
}

/// `M_{S,T}` input from either a built `M_{S,T}` (provenance) or `S` plus `B`.
fn mst_input(p: Presentation, b: &str) -> Result<MstInput> {
    if p.meta("construction").is_some() {
        Ok(MstProvenance::read(&p)?.input()?)
    } else {
        Ok(MstInput::new(p, &list(b))?)
    }
}

fn load_oracle(input: &MstInput, path: Option<&Path>) -> Result<SOracle> {
    Ok(match path {
        Some(p) => SOracle::from_text(input, &read(p)?)?,
        None => SOracle::free_monoid(input)?,
    })
}

fn semi(command: &'static str, d: &SemiDecision) -> Report {
    let status = if d.is_yes() { Status::Yes } else { Status::Unknown };
    let human = format!(
        "{}: {} (rounds {}, {} vertices)",
        command,
        if d.is_yes() { "yes" } else { "unknown" },
        d.rounds_used,
        d.vertices
    );
    Report::new(command, status, human, serde_json::to_value(d).expect("serializable"))
}

fn pres(cmd: PresCmd) -> Result<Report> {
    let PresCmd::Validate { file } = cmd;
    let text = read(&file)?;
    Ok(match parse_presentation(&text) {
        Ok(p) => Report::new(
            "pres validate",
            Status::Yes,
            format!("ok: {} presentation, {} generators, {} relations", p.kind, p.alphabet.len(), p.relations.len()),
            json!({"valid": true, "kind": p.kind.to_string(), "generators": p.alphabet.names(), "relations": p.relations.len()}),
        ),
        Err(e) => Report::new(
            "pres validate",
            Status::Violation,
            format!("invalid: {e}"),
            json!({"valid": false, "error": e.to_string()}),
        ),
    })
}

fn stephen(cmd: StephenCmd) -> Result<Report> {
    match cmd {
        StephenCmd::Run { pres, base, rounds, cap, dot } => {
            let p = load_pres(&pres)?;
            let w = word(&p, &base)?;
            let a = approximate(&p, &w, Budget::new(rounds, cap))?;
            if let Some(out) = dot {
                write(&out, &a.graph.export_dot(&DotOptions::default()))?;
            }
            let status = if a.stabilized { Status::Yes } else { Status::Unknown };
            let human = format!(
                "{} vertices, {} edges after {} rounds; stabilized: {}; capped: {}",
                a.graph.num_vertices(),
                a.graph.num_edges(),
                a.rounds_completed,
                a.stabilized,
                a.capped
            );
            let json = json!({
                "base": p.alphabet.format(&w),
                "budget": {"rounds": rounds, "vertex_cap": cap},
                "schedule": a.schedule,
                "vertices": a.graph.num_vertices(),
                "edges": a.graph.num_edges(),
                "rounds_completed": a.rounds_completed,
                "stabilized": a.stabilized,
                "capped": a.capped,
                "root": a.root(),
                "start": a.start,
            });
            Ok(Report::new("stephen run", status, human, json))
        }
        StephenCmd::Member { pres, word: w, rounds, cap } => {
            let p = load_pres(&pres)?;
            let w = word(&p, &w)?;
            Ok(semi("stephen member", &is_right_unit(&p, &w, Budget::new(rounds, cap))?))
        }
        StephenCmd::Equal { pres, left, right, rounds, cap } => {
            let p = load_pres(&pres)?;
            let (u, v) = (word(&p, &left)?, word(&p, &right)?);
            Ok(semi("stephen equal", &equal_right_units(&p, &u, &v, Budget::new(rounds, cap))?))
        }
    }
}

fn rc(cmd: RcCmd) -> Result<Report> {
    match cmd {
        RcCmd::Solve { pres, left, right, max_len, max_steps, cert } => {
            let p = load_pres(&pres)?;
            let (u, v) = (word(&p, &left)?, word(&p, &right)?);
            match search_chain(&p, &u, &v, max_len, max_steps)? {
                SearchOutcome::Found(c) => {
                    let ca = chain_alphabet(&p.alphabet);
                    let words: Vec<String> = c.words.iter().map(|w| ca.format(w)).collect();
                    if let Some(out) = cert {
                        let file = json!({
                            "left": p.alphabet.format(&u),
                            "right": p.alphabet.format(&v),
                            "certificate": ChainCertificate::from_chain(&p, &c),
                        });
                        write(&out, &serde_json::to_string_pretty(&file)?)?;
                    }
                    let human = format!("equal: chain of {} steps\n  {}", c.len(), words.join("\n  "));
                    Ok(Report::new("rc solve", Status::Yes, human, json!({"found": true, "steps": c.len(), "words": words})))
                }
                SearchOutcome::NotFound(nf) => Ok(Report::new(
                    "rc solve",
                    Status::Unknown,
                    format!("unknown: no chain within budget ({nf:?})"),
                    json!({"found": false, "reason": nf}),
                )),
            }
        }
        RcCmd::Verify { pres, cert } => {
            let p = load_pres(&pres)?;
            let file: Value = serde_json::from_str(&read(&cert)?).context("certificate is not JSON")?;
            let c: ChainCertificate =
                serde_json::from_value(file["certificate"].clone()).context("missing `certificate`")?;
            let endpoint = |k: &str| -> Result<Word> { word(&p, file[k].as_str().ok_or_else(|| anyhow!("missing `{k}`"))?) };
            let (u, v) = (endpoint("left")?, endpoint("right")?);
            let chain = c.to_chain(&p)?;
            let val = validate_chain(&p, &chain);
            let ends = chain.words.first() == Some(&u) && chain.words.last() == Some(&v);
            let ok = val.valid && ends;
            let human = if ok {
                format!("valid chain of {} steps", chain.len())
            } else if !val.valid {
                format!("invalid: {:?}", val.violation)
            } else {
                "invalid: endpoints do not match".to_string()
            };
            Ok(Report::new("rc verify", Status::of(ok), human, json!({"valid": ok, "endpoints_match": ends, "validation": val})))
        }
        RcCmd::Mr { r, left, right } => {
            let a = mr_alphabet();
            let u = a.parse(&left).context("left word")?;
            let v = a.parse(&right).context("right word")?;
            let eq = mr_equal(r, &u, &v)?;
            let (nu, nv) = (mr_normal_form(Some(r), &u)?, mr_normal_form(Some(r), &v)?);
            let human = format!(
                "{} in M_{r}\n  normal forms: {} | {}",
                if eq { "equal" } else { "not equal" },
                a.format(&nu),
                a.format(&nv)
            );
            let json = json!({"r": r, "equal": eq, "normal_forms": [a.format(&nu), a.format(&nv)]});
            Ok(Report::new("rc mr", Status::of(eq), human, json))
        }
    }
}

fn construct(
    which: Construction,
    input: &Path,
    b: &str,
    w: &str,
    trunc: usize,
    out: &Path,
    alt_out: Option<&Path>,
) -> Result<Report> {
    let p = load_pres(input)?;
    let words = || -> Result<Vec<Word>> { list(w).into_iter().map(|x| word(&p, x)).collect() };
    let (name, built, mut json, status) = match which {
        Construction::Mst => {
            let m = build_mst(&mst_input(p.clone(), b)?)?;
            ("mst", m, json!({}), Status::Yes)
        }
        Construction::Q => {
            let q = build_q(&mst_input(p.clone(), b)?, QTruncation::new(trunc))?;
            let j = json!({"trunc": trunc, "certified": q.certified.len(), "uncertified": q.uncertified});
            ("q", q.presentation, j, Status::Yes)
        }
        Construction::Mqw => {
            let m = build_mqw(&p, &words()?)?;
            if let Some(alt) = alt_out {
                write(alt, &m.alternate.to_text())?;
            }
            ("mqw", m.primary, json!({}), Status::Yes)
        }
        Construction::Rqw => {
            let r = build_rqw(&p, &words()?)?;
            let t = tietze_check_rqw(&r)?;
            let j = json!({"tietze_ok": t.ok, "tietze_failing": t.failing});
            ("rqw", r, j, Status::of(t.ok))
        }
    };
    write(out, &built.to_text())?;
    json["construction"] = json!(name);
    json["generators"] = json!(built.alphabet.len());
    json["relations"] = json!(built.relations.len());
    json["output"] = json!(out.display().to_string());
    let human = format!(
        "{name}: {} generators, {} relations -> {}",
        built.alphabet.len(),
        built.relations.len(),
        out.display()
    );
    Ok(Report::new("construct", status, human, json))
}

fn omega(cmd: OmegaCmd) -> Result<Report> {
    let OmegaCmd::Ball { input, oracle, b, radius, dot, check } = cmd;
    let inp = mst_input(load_pres(&input)?, &b)?;
    let mut s = load_oracle(&inp, oracle.as_deref())?;
    let mut checks = OmegaChecks { bidet: false, relators: false, zones: false };
    for c in list(&check) {
        match c {
            "bidet" => checks.bidet = true,
            "relators" => checks.relators = true,
            "zones" => checks.zones = true,
            other => bail!("unknown check `{other}` (expected bidet, relators, zones)"),
        }
    }
    let ball = omega_ball(&inp, &mut s, radius)?;
    if let Some(out) = dot {
        write(&out, &ball.graph.export_dot(&DotOptions::default()))?;
    }
    let rep = check_omega(&ball, checks);
    let zones = ball.zone_counts();
    let human = format!(
        "radius {radius}: {} vertices, {} edges; bidet violations {}, relator failures {} ({} vertices checked), zone violations {}, incoming-p violations {}",
        rep.vertices,
        rep.edges,
        rep.bidet_violations.len(),
        rep.relator_failures.len(),
        rep.relator_vertices_checked,
        rep.zone_violations.len(),
        rep.incoming_p_violations.len()
    );
    let json = json!({"radius": radius, "report": rep, "zone_counts": zones});
    Ok(Report::new("omega ball", Status::of(rep.passed()), human, json))
}

fn gammaprime(cmd: GammaCmd) -> Result<Report> {
    let GammaCmd::Check { input, oracle, radius, interior } = cmd;
    let inp = mst_input(load_pres(&input)?, "")?;
    let s = load_oracle(&inp, oracle.as_deref())?;
    let max_uv = inp.s_pres.relations.iter().map(|r| r.lhs.len() + r.rhs.len()).max().unwrap_or(0);
    let interior = interior.unwrap_or_else(|| completeness_margin(max_uv));
    let run = run_gamma_prime(&inp, s, radius)?;
    let rep = check_gamma_prime(&run.gamma, &run.mst, interior, &run.types);
    let human = format!(
        "radius {radius}, interior margin {interior}: {} vertices, {} edges, {} interior, {} complete; closed-walk failures {}, determinism failures {}, horizon skips {}",
        rep.vertices,
        rep.edges,
        rep.interior,
        rep.complete,
        rep.closed_walk_failures.len(),
        rep.determinism_failures.len(),
        rep.horizon_skips
    );
    let json = json!({"radius": radius, "interior_margin": interior, "report": rep});
    Ok(Report::new("gammaprime check", Status::of(rep.passed()), human, json))
}

fn boundary(cmd: BoundaryCmd) -> Result<Report> {
    match cmd {
        BoundaryCmd::Width { graph, subset } => {
            let g = parse_graph(&read(&graph)?)?;
            let x = parse_subset(&read(&subset)?)?;
            let rep = boundary_width(&g, &x);
            let human = format!(
                "width {} (excursion width {}), {} boundary pairs",
                rep.width,
                rep.excursion_width,
                rep.pairs.len()
            );
            Ok(Report::new("boundary width", Status::Yes, human, serde_json::to_value(&rep)?))
        }
        BoundaryCmd::Cover { graph, subset, r } => {
            let g = parse_graph(&read(&graph)?)?;
            let x = parse_subset(&read(&subset)?)?;
            let rep = check_cover_bounds(&g, &x, r);
            let human = format!(
                "r={r}: width {} -> {} (bound {}), excursion {} -> {}; holds: {}",
                rep.k,
                rep.width_r,
                2 * r + rep.k,
                rep.k_excursion,
                rep.width_r_excursion,
                rep.holds && rep.holds_excursion
            );
            Ok(Report::new("boundary cover", Status::of(rep.holds && rep.holds_excursion), human, serde_json::to_value(&rep)?))
        }
        BoundaryCmd::Cosets { model, j } => {
            let m = RClassModel::parse(&read(&model)?)?;
            let a = cover_analysis(&m, &u32_list(&j)?)?;
            let human = format!(
                "J={:?}: connected {}, width {}; enlarged to {:?} (connected {}, width {}, K={}); coset bound holds: {}",
                a.j,
                a.connected,
                a.width.width,
                a.enlarged,
                a.enlarged_connected,
                a.enlarged_width,
                a.k,
                a.coset_bound_holds
            );
            Ok(Report::new("boundary cosets", Status::of(a.coset_bound_holds), human, serde_json::to_value(&a)?))
        }
        BoundaryCmd::Rips { graph, base, k } => {
            let g = parse_graph(&read(&graph)?)?;
            let gen = lk_generates_pi1(&g, base, k)?;
            let human = format!("closed walks of length <= {k} {} the fundamental group", if gen { "generate" } else { "do not generate" });
            Ok(Report::new("boundary rips", Status::of(gen), human, json!({"base": base, "k": k, "generates": gen})))
        }
    }
}

fn qi(cmd: QiCmd) -> Result<Report> {
    let QiCmd::Check { pres, rounds, radius, cap } = cmd;
    let p = load_pres(&pres)?;
    let rep = qi_r1_check(&p, rounds, radius, cap)?;
    let human = format!(
        "lambda {}: {} vertices ({} interior), {} pairs; upper failures {}, lower failures {}",
        rep.lambda,
        rep.vertices,
        rep.interior,
        rep.pairs_checked,
        rep.upper_failures.len(),
        rep.lower_failures.len()
    );
    Ok(Report::new("qi check", Status::of(rep.passed()), human, serde_json::to_value(&rep)?))
}

fn subgroup(cmd: SubgroupCmd) -> Result<Report> {
    match cmd {
        SubgroupCmd::Build { model, j, out } => {
            let m = RClassModel::parse(&read(&model)?)?;
            let cover = match j {
                Some(j) => u32_list(&j)?,
                None => default_cover(&m)?,
            };
            let cs = build_coset_system(&m, &cover)?;
            write(&out, &cs.to_json())?;
            let human = format!(
                "cover {:?}: {} representatives, {} boundary words ({} distinct), kappa {}",
                cs.j,
                cs.representatives.len(),
                cs.boundary_words.len(),
                cs.w_list.len(),
                cs.kappa
            );
            let json = json!({"cover": cs.j, "representatives": cs.representatives.len(), "boundary_words": cs.boundary_words.len(), "kappa": cs.kappa});
            Ok(Report::new("subgroup build", Status::Yes, human, json))
        }
        SubgroupCmd::Rewrite { sys, j, word: w } => {
            let cs = CosetSystem::from_json(&read(&sys)?)?;
            let a = cs.model.graph.alphabet().clone();
            let u = a.parse(&w).context("word")?;
            let syms = rewrite_phi(&cs, j, &u)?;
            let psi = cs.psi(&syms);
            let human = format!("phi = {}\npsi(phi) = {}", cs.format_symbols(&syms), a.format(&psi));
            Ok(Report::new(
                "subgroup rewrite",
                Status::Yes,
                human,
                json!({"phi": cs.format_symbols(&syms), "psi": a.format(&psi)}),
            ))
        }
        SubgroupCmd::Verify { sys, samples, seed } => {
            let cs = CosetSystem::from_json(&read(&sys)?)?;
            let rep = verify_claims(&cs, samples, seed);
            let mut human = String::new();
            for (name, c) in rep.sections() {
                human.push_str(&format!("{name:18} {:5} checked, {} failures\n", c.checked, c.failures.len()));
            }
            let mut r = Report::new("subgroup verify", Status::of(rep.passed()), human.trim_end().to_string(), serde_json::to_value(&rep)?);
            r.seed = Some(seed);
            Ok(r)
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    match cli.cmd {
        Cmd::Pres { cmd } => pres(cmd),
        Cmd::Stephen { cmd } => stephen(cmd),
        Cmd::Rc { cmd } => rc(cmd),
        Cmd::Construct { which, input, b, w, trunc, out, alt_out } => {
            construct(which, &input, &b, &w, trunc, &out, alt_out.as_deref())
        }
        Cmd::Omega { cmd } => omega(cmd),
        Cmd::Gammaprime { cmd } => gammaprime(cmd),
        Cmd::Boundary { cmd } => boundary(cmd),
        Cmd::Qi { cmd } => qi(cmd),
        Cmd::Subgroup { cmd } => subgroup(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json_out = cli.json_out.clone();
    match run(cli) {
        Ok(r) => {
            println!("{}", r.human);
            println!("status: {}", r.status.name());
            if let Some(path) = json_out {
                let doc = json!({
                    "command": r.command,
                    "status": r.status.name(),
                    "exit_code": r.status.code(),
                    "seed": r.seed,
                    "report": r.json,
                });
                let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
                if let Err(e) = write(&path, &text) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(r.status.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
