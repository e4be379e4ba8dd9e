use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mtv_core::catdata::load::scalar_to_json;
use mtv_core::catdata::{load_backend_file, CatError, CategoryBackend, LoadMode};
use mtv_core::decor::io::{builtin_surface, parse_word};
use mtv_core::decor::suite::{bijection_suite, normal_form_suite, SuiteReport};
use mtv_core::decor::{evaluate_word, normal_form, DecorError};
use mtv_core::gcore::{FiniteGroup, Scalar};
use mtv_core::graphval::{identity_suite, GraphError, TetEvaluator};
use mtv_core::statesum::{tv_report, StateError};
use mtv_core::tricomplex::io::load_triangulation_file;
use mtv_core::tricomplex::{random_move, HTriangulation, MoveMix, TriError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "mtv", version, about = "Modified Turaev-Viro invariants of decorated 3-manifolds")]
struct Cli {
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of moves for `fuzz`
    #[arg(long, global = true, default_value_t = 100)]
    moves: usize,
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print reports as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute the invariant of a triangulation with a backend
    Tv { backend: PathBuf, triangulation: PathBuf },
    /// Apply random guarded moves and check the invariant after each
    Fuzz {
        backend: PathBuf,
        triangulation: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_tets: usize,
        #[arg(long, value_enum, default_value_t = Mix::All)]
        mix: Mix,
    },
    /// Check the algebraic identities of a backend
    Validate {
        backend: PathBuf,
        /// Load without cross-checking copairings and tetrahedron tables
        #[arg(long)]
        lenient: bool,
    },
    /// Rewrite an equivalence word into its normal form
    NormalForm { word: PathBuf },
    /// Run the normal-form and intersection-pairing property suites
    RepCheck {
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mix {
    Pachner,
    Gauge,
    All,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    witness: Option<String>,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Failure {
        Failure { code, kind, message: message.into(), witness: None }
    }

    fn with_witness(mut self, w: impl Into<String>) -> Failure {
        self.witness = Some(w.into());
        self
    }
}

impl From<CatError> for Failure {
    fn from(e: CatError) -> Failure {
        match &e {
            CatError::Schema(_) | CatError::Group(_) | CatError::Scalar(_) => Failure::new(2, "schema", e.to_string()),
            CatError::InvariantViolation { name, witness } => {
                Failure::new(3, "invariant", format!("backend invariant `{name}` violated")).with_witness(witness.clone())
            }
            CatError::SingularGram(t) => Failure::new(3, "invariant", e.to_string()).with_witness(t.clone()),
            CatError::DegreeInBadSet(_) | CatError::BadDegreeSample(_) => Failure::new(4, "unsupported_decoration", e.to_string()),
            _ => Failure::new(3, "invariant", e.to_string()),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        match e {
            GraphError::Cat(c) => c.into(),
            GraphError::DegreeInBadSet(_) => Failure::new(4, "unsupported_decoration", e.to_string()),
            _ => Failure::new(3, "invariant", e.to_string()),
        }
    }
}

impl From<TriError> for Failure {
    fn from(e: TriError) -> Failure {
        match &e {
            TriError::Schema(_)
            | TriError::NotClosed(_)
            | TriError::NotOrientable(_)
            | TriError::BadLink(_)
            | TriError::BadVertexLink(_) => Failure::new(2, "schema", e.to_string()),
            TriError::InadmissibleEdge(x) => {
                Failure::new(4, "unsupported_decoration", e.to_string()).with_witness(format!("edge {x}"))
            }
            _ => Failure::new(3, "invariant", e.to_string()),
        }
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Failure {
        match e {
            StateError::DegreeInBadSet(x) => {
                Failure::new(4, "unsupported_decoration", e.to_string()).with_witness(format!("edge {x}"))
            }
            StateError::GroupMismatch => Failure::new(2, "schema", e.to_string()),
            StateError::Graph(g) => g.into(),
            StateError::Cat(c) => c.into(),
            StateError::InadmissibleState(_) => Failure::new(3, "invariant", e.to_string()),
        }
    }
}

impl From<DecorError> for Failure {
    fn from(e: DecorError) -> Failure {
        match &e {
            DecorError::Schema(_) | DecorError::Surface(_) => Failure::new(2, "schema", e.to_string()),
            DecorError::NotComposable(i) => {
                Failure::new(5, "non_composable", e.to_string()).with_witness(format!("generator {i}"))
            }
            _ => Failure::new(3, "invariant", e.to_string()),
        }
    }
}

fn scalar_json(s: &Scalar) -> Value {
    json!({ "exact": scalar_to_json(s), "display": s.to_string(), "approx": s.approx_string() })
}

fn load_backend(path: &Path, mode: LoadMode) -> Result<CategoryBackend, Failure> {
    if !path.exists() {
        return Err(Failure::new(2, "schema", format!("{}: no such file", path.display())));
    }
    Ok(load_backend_file(path, mode)?)
}

fn load_pair(backend: &Path, triangulation: &Path) -> Result<(CategoryBackend, HTriangulation), Failure> {
    let b = load_backend(backend, LoadMode::Strict)?;
    let h = load_triangulation_file(triangulation, b.group().clone(), b.badset().clone())?;
    Ok((b, h))
}

/// Output of a successful command; `ok = false` turns it into exit code 3.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn cmd_tv(backend: &Path, triangulation: &Path) -> Result<Report, Failure> {
    let (b, h) = load_pair(backend, triangulation)?;
    let start = Instant::now();
    let tets = TetEvaluator::new(&b);
    let r = tv_report(&h, &tets)?;
    let secs = start.elapsed().as_secs_f64();
    let c = h.complex();
    let text = format!(
        "{}\n  approx {}\n  backend {}, {} tetrahedra, {} edges, |Γ| = {}\n  {} states, {} distinct terms, tet cache {} hits / {} misses, {:.3}s",
        r.value,
        r.value.approx_string(),
        b.name(),
        c.n_tets(),
        c.n_edges(),
        h.gamma().len(),
        r.states,
        r.terms,
        r.cache_hits,
        r.cache_misses,
        secs
    );
    let json = json!({
        "value": scalar_json(&r.value),
        "backend": b.name(),
        "tetrahedra": c.n_tets(),
        "states": r.states,
        "terms": r.terms,
        "cache_hits": r.cache_hits,
        "cache_misses": r.cache_misses,
        "wall_time_s": secs,
    });
    Ok(Report { text, json, ok: true })
}

fn cmd_fuzz(backend: &Path, triangulation: &Path, moves: usize, seed: u64, max_tets: usize, mix: Mix) -> Result<Report, Failure> {
    let (b, mut h) = load_pair(backend, triangulation)?;
    let mix = match mix {
        Mix::Pachner => MoveMix::Pachner,
        Mix::Gauge => MoveMix::Gauge,
        Mix::All => MoveMix::All,
    };
    let tets = TetEvaluator::new(&b);
    let base = tv_report(&h, &tets)?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::new();
    let mut lines = vec![format!("initial value {} on {} tetrahedra", base, h.complex().n_tets())];
    let mut divergent = None;
    for i in 0..moves {
        let Some((mv, next)) = random_move(&h, &mut rng, max_tets, mix) else {
            return Err(Failure::new(3, "invariant", format!("no applicable move at step {i}")));
        };
        let v = tv_report(&next, &tets)?.value;
        let equal = v == base;
        lines.push(format!("{i:>4} {mv:<40} {:>3} tets  {}", next.complex().n_tets(), if equal { "ok" } else { "DIFFERS" }));
        log.push(json!({ "index": i, "move": mv.to_string(), "tetrahedra": next.complex().n_tets(), "equal": equal }));
        h = next;
        if !equal {
            lines.push(format!("value after move {i}: {v}"));
            divergent = Some((i, v));
            break;
        }
    }
    let ok = divergent.is_none();
    lines.push(match &divergent {
        None => format!("PASS: {moves} moves, invariant unchanged"),
        Some((i, _)) => format!("FAIL: first divergent move {i}"),
    });
    let json = json!({
        "pass": ok,
        "seed": seed,
        "moves": moves,
        "initial": scalar_json(&base),
        "first_divergent_move": divergent.as_ref().map(|d| d.0),
        "divergent_value": divergent.as_ref().map(|d| scalar_json(&d.1)),
        "log": log,
    });
    Ok(Report { text: lines.join("\n"), json, ok })
}

fn cmd_validate(backend: &Path, lenient: bool) -> Result<Report, Failure> {
    let b = load_backend(backend, if lenient { LoadMode::Lenient } else { LoadMode::Strict })?;
    let checks = identity_suite(&b)?;
    let ok = checks.iter().all(|c| c.passed());
    let mut lines = vec![format!("backend {}", b.name())];
    for c in &checks {
        let mut line = format!("{} {:<24} {} checked", if c.passed() { "pass" } else { "FAIL" }, c.name, c.checked);
        if let Some(w) = &c.witness {
            line.push_str(&format!(", {} failures, first: {w}", c.failures));
        }
        lines.push(line);
    }
    Ok(Report { text: lines.join("\n"), json: json!({ "backend": b.name(), "pass": ok, "checks": checks }), ok })
}

fn cmd_normal_form(word: &Path) -> Result<Report, Failure> {
    let doc = std::fs::read_to_string(word).map_err(|e| Failure::new(2, "schema", format!("{}: {e}", word.display())))?;
    let w = parse_word(&doc)?;
    let nf = normal_form(&w)?;
    let g = nf.rho.group().clone();
    let verified = evaluate_word(&w)?.signature() == evaluate_word(&nf.to_word())?.signature();
    let names = |s: &BTreeSet<usize>| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    let phi: Vec<(usize, String)> = nf.phi.iter().map(|(y, x)| (y, g.name(x).to_string())).collect();
    let rho: Vec<String> = nf.rho.forward_labels().iter().map(|&x| g.name(x).to_string()).collect();
    let text = format!(
        "word of {} generators from base {{{}}}\nnormal form: J_φ ∘ R({{{}}}, {{{}}}, ρ)\n  φ = {{{}}}\n  ρ = [{}]\nevaluation check: {}",
        w.generators().len(),
        names(w.source().base()),
        names(&nf.from),
        names(&nf.to),
        phi.iter().map(|(y, x)| format!("{y}: {x}")).collect::<Vec<_>>().join(", "),
        rho.join(", "),
        if verified { "word and normal form agree" } else { "MISMATCH" }
    );
    let json = json!({
        "generators": w.generators().len(),
        "from": nf.from,
        "to": nf.to,
        "phi": phi.iter().map(|(y, x)| json!([y, x])).collect::<Vec<_>>(),
        "rho": rho,
        "verified": verified,
    });
    Ok(Report { text, json, ok: verified })
}

fn cmd_rep_check(cases: usize, seed: u64) -> Result<Report, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<(String, SuiteReport)> = Vec::new();
    let groups = |names: &[&str]| -> Vec<(String, Arc<FiniteGroup>)> {
        names.iter().map(|n| (n.to_string(), Arc::new(mtv_core::catdata::load::builtin_group(n).expect("builtin")))).collect()
    };
    for (gname, g) in groups(&["Z/6", "S3"]) {
        for sname in ["torus_two_vertex", "torus_three_vertex"] {
            let s = Arc::new(builtin_surface(sname).expect("builtin"));
            rows.push((format!("normal form, {gname}, {sname}"), normal_form_suite(&s, &g, cases, 8, &mut rng)?));
        }
    }
    for (gname, g) in groups(&["Z/5", "S3"]) {
        for sname in ["torus_one_vertex", "torus_two_vertex", "genus2_one_vertex", "genus2_two_vertex"] {
            let s = Arc::new(builtin_surface(sname).expect("builtin"));
            rows.push((format!("intersection pairing, {gname}, {sname}"), bijection_suite(&s, &g, cases, &mut rng)?));
        }
    }
    let ok = rows.iter().all(|(_, r)| r.failure.is_none());
    let text = rows
        .iter()
        .map(|(name, r)| match &r.failure {
            None => format!("pass {name}: {} cases", r.cases),
            Some(f) => format!("FAIL {name}: {f}"),
        })
        .collect::<Vec<_>>()
        .join("\n");
    let json = json!({
        "pass": ok,
        "seed": seed,
        "suites": rows.iter().map(|(n, r)| json!({ "name": n, "cases": r.cases, "failure": r.failure })).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, ok })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.cmd {
        Cmd::Tv { backend, triangulation } => cmd_tv(backend, triangulation),
        Cmd::Fuzz { backend, triangulation, max_tets, mix } => {
            cmd_fuzz(backend, triangulation, cli.moves, cli.seed, *max_tets, *mix)
        }
        Cmd::Validate { backend, lenient } => cmd_validate(backend, *lenient),
        Cmd::NormalForm { word } => cmd_normal_form(word),
        Cmd::RepCheck { cases } => cmd_rep_check(*cases, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("{}", json!({ "error": "config", "message": e.to_string(), "exit_code": 2 }));
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json"));
            } else {
                println!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!(
                "{}",
                json!({ "error": f.kind, "message": f.message, "witness": f.witness, "exit_code": f.code })
            );
            ExitCode::from(f.code)
        }
    }
}
