use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use fractotal::chi::{fractional_total_chromatic_number, verify_certificate, CertificateDoc, ChiError, ChiMode, LpCertificate};
use fractotal::coloring::{verify_interval_coloring, IntervalColoring, IntervalColoringDoc};
use fractotal::construct::demo::{random_task, TaskShape};
use fractotal::construct::{construct_coloring, recolor_tree, recolor_violations, ConstructError, ConstructOptions};
use fractotal::decompose::{ell_decomposition, verify_decomposition, DecomposeError, Decomposition, DecompositionDoc};
use fractotal::graph::io::{parse_edge_list, parse_graph6, write_edge_list};
use fractotal::graph::{cyclic_edge_connectivity, girth, is_connected};
use fractotal::rational::{self, Rational};
use fractotal::total::{TotalError, ENUMERATION_BUDGET};
use fractotal::{fixtures, Graph};

/// Environment variable holding the default enumeration budget.
const BUDGET_VAR: &str = "FRACTOTAL_BUDGET";

#[derive(Parser)]
#[command(name = "fractotal", version, about = "Exact fractional total colorings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex and edge counts, maximum degree, girth and cyclic edge-connectivity.
    Info { graph: String },
    /// Exact fractional total chromatic number with an LP certificate.
    Chi {
        graph: String,
        #[arg(long, value_enum, default_value_t = Mode::ColumnGeneration)]
        mode: Mode,
        /// Largest total graph the enumeration mode accepts.
        #[arg(long, env = BUDGET_VAR, default_value_t = ENUMERATION_BUDGET)]
        budget: usize,
        /// Write the certificate JSON here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check an interval coloring, certificate or decomposition file.
    Verify {
        graph: String,
        document: PathBuf,
        /// Target for decompositions; defaults to the maximum degree.
        #[arg(long)]
        ell: Option<usize>,
    },
    /// An ell-decomposition into sub-2-factors.
    Decompose {
        graph: String,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = fractotal::decompose::NODE_BUDGET)]
        budget: u64,
    },
    /// A verified interval coloring with ambient Δ+1+ε.
    Construct {
        graph: String,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Rational,
        #[arg(long, default_value_t = ConstructOptions::default().lp_edge_limit)]
        lp_edge_limit: usize,
        #[arg(long, default_value_t = ConstructOptions::default().max_depth)]
        max_depth: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Recolor a random tree under fixed root colors.
    RecolorDemo {
        #[arg(long)]
        delta: usize,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, value_parser = parse_rational)]
        eps_prime: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the tree and both colorings here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The bundled fixtures, with their stored attributes rechecked.
    Fixtures {
        /// Print one fixture as an edge list.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Enumerate,
    ColumnGeneration,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// `fixture:NAME`, a `.g6` file, or an edge-list file.
fn load_graph(source: &str) -> Result<Graph, Failure> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return fixtures::by_name(name)
            .map(|f| f.graph)
            .ok_or_else(|| Failure::Usage(format!("unknown fixture {name:?}")));
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
    let parsed = if Path::new(source).extension().is_some_and(|x| x == "g6") {
        parse_graph6(&text)
    } else {
        parse_edge_list(&text)
    };
    parsed.map_err(|e| Failure::Usage(format!("{source}: {e}")))
}

fn emit(value: &impl Serialize) -> Result<(), Failure> {
    let text = to_json(value)?;
    match writeln!(std::io::stdout(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
        _ => Ok(()),
    }
}

fn to_json(value: &impl Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn info(g: &Graph) -> Result<(), Failure> {
    let cyc = if is_connected(g) {
        cyclic_edge_connectivity(g)
            .map(|c| c.size.to_string())
            .map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        "n/a (disconnected)".into()
    };
    println!("vertices {}", g.vertex_count());
    println!("edges {}", g.edge_count());
    println!("max degree {}", g.max_degree());
    println!("girth {}, cyc-conn {cyc}", girth(g));
    Ok(())
}

fn chi(g: &Graph, mode: Mode, budget: usize, certificate: Option<&Path>) -> Result<(), Failure> {
    let mode = match mode {
        Mode::Enumerate => ChiMode::Enumerate,
        Mode::ColumnGeneration => ChiMode::ColumnGeneration,
    };
    let cert = fractional_total_chromatic_number(g, mode, budget).map_err(|e| match e {
        ChiError::Total(TotalError::BudgetExceeded { .. }) => Failure::Budget(e.to_string()),
        e => Failure::Rejected(e.to_string()),
    })?;
    if let Some(path) = certificate {
        write_file(path, &to_json(&cert.to_doc(g))?)?;
    }
    emit(&json!({
        "value": rational::format(&cert.value),
        "max_degree": g.max_degree(),
        "independent_sets": cert.primal.entries().len(),
    }))
}

fn verify(g: &Graph, document: &Path, ell: Option<usize>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(document).map_err(|e| Failure::Usage(format!("{}: {e}", document.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", document.display())))?;
    let bad = |e: String| Failure::Usage(format!("{}: {e}", document.display()));
    let (kind, problems): (&str, Vec<String>) = if doc.get("ambient").is_some() {
        let doc: IntervalColoringDoc = serde_json::from_value(doc).map_err(|e| bad(e.to_string()))?;
        match IntervalColoring::from_doc(g, &doc) {
            Ok(c) => (
                "interval coloring",
                verify_interval_coloring(g, &c)
                    .err()
                    .unwrap_or_default()
                    .iter()
                    .map(|v| v.describe(g))
                    .collect(),
            ),
            Err(e) => ("interval coloring", vec![e.to_string()]),
        }
    } else if doc.get("dual").is_some() {
        let doc: CertificateDoc = serde_json::from_value(doc).map_err(|e| bad(e.to_string()))?;
        let problem = LpCertificate::from_doc(g, &doc).and_then(|c| verify_certificate(g, &c));
        ("certificate", problem.err().map(|e| e.to_string()).into_iter().collect())
    } else if doc.get("parts").is_some() {
        let doc: DecompositionDoc = serde_json::from_value(doc).map_err(|e| bad(e.to_string()))?;
        let ell = ell.unwrap_or_else(|| g.max_degree());
        match Decomposition::from_doc(g, &doc) {
            Ok(d) => (
                "decomposition",
                verify_decomposition(g, &d, ell)
                    .err()
                    .unwrap_or_default()
                    .iter()
                    .map(|v| format!("{v:?}"))
                    .collect(),
            ),
            Err(e) => ("decomposition", vec![e.to_string()]),
        }
    } else {
        return Err(bad("not a coloring, certificate or decomposition".into()));
    };
    emit(&json!({ "document": kind, "valid": problems.is_empty(), "violations": problems }))?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Rejected(format!("{kind} rejected with {} violations", problems.len())))
    }
}

fn decompose(g: &Graph, ell: usize, budget: u64) -> Result<(), Failure> {
    let d = ell_decomposition(g, ell, budget).map_err(|e| match e {
        DecomposeError::BudgetExhausted(_) => Failure::Budget(e.to_string()),
        DecomposeError::DegreeTooLarge { .. } | DecomposeError::ZeroEll => Failure::Usage(e.to_string()),
        e => Failure::Rejected(e.to_string()),
    })?;
    verify_decomposition(g, &d, ell).map_err(|v| Failure::Rejected(format!("{v:?}")))?;
    emit(&d.to_doc(g))
}

fn construct(g: &Graph, eps: &Rational, opts: &ConstructOptions, trace: bool) -> Result<(), Failure> {
    match construct_coloring(g, eps, opts) {
        Ok(out) => {
            verify_interval_coloring(g, &out.coloring)
                .map_err(|v| Failure::Rejected(format!("{} violations", v.len())))?;
            if trace {
                emit(&json!({ "coloring": out.coloring.to_doc(g), "trace": out.trace }))
            } else {
                emit(&out.coloring.to_doc(g))
            }
        }
        Err(f) => {
            emit(&json!({
                "error": f.reason.to_string(),
                "trace": f.trace,
                "partial": f.partial,
            }))?;
            Err(match f.reason {
                ConstructError::Decompose(DecomposeError::BudgetExhausted(_)) => Failure::Budget(f.reason.to_string()),
                ConstructError::Precondition(_) => Failure::Usage(f.reason.to_string()),
                r => Failure::Rejected(r.to_string()),
            })
        }
    }
}

fn recolor_demo(delta: usize, eps: Rational, eps_prime: Rational, seed: u64, output: Option<&Path>) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = TaskShape::new(delta, eps_prime, eps);
    let params = fractotal::construct::DepthParams::new(delta, &shape.eps_prime, &shape.eps)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let task = random_task(&mut rng, &shape);
    let c = recolor_tree(&task).map_err(|e| Failure::Rejected(e.to_string()))?;
    let t = &task.tree;
    if let Err(v) = verify_interval_coloring(t, &c) {
        return Err(Failure::Rejected(format!("{} violations in the recolored tree", v.len())));
    }
    println!("tree: {} vertices, depth {}, s = {}", t.vertex_count(), params.d, params.s);
    println!("ambient {}", rational::format(&c.ambient));
    let broken = recolor_violations(&task, &params, &c);
    if let Some(path) = output {
        let doc = json!({
            "tree": write_edge_list(t),
            "root": t.label(task.root),
            "x": task.x,
            "y": task.y,
            "base": task.base.to_doc(t),
            "coloring": c.to_doc(t),
        });
        write_file(path, &to_json(&doc)?)?;
    }
    if broken.is_empty() {
        println!("boundary conditions: OK");
        Ok(())
    } else {
        for b in &broken {
            println!("{b}");
        }
        Err(Failure::Rejected("boundary conditions: FAILED".into()))
    }
}

fn list_fixtures(show: Option<&str>) -> Result<(), Failure> {
    if let Some(name) = show {
        let f = fixtures::by_name(name).ok_or_else(|| Failure::Usage(format!("unknown fixture {name:?}")))?;
        print!("{}", write_edge_list(&f.graph));
        return Ok(());
    }
    let mut rows = Vec::new();
    let mut mismatched = Vec::new();
    for f in fixtures::bundled() {
        let g = &f.graph;
        let cyc = cyclic_edge_connectivity(g).map_err(|e| Failure::Usage(e.to_string()))?.size;
        let mut ok = girth(g) == f.girth && g.max_degree() == f.max_degree && cyc == f.cyclic_connectivity;
        if let Some(known) = &f.chi {
            let cert = fractional_total_chromatic_number(g, ChiMode::ColumnGeneration, ENUMERATION_BUDGET)
                .map_err(|e| Failure::Rejected(e.to_string()))?;
            ok &= &cert.value == known;
        }
        if !ok {
            mismatched.push(f.name);
        }
        rows.push(json!({
            "name": f.name,
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "girth": f.girth.to_string(),
            "max_degree": f.max_degree,
            "cyclic_connectivity": f.cyclic_connectivity.to_string(),
            "chi": f.chi.as_ref().map(rational::format),
            "attributes_match": ok,
        }));
    }
    emit(&rows)?;
    if mismatched.is_empty() {
        Ok(())
    } else {
        Err(Failure::Rejected(format!("attribute mismatch: {}", mismatched.join(", "))))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Info { graph } => info(&load_graph(&graph)?),
        Command::Chi {
            graph,
            mode,
            budget,
            certificate,
        } => chi(&load_graph(&graph)?, mode, budget, certificate.as_deref()),
        Command::Verify { graph, document, ell } => verify(&load_graph(&graph)?, &document, ell),
        Command::Decompose { graph, ell, budget } => decompose(&load_graph(&graph)?, ell, budget),
        Command::Construct {
            graph,
            epsilon,
            lp_edge_limit,
            max_depth,
            trace,
        } => {
            let opts = ConstructOptions {
                lp_edge_limit,
                max_depth,
                ..ConstructOptions::default()
            };
            construct(&load_graph(&graph)?, &epsilon, &opts, trace)
        }
        Command::RecolorDemo {
            delta,
            eps,
            eps_prime,
            seed,
            output,
        } => recolor_demo(delta, eps, eps_prime, seed, output.as_deref()),
        Command::Fixtures { show } => list_fixtures(show.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
