use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gonality::bielliptic::{embed_bielliptic, low_betti_drawing};
use gonality::bounds::{bounds_report, FamilyHint, Treewidth};
use gonality::catalog::{catalog, NAMES};
use gonality::drawing::{verify_drawing, Drawing};
use gonality::embed::embed_hyperelliptic;
use gonality::generate::{random_bielliptic, random_hyperelliptic};
use gonality::graph::{betti_genus, find_bridges};
use gonality::hecke::{parse_hecke, reduced_dual_graph};
use gonality::involution::{detect_bielliptic, detect_hyperelliptic, DEFAULT_BUDGET};
use gonality::io::{parse_graph, parse_involution, write_graph};
use gonality::rotation::{is_planar, minimum_genus_with_count};
use gonality::{Error, Involution, MultiGraph};

#[derive(Parser)]
#[command(name = "gonality", version, about = "Involutions, embeddings and gonality bounds for multigraphs")]
struct Cli {
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Cycle rank, bridges, involution verdicts and gonality bounds.
    Analyze {
        /// Graph file; stdin when omitted or `-`.
        graph: Option<PathBuf>,
    },
    /// Constructive plane or torus drawing, verified.
    Embed {
        graph: Option<PathBuf>,
        /// SVG output path; defaults to the `--out` path with extension `.svg`.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print one line per construction step to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Quotient of a graph by an involution.
    Quotient { graph: PathBuf, involution: PathBuf },
    /// Minimum orientable genus by exhaustive search.
    Genus { graph: Option<PathBuf> },
    /// Catalog graph, or a seeded random `hyperelliptic`/`bielliptic` graph.
    Gen { family: String, params: Vec<usize> },
    /// Reduced dual graph of a Hecke pattern file.
    Dualgraph { matrix: PathBuf },
    /// Checks a drawing JSON file.
    Verify { drawing: PathBuf },
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::BudgetExceeded { .. } => (3, "budget-exceeded"),
            Error::Parse { .. } => (2, "parse"),
            Error::InvalidInput(_) | Error::UnknownEntry(_) | Error::MissingVertex(_) | Error::MissingEdge(_) => {
                (2, "invalid-input")
            }
            Error::LoopEdge(_) | Error::Disconnected => (2, "unsupported-graph"),
            Error::InvalidInvolution(_) | Error::NotMixing => (2, "invalid-involution"),
            Error::Crossing(..) => (1, "crossing"),
            Error::Certificate(_) => (1, "certificate"),
            Error::InvalidDrawing(_) => (1, "invalid-drawing"),
            Error::LemmaViolation(_) => (1, "lemma-violation"),
            Error::Unsupported(_) => (1, "unsupported"),
            Error::Internal(_) => (1, "internal"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure { code: 2, kind: "io", message: format!("{}: {e}", path.display()) }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    budget: u64,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, text: &str) -> Outcome {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e))
            }
        }
    }

    fn emit_json(&self, v: &Value) -> Outcome {
        self.emit(&(serde_json::to_string_pretty(v).expect("json") + "\n"))
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).map_err(|e| io_failure(p, e)),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| io_failure(Path::new("<stdin>"), e))?;
            Ok(s)
        }
    }
}

/// `# family <name> <params>` comment written by `gen`, honoured only when
/// the graph really is that catalog graph.
fn family_hint(text: &str, g: &MultiGraph) -> FamilyHint {
    let Some(line) = text.lines().find_map(|l| l.trim().strip_prefix("# family ")) else {
        return FamilyHint::None;
    };
    let mut parts = line.split_whitespace();
    let name = parts.next().unwrap_or_default();
    let Ok(params) = parts.map(str::parse::<usize>).collect::<Result<Vec<_>, _>>() else {
        return FamilyHint::None;
    };
    match catalog(name, &params) {
        Ok(entry) if entry.graph == *g => match (name, params.as_slice()) {
            ("grid", &[d, n]) => FamilyHint::Grid { d, n },
            ("complete_bipartite", &[d, n]) => FamilyHint::CompleteBipartite { d, n },
            ("hypercube", &[n]) => FamilyHint::Hypercube { n },
            _ => FamilyHint::None,
        },
        _ => FamilyHint::None,
    }
}

fn verdict(r: &Result<bool, Error>) -> Value {
    match r {
        Ok(b) => json!(b),
        Err(Error::BudgetExceeded { .. }) => json!("unknown: budget exceeded"),
        Err(e) => json!(format!("n/a: {e}")),
    }
}

fn analyze(ctx: &Ctx, path: Option<&Path>) -> Outcome {
    let text = read_input(path)?;
    let file = parse_graph(&text)?;
    let g = &file.graph;
    let genus = betti_genus(g);
    let bridges: Vec<usize> = find_bridges(g).into_iter().map(|e| e.0).collect();
    let hyper = detect_hyperelliptic(g, ctx.budget).map(|d| d.verdict);
    let bi = detect_bielliptic(g, ctx.budget).map(|d| d.verdict);
    let hint = family_hint(&text, g);
    let report = bounds_report(g, hint, ctx.budget)?;
    let lambda1 = report.spectrum.get(1).copied();
    let tw = match report.treewidth {
        Treewidth::Exact(t) => t.to_string(),
        Treewidth::Bounds { lower, upper } => format!("{lower}..{upper}"),
    };
    let budget_hit = [&hyper, &bi].iter().any(|r| matches!(r, Err(Error::BudgetExceeded { .. })));
    if ctx.format == Format::Json {
        ctx.emit_json(&json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "betti": genus.betti,
            "bridges": bridges,
            "hyperelliptic": verdict(&hyper),
            "bielliptic": verdict(&bi),
            "bounds": report,
        }))?;
    } else {
        let mut s = String::new();
        s += &format!("vertices      {}\nedges         {}\nbetti         {}\n", g.vertex_count(), g.edge_count(), genus.betti);
        s += &format!("bridges       {} {:?}\n", bridges.len(), bridges);
        s += &format!("hyperelliptic {}\nbielliptic    {}\n\n", verdict(&hyper), verdict(&bi));
        s += "graph  tw  lower  upper  witness_degree  lambda1\n";
        let upper = report.gonality_upper.map_or("-".to_string(), |u| u.to_string());
        s += &format!(
            "G      {tw}  {}  {upper}  {upper}  {}\n",
            report.gonality_lower,
            lambda1.map_or("-".to_string(), |l| format!("{l:.6}"))
        );
        if let Some(w) = &report.witness {
            s += &format!("witness: {w}\n");
        }
        s += &format!("lower bound source: {:?}\n", report.lower_source).to_lowercase();
        ctx.emit(&s)?;
    }
    if budget_hit {
        return Err(Failure { code: 3, kind: "budget-exceeded", message: "involution search hit the budget".into() });
    }
    Ok(())
}

fn embed(ctx: &Ctx, path: Option<&Path>, svg: Option<&Path>, trace: bool) -> Outcome {
    let text = read_input(path)?;
    let file = parse_graph(&text)?;
    let g = &file.graph;
    let pick = |inv: &Involution| -> Result<(Drawing, Vec<String>), Error> {
        let betti = betti_genus(&inv.quotient()?.quotient).betti;
        match betti {
            0 => embed_hyperelliptic(g, inv).map(|e| (e.drawing, e.trace)),
            1 => embed_bielliptic(g, inv).map(|e| (e.drawing, e.trace)),
            b => Err(Error::Unsupported(format!("quotient has cycle rank {b}; only 0 and 1 are drawn"))),
        }
    };
    let (drawing, steps) = match &file.involution {
        Some(inv) => pick(inv)?,
        None => {
            if let Some(inv) = detect_hyperelliptic(g, ctx.budget)?.witness {
                pick(&inv)?
            } else if let Some(inv) = detect_bielliptic(g, ctx.budget)?.witness {
                pick(&inv)?
            } else if betti_genus(g).betti <= 2 {
                (low_betti_drawing(g)?, vec!["no involution needed: cycle rank <= 2".into()])
            } else {
                return Err(Error::Unsupported("graph is neither hyperelliptic nor bielliptic".into()).into());
            }
        }
    };
    if trace {
        for line in &steps {
            eprintln!("{line}");
        }
    }
    let report = verify_drawing(&drawing)?;
    ctx.emit(&drawing.to_json())?;
    let svg_path = svg.map(Path::to_path_buf).or_else(|| ctx.out.as_ref().map(|p| p.with_extension("svg")));
    if let Some(p) = &svg_path {
        fs::write(p, drawing.to_svg()).map_err(|e| io_failure(p, e))?;
    }
    let surface = format!("{:?}", drawing.surface).to_lowercase();
    let line = format!(
        "verified: surface {surface}, genus {}, faces {}, certificates {}",
        report.orientable_genus,
        report.face_count,
        drawing.certificates.len()
    );
    if ctx.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn quotient_cmd(ctx: &Ctx, graph: &Path, inv: &Path) -> Outcome {
    let file = parse_graph(&read_input(Some(graph))?)?;
    let inv = parse_involution(&file.graph, &read_input(Some(inv))?)?;
    let qr = inv.quotient()?;
    if ctx.format == Format::Json {
        ctx.emit_json(&json!({
            "quotient": write_graph(&qr.quotient, None),
            "betti": betti_genus(&qr.quotient).betti,
            "fixed_vertices": qr.fixed_vertices,
            "projection": qr.projection.maps(),
        }))
    } else {
        let mut s = write_graph(&qr.quotient, None);
        s += &format!("# betti {}\n", betti_genus(&qr.quotient).betti);
        s += &format!("# vertex map {:?}\n", qr.projection.vertex_map());
        ctx.emit(&s)
    }
}

fn genus_cmd(ctx: &Ctx, path: Option<&Path>) -> Outcome {
    let file = parse_graph(&read_input(path)?)?;
    let (genus, visited) = minimum_genus_with_count(&file.graph, ctx.budget)?;
    if ctx.format == Format::Json {
        ctx.emit_json(&json!({ "genus": genus, "rotation_systems_visited": visited }))
    } else {
        ctx.emit(&format!("genus {genus}\nrotation systems visited {visited}\n"))
    }
}

fn gen(ctx: &Ctx, family: &str, params: &[usize]) -> Outcome {
    let (g, inv) = match (family, params) {
        ("hyperelliptic", &[max]) => {
            let (g, i) = random_hyperelliptic(ctx.seed, max);
            (g, Some(i))
        }
        ("bielliptic", &[max]) => {
            let (g, i) = random_bielliptic(ctx.seed, max);
            (g, Some(i))
        }
        ("hyperelliptic" | "bielliptic", _) => {
            return Err(Error::InvalidInput(format!("{family} takes one size parameter")).into())
        }
        _ => (catalog(family, params)?.graph, None),
    };
    let mut s = String::new();
    if inv.is_none() {
        let ps: Vec<String> = params.iter().map(usize::to_string).collect();
        s += &format!("# family {family} {}\n", ps.join(" "));
    }
    s += &write_graph(&g, inv.as_ref());
    ctx.emit(&s)
}

fn dualgraph(ctx: &Ctx, path: &Path) -> Outcome {
    let h = parse_hecke(&read_input(Some(path))?)?;
    let g = reduced_dual_graph(&h);
    let planar = is_planar(&g);
    if ctx.format == Format::Json {
        ctx.emit_json(&json!({ "graph": write_graph(&g, None), "planar": planar, "labels": h.labels }))
    } else {
        ctx.emit(&format!("{}# planar {planar}\n", write_graph(&g, None)))
    }
}

fn verify(ctx: &Ctx, path: &Path) -> Outcome {
    let d = Drawing::from_json(&read_input(Some(path))?)?;
    let r = verify_drawing(&d)?;
    let surface = format!("{:?}", d.surface).to_lowercase();
    if ctx.format == Format::Json {
        ctx.emit_json(&json!({
            "ok": true,
            "surface": surface,
            "genus": r.orientable_genus,
            "faces": r.face_count,
            "certificates": d.certificates.len(),
        }))
    } else {
        ctx.emit(&format!(
            "ok: surface {surface}, genus {}, faces {}, certificates {}\n",
            r.orientable_genus,
            r.face_count,
            d.certificates.len()
        ))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx { budget: cli.budget, seed: cli.seed, format: cli.format, out: cli.out.clone() };
    let result = match &cli.command {
        Command::Analyze { graph } => analyze(&ctx, graph.as_deref()),
        Command::Embed { graph, svg, trace } => embed(&ctx, graph.as_deref(), svg.as_deref(), *trace),
        Command::Quotient { graph, involution } => quotient_cmd(&ctx, graph, involution),
        Command::Genus { graph } => genus_cmd(&ctx, graph.as_deref()),
        Command::Gen { family, params } => gen(&ctx, family, params),
        Command::Dualgraph { matrix } => dualgraph(&ctx, matrix),
        Command::Verify { drawing } => verify(&ctx, drawing),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if ctx.format == Format::Json {
                println!("{}", json!({ "error": { "kind": f.kind, "message": f.message } }));
            } else {
                eprintln!("error: {}", f.message);
                if f.kind == "invalid-input" && f.message.contains("unknown catalog entry") {
                    eprintln!("known families: {}, hyperelliptic, bielliptic", NAMES.join(", "));
                }
            }
            ExitCode::from(f.code)
        }
    }
}
