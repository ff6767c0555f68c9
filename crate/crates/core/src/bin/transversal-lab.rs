use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use transversal_lab::bounds::{certify_with, TheoremId};
use transversal_lab::domination::{check_3n7, onh, pipeline_3n7, total_domination};
use transversal_lab::family_b::{generate_all_b, verify_lemma5, Recognizer};
use transversal_lab::instances::{named, random_hypergraph, scan_conjectures, Conjecture, GeneratorConfig, Mode, Named};
use transversal_lab::io::{parse_gr, parse_hg, write_gr, write_hg};
use transversal_lab::report::{InputDigest, RunReport};
use transversal_lab::solver::{tau_bruteforce_constrained, Constraints, Solver};
use transversal_lab::Error;

#[derive(Parser)]
#[command(name = "transversal-lab", version, about = "Exact transversals, bad hypergraphs and total domination bounds")]
struct Cli {
    /// Emit a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for batch commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum transversal of a .hg file.
    Solve(SolveArgs),
    /// Evaluate a transversal bound on a .hg file.
    Bound {
        file: PathBuf,
        #[arg(long)]
        theorem: String,
    },
    /// Write every bad hypergraph up to `max-n` vertices with its certificate.
    GenB {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the thirteen-part check on every bad hypergraph up to `max-n`.
    VerifyLemma5 {
        #[arg(long)]
        max_n: usize,
    },
    /// Seeded random hypergraph.
    Random(RandomArgs),
    /// Print or write a stored instance.
    Instance {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Open neighbourhood hypergraph of a .gr file.
    Onh {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Total domination number of a .gr file.
    Gammat {
        file: PathBuf,
        /// Also run the 3n/7 construction and bound check.
        #[arg(long)]
        pipeline: bool,
    },
    /// Scan random linear 4-uniform hypergraphs against a conjecture.
    Scan {
        conjecture: String,
        #[arg(long)]
        n: usize,
        /// Seed range `A..B`.
        #[arg(long, default_value = "0..1000")]
        seeds: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Directory for violation artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Brute,
    Bnb,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "bnb")]
    engine: Engine,
    #[arg(long, value_delimiter = ',')]
    include: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    forbid: Vec<usize>,
    /// Return the lexicographically smallest minimum transversal.
    #[arg(long)]
    canonical: bool,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, group = "mode")]
    regular: Option<usize>,
    #[arg(long, group = "mode")]
    max_degree: Option<usize>,
    #[arg(long, group = "mode")]
    linear: bool,
    #[arg(long, group = "mode")]
    any: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long)]
    allow_multi: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Everything that ends a run early. Usage covers bad arguments and I/O.
enum Failure {
    Tool(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Tool(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Tool(e) => match e {
                Error::Unsupported(_) | Error::InstanceTooHard(_) | Error::InstanceTooLarge { .. } => 3,
                Error::BoundViolated(_) | Error::CertificateMismatch => 1,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Tool(e) => write!(f, "{e}"),
            Failure::Usage(e) => f.write_str(e),
        }
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    json: bool,
    started: Instant,
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest::of(&path.display().to_string(), text.as_bytes()));
        Ok(text)
    }

    fn write(&self, path: &Path, text: &str) -> Result<(), Failure> {
        fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    /// Prints either the JSON run report or the text lines.
    fn emit(&self, command: &str, result: impl Serialize, text: impl FnOnce() -> String) -> Result<(), Failure> {
        if self.json {
            let value = serde_json::to_value(result).map_err(|e| Failure::Usage(e.to_string()))?;
            let report = RunReport::new(command, self.inputs.clone(), value, self.started);
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?);
        } else {
            println!("{}", text());
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut ctx = Ctx {
        json: cli.json,
        started: Instant::now(),
        inputs: Vec::new(),
    };
    match run(cli.command, &mut ctx) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command, ctx: &mut Ctx) -> Outcome {
    let solver = Solver::from_env();
    match command {
        Command::Solve(args) => solve(args, ctx, solver),
        Command::Bound { file, theorem } => {
            let theorem: TheoremId = theorem.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let h = parse_hg(&ctx.read(&file)?)?;
            let report = certify_with(&h, theorem, &solver, &Recognizer::new())?;
            ctx.emit("bound", &report, || report.to_string())?;
            Ok(report.passes())
        }
        Command::GenB { max_n, out } => {
            let members = generate_all_b(max_n)?;
            fs::create_dir_all(&out).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            let mut files = Vec::new();
            for (i, m) in members.iter().enumerate() {
                let stem = format!("b{:02}_{i:04}", m.hypergraph.n());
                ctx.write(&out.join(format!("{stem}.hg")), &write_hg(&m.hypergraph, false))?;
                let cert = serde_json::to_string_pretty(&m.certificate).map_err(|e| Failure::Usage(e.to_string()))?;
                ctx.write(&out.join(format!("{stem}.cert")), &cert)?;
                files.push(stem);
            }
            let summary = json!({ "max_n": max_n, "members": members.len(), "files": files });
            ctx.emit("gen-b", &summary, || {
                format!("wrote {} members with n <= {max_n} to {}", members.len(), out.display())
            })?;
            Ok(true)
        }
        Command::VerifyLemma5 { max_n } => {
            use rayon::prelude::*;
            let members = generate_all_b(max_n)?;
            let reports = members
                .par_iter()
                .map(|m| verify_lemma5(m, &solver))
                .collect::<Result<Vec<_>, _>>()?;
            let ok = reports.iter().all(|r| r.all_pass());
            ctx.emit("verify-lemma5", &reports, || {
                let mut lines: Vec<String> = reports
                    .iter()
                    .filter(|r| !r.all_pass())
                    .map(|r| {
                        let parts: Vec<String> = r.failures().iter().map(|c| format!("{}: {}", c.part, c.detail.clone().unwrap_or_default())).collect();
                        format!("FAIL n={} m={} [{}] {}", r.n, r.m, r.certificate, parts.join("; "))
                    })
                    .collect();
                lines.push(format!(
                    "{} of {} members pass all thirteen checks",
                    reports.iter().filter(|r| r.all_pass()).count(),
                    reports.len()
                ));
                lines.join("\n")
            })?;
            Ok(ok)
        }
        Command::Random(args) => {
            let mode = match (args.regular, args.max_degree, args.linear, args.any) {
                (Some(d), None, false, false) => Mode::Regular(d),
                (None, Some(d), false, false) => Mode::MaxDegree(d),
                (None, None, true, false) => Mode::Linear,
                (None, None, false, true) => Mode::Any,
                _ => {
                    return Err(Failure::Usage(
                        "choose exactly one of --regular, --max-degree, --linear, --any".into(),
                    ))
                }
            };
            let mut cfg = GeneratorConfig::new(args.k, args.n, mode, args.seed).allowing_multi(args.allow_multi);
            cfg.edges = args.edges;
            let h = random_hypergraph(&cfg)?;
            let text = write_hg(&h, true);
            if let Some(path) = &args.output {
                ctx.write(path, &text)?;
            }
            ctx.emit("random", json!({ "config": cfg, "digest": h.digest(), "hg": text }), || {
                if args.output.is_some() {
                    format!("wrote n={} m={} digest {}", h.n(), h.m(), h.digest())
                } else {
                    text.trim_end().to_string()
                }
            })?;
            Ok(true)
        }
        Command::Instance { name, output } => {
            let (kind, text) = match named(&name)? {
                Named::Hypergraph(h) => ("hypergraph", write_hg(&h, true)),
                Named::Graph(g) => ("graph", write_gr(&g)),
            };
            if let Some(path) = &output {
                ctx.write(path, &text)?;
            }
            ctx.emit("instance", json!({ "name": name, "kind": kind, "text": text }), || {
                match &output {
                    Some(p) => format!("wrote {name} to {}", p.display()),
                    None => text.trim_end().to_string(),
                }
            })?;
            Ok(true)
        }
        Command::Onh { file, output } => {
            let g = parse_gr(&ctx.read(&file)?)?;
            let h = onh(&g)?;
            let text = write_hg(&h, false);
            if let Some(path) = &output {
                ctx.write(path, &text)?;
            }
            ctx.emit(
                "onh",
                json!({ "n": h.n(), "m": h.m(), "components": h.components().len(), "hg": text }),
                || match &output {
                    Some(p) => format!("wrote ONH (n={}, m={}) to {}", h.n(), h.m(), p.display()),
                    None => text.trim_end().to_string(),
                },
            )?;
            Ok(true)
        }
        Command::Gammat { file, pipeline } => {
            let g = parse_gr(&ctx.read(&file)?)?;
            let (gt, set) = total_domination(&g, &solver)?;
            if !pipeline {
                ctx.emit("gammat", json!({ "gamma_t": gt, "set": set.vertices }), || {
                    format!("γt = {gt}; set {:?}", set.vertices)
                })?;
                return Ok(true);
            }
            let bound = check_3n7(&g, &solver)?;
            let built = pipeline_3n7(&g, &solver)?;
            let ok = bound.passes();
            ctx.emit(
                "gammat",
                json!({ "gamma_t": gt, "set": set.vertices, "bound": bound, "pipeline": built }),
                || {
                    format!(
                        "γt = {gt}\n{bound}\npipeline: {} vertices (⌊3n/7⌋ = {}), peeled {:?}",
                        built.transversal.len(),
                        built.bound,
                        built.peeled
                    )
                },
            )?;
            Ok(ok)
        }
        Command::Scan {
            conjecture,
            n,
            seeds,
            k,
            out,
        } => {
            let which: Conjecture = conjecture.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let range = parse_range(&seeds)?;
            let cfg = GeneratorConfig::new(k, n, Mode::Linear, range.start);
            let report = scan_conjectures(&cfg, which, range, &solver)?;
            if let Some(dir) = &out {
                if !report.violations.is_empty() {
                    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                }
                for v in &report.violations {
                    let stem = format!("{which}_n{}_seed{}", v.n, v.seed.unwrap_or_default());
                    ctx.write(&dir.join(format!("{stem}.hg")), &v.hg)?;
                    let provenance = json!({
                        "conjecture": which,
                        "seed": v.seed,
                        "n": v.n,
                        "k": k,
                        "tau": v.tau,
                        "lhs": v.lhs,
                        "rhs": v.rhs,
                        "digest": v.digest,
                        "verified_by": "brute force",
                    });
                    ctx.write(&dir.join(format!("{stem}.json")), &provenance.to_string())?;
                }
            }
            ctx.emit("scan", &report, || {
                let mut lines = vec![format!(
                    "{which} ({}) on {} linear {k}-uniform instances, n = {n}: {} violations, {} tight, max ratio {}/{}",
                    report.statement,
                    report.instances,
                    report.violations.len(),
                    report.tight_count,
                    report.max_ratio[0],
                    report.max_ratio[1]
                )];
                for r in &report.reference {
                    lines.push(format!(
                        "reference {}: τ = {}, {} vs {}{}",
                        r.name.clone().unwrap_or_default(),
                        r.tau,
                        r.lhs,
                        r.rhs,
                        if r.is_tight() { " (tight)" } else { "" }
                    ));
                }
                lines.join("\n")
            })?;
            Ok(report.violations.is_empty())
        }
    }
}

fn solve(args: SolveArgs, ctx: &mut Ctx, solver: Solver) -> Outcome {
    let h = parse_hg(&ctx.read(&args.file)?)?;
    let constraints = Constraints {
        must_include: args.include,
        forbidden: args.forbid,
    };
    let result = match args.engine {
        Engine::Bnb => solver.canonical(args.canonical).solve_constrained(&h, &constraints)?,
        // Brute force always returns the lexicographically smallest witness.
        Engine::Brute => tau_bruteforce_constrained(&h, &constraints)?,
    };
    ctx.emit("solve", &result, || {
        format!(
            "tau = {}\nwitness = {:?}\nnodes = {}",
            result.tau, result.witness.vertices, result.stats.nodes
        )
    })?;
    Ok(true)
}

fn parse_range(text: &str) -> Result<std::ops::Range<u64>, Failure> {
    let bad = || Failure::Usage(format!("seed range must look like A..B, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a >= b {
        return Err(bad());
    }
    Ok(a..b)
}
