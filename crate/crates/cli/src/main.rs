use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qtsp::format::InstanceFile;
use qtsp::graphs::{Family, GStarGraph, MeeGraph, NeighborhoodGraph, PvGraph};
use qtsp::instance::{validate_tour, Instance};
use qtsp::model::CostModel;
use qtsp::oracle::oracle_tour_capped;
use qtsp::reductions::generators::{
    partition_dee, partition_pv, partition_see, random_adjacent, random_full, random_linear, random_rank, tsp_mee,
    ubqp_pv, ubqp_see,
};
use qtsp::solver::{route, solve, SolveOptions, SolverKind};
use qtsp::Error;

const AFTER_HELP: &str = "\
Exit codes: 0 success, 1 usage error, 2 infeasible or over the oracle cap, 3 internal invariant violation.

`--solver auto` routing:
  linear costs on PV          greedy (reported as exact-dp)
  linear costs on MEE         matching
  rank costs on SEE, DEE, PV  reduction + exact QSPP (exact-dp)
  adjacent on SEE, DEE, PV    adjacent-dp
  anything else               oracle, refused above the cap
auto never falls back to an approximate solver.";

#[derive(Parser)]
#[command(name = "qtsp", version, about = "Quadratic TSP over SEE, DEE, PV and MEE tours", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an instance file to stdout (or --out).
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance; the result record goes to stdout, the wall time to stderr.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Compare the closed-form tour count with enumeration.
    Count {
        file: PathBuf,
        #[arg(long, default_value_t = qtsp::oracle::DEFAULT_TOUR_CAP)]
        cap: u128,
    },
    /// Check a solver against the oracle, on a file or on `--count` seeded instances.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, default_value = "oracle")]
        against: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// CSV timing rows `family,n,solver,value,micros` over growing sizes.
    Bench {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Number of cycles (SEE, DEE), vertices (PV) or ring length (MEE).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Cycle length for SEE and DEE.
        #[arg(long, default_value_t = 4)]
        cycle_len: usize,
        #[arg(long, default_value = "adjacent")]
        model: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value = "auto", value_parser = parse_solver)]
    solver: SolverKind,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = qtsp::oracle::DEFAULT_TOUR_CAP)]
    oracle_cap: u128,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions { eps: self.eps, oracle_cap: self.oracle_cap }
    }
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Cycle lengths (SEE, DEE) or `r,s` (MEE).
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Vertex count for PV.
    #[arg(long)]
    n: Option<usize>,
    /// full, rank, linear or adjacent.
    #[arg(long, default_value = "rank")]
    model: String,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    from_partition: Option<Vec<i64>>,
    /// JSON square matrix.
    #[arg(long)]
    from_ubqp: Option<PathBuf>,
    /// JSON symmetric square matrix.
    #[arg(long)]
    from_tsp: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn read_matrix(path: &PathBuf) -> CliResult<Vec<Vec<i64>>> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_instance(path: &PathBuf) -> CliResult<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(InstanceFile::parse(&text)?)
}

fn build_graph(family: Family, sizes: &[usize], n: Option<usize>) -> CliResult<NeighborhoodGraph> {
    Ok(match family {
        Family::See | Family::Dee => {
            if sizes.is_empty() {
                return usage("--sizes r1,r2,... is required for see and dee");
            }
            NeighborhoodGraph::GStar(GStarGraph::new(sizes)?)
        }
        Family::Pv => {
            let n = match (n, sizes) {
                (Some(n), _) => n,
                (None, [n]) => *n,
                _ => return usage("--n is required for pv"),
            };
            NeighborhoodGraph::Pv(PvGraph::new(n)?)
        }
        Family::Mee => match sizes {
            [r, s] => NeighborhoodGraph::Mee(MeeGraph::new(*r, *s)?),
            _ => return usage("--sizes r,s is required for mee"),
        },
    })
}

fn random_costs(g: &NeighborhoodGraph, model: &str, p: usize, lo: Option<i64>, hi: Option<i64>, rng: &mut ChaCha8Rng) -> CliResult<CostModel> {
    let (dlo, dhi) = if model == "adjacent" { (0, 9) } else { (-5, 5) };
    let (lo, hi) = (lo.unwrap_or(dlo), hi.unwrap_or(dhi));
    if lo > hi {
        return usage(format!("empty weight range [{lo}, {hi}]"));
    }
    let gr = g.graph();
    Ok(match model {
        "full" => CostModel::Full(random_full(gr, lo, hi, rng)),
        "rank" => CostModel::Rank(random_rank(gr, p, lo, hi, false, rng)),
        "linear" => CostModel::Rank(random_linear(gr, lo, hi, rng)),
        "adjacent" => CostModel::Adjacent(random_adjacent(gr, lo, hi, rng)),
        other => return usage(format!("unknown model {other:?}; expected full, rank, linear or adjacent")),
    })
}

/// The instance described by `args` with index `k` of a seeded suite.
fn generate(args: &GenArgs, k: usize) -> CliResult<InstanceFile> {
    let sources = [args.from_partition.is_some(), args.from_ubqp.is_some(), args.from_tsp.is_some()];
    if sources.iter().filter(|&&b| b).count() > 1 {
        return usage("--from-partition, --from-ubqp and --from-tsp are exclusive");
    }
    if let Some(alpha) = &args.from_partition {
        let fam = args.family.unwrap_or(Family::See);
        let inst = match fam {
            Family::See => partition_see(alpha)?,
            Family::Dee => partition_dee(alpha)?,
            Family::Pv => partition_pv(alpha)?,
            Family::Mee => return usage("--from-partition builds see, dee or pv instances"),
        };
        return Ok(InstanceFile::new(inst, json!({"generator": "partition", "alpha": alpha})));
    }
    if let Some(path) = &args.from_ubqp {
        let q = read_matrix(path)?;
        let inst = match args.family.unwrap_or(Family::See) {
            Family::See => ubqp_see(&q)?,
            Family::Pv => ubqp_pv(&q)?,
            _ => return usage("--from-ubqp builds see or pv instances"),
        };
        return Ok(InstanceFile::new(inst, json!({"generator": "ubqp", "q": q})));
    }
    if let Some(path) = &args.from_tsp {
        if args.family.is_some_and(|f| f != Family::Mee) {
            return usage("--from-tsp builds mee instances only");
        }
        let c = read_matrix(path)?;
        return Ok(InstanceFile::new(tsp_mee(&c)?, json!({"generator": "tsp", "c": c})));
    }
    let Some(fam) = args.family else {
        return usage("--family is required");
    };
    let g = build_graph(fam, &args.sizes, args.n)?;
    let seed = args.seed.wrapping_add(k as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs = random_costs(&g, &args.model, args.rank, args.lo, args.hi, &mut rng)?;
    let inst = Instance::new(g, fam, costs)?;
    Ok(InstanceFile::new(inst, json!({"generator": "random", "model": args.model, "seed": seed})))
}

fn tour_json(t: &qtsp::model::Tour) -> Value {
    json!(t.vertices().iter().map(|v| v.0).collect::<Vec<_>>())
}

fn print(v: &Value) {
    println!("{v}");
}

fn cmd_solve(file: &PathBuf, s: &SolverArgs) -> CliResult<()> {
    let f = read_instance(file)?;
    let start = Instant::now();
    let sol = solve(&f.instance, s.solver, &s.options())?;
    let micros = start.elapsed().as_micros();
    print(&json!({"solver": sol.solver.name(), "value": sol.value, "tour": tour_json(&sol.tour)}));
    eprintln!("time: {micros} us");
    Ok(())
}

fn cmd_count(file: &PathBuf, cap: u128) -> CliResult<()> {
    let f = read_instance(file)?;
    let inst = &f.instance;
    let formula = inst.count()?;
    let mut out = json!({"family": inst.family.name(), "formula": formula.to_string()});
    if formula <= cap {
        let enumerated = inst.tours()?.count() as u128;
        out["enumerated"] = json!(enumerated.to_string());
        out["agrees"] = json!(enumerated == formula);
    } else {
        out["enumerated"] = Value::Null;
        out["note"] = json!(format!("enumeration skipped above the cap {cap}"));
    }
    if let (NeighborhoodGraph::GStar(g), Family::Dee) = (&inst.graph, inst.family) {
        let r = g.dee_count_report();
        out["closed_form"] = json!(r.closed_form.to_string());
        out["closed_form_agrees"] = json!(r.agrees);
    }
    let agrees = out["agrees"].as_bool() != Some(false);
    print(&out);
    if agrees {
        Ok(())
    } else {
        Err(Failure::Lib(Error::Invariant("count formula disagrees with enumeration".into())))
    }
}

fn cmd_verify(file: &Option<PathBuf>, against: &str, s: &SolverArgs, gen: &GenArgs, count: usize) -> CliResult<()> {
    if against != "oracle" {
        return usage(format!("can only verify against the oracle, not {against:?}"));
    }
    let files = match file {
        Some(path) => vec![read_instance(path)?],
        None => (0..count).map(|k| generate(gen, k)).collect::<CliResult<Vec<_>>>()?,
    };
    let opts = s.options();
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for f in &files {
        let inst = &f.instance;
        let sol = solve(inst, s.solver, &opts)?;
        let oracle = oracle_tour_capped(inst, opts.oracle_cap)?;
        let report = validate_tour(&sol.tour, inst);
        let equal = sol.value == oracle.value && report.ok();
        if !equal {
            mismatches += 1;
        }
        rows.push(json!({
            "solver": sol.solver.name(),
            "value": sol.value,
            "oracle": oracle.value,
            "valid_tour": report.ok(),
            "equal": equal,
        }));
    }
    print(&json!({"instances": files.len(), "all_equal": mismatches == 0, "results": rows}));
    if mismatches == 0 {
        Ok(())
    } else {
        Err(Failure::Lib(Error::Invariant(format!("{mismatches} solver results differ from the oracle"))))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(family: Family, sizes: &[usize], cycle_len: usize, model: &str, p: usize, reps: usize, seed: u64, s: &SolverArgs) -> CliResult<()> {
    println!("family,n,solver,value,micros");
    let opts = s.options();
    for &size in sizes {
        let g = match family {
            Family::See | Family::Dee => NeighborhoodGraph::GStar(GStarGraph::new(&vec![cycle_len; size])?),
            Family::Pv => NeighborhoodGraph::Pv(PvGraph::new(size)?),
            Family::Mee => NeighborhoodGraph::Mee(MeeGraph::new(size, size)?),
        };
        for rep in 0..reps {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(rep as u64));
            let costs = random_costs(&g, model, p, None, None, &mut rng)?;
            let inst = Instance::new(g.clone(), family, costs)?;
            let n = g.graph().num_vertices();
            let start = Instant::now();
            match solve(&inst, s.solver, &opts) {
                Ok(sol) => println!("{family},{n},{},{},{}", sol.solver, sol.value, start.elapsed().as_micros()),
                Err(e @ (Error::CapExceeded { .. } | Error::NoPath)) => {
                    let kind = if s.solver == SolverKind::Auto { route(&inst) } else { s.solver };
                    eprintln!("{family} n={n}: {e}");
                    println!("{family},{n},{kind},,");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.cmd {
        Cmd::Gen { gen, out } => {
            let text = generate(gen, 0)?.render();
            match out {
                Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Cmd::Solve { file, solver } => cmd_solve(file, solver),
        Cmd::Count { file, cap } => cmd_count(file, *cap),
        Cmd::Verify { file, against, solver, gen, count } => cmd_verify(file, against, solver, gen, *count),
        Cmd::Bench { family, sizes, cycle_len, model, rank, reps, seed, solver } => {
            cmd_bench(*family, sizes, *cycle_len, model, *rank, *reps, *seed, solver)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::NoPath => 2,
        Error::Invariant(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
