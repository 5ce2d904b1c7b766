//! `cars` command-line tool: single runs, benchmark grids, performance
//! profiles and the convex-quartic experiment.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cars::bench::{self, DEFAULT_BUDGET, DEFAULT_SEEDS};
use cars::cars::CarsConfig;
use cars::holder::HolderConstants;
use cars::problems::{self, Problem};
use cars::record::{read_records, write_records};
use cars::registry::{parse_assignment, SolverSpec, SOLVER_NAMES};
use cars::{RunRecord, Solver};

/// Directory for output files when `--output` is not given.
const OUTPUT_DIR_ENV: &str = "CARS_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "cars",
    version,
    about = "Curvature-aware random search benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lists problems, solvers and their tunable keys.
    List,
    /// Runs one solver on one problem and writes its record.
    Run(RunArgs),
    /// Runs problems x solvers x seeds and writes all records.
    Grid(GridArgs),
    /// Computes a performance profile from a records file.
    Profile(ProfileArgs),
    /// Runs solvers on a generated convex quartic (minimum 0 at the origin).
    Quartic(QuarticArgs),
}

#[derive(Args, Debug)]
struct OutputArg {
    /// Output file. Defaults to a file in $CARS_OUTPUT_DIR (or `results`).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value = "rosenbrock")]
    problem: String,
    #[arg(long, default_value = "cars")]
    solver: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Accuracy levels, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_EPS)]
    eps: Vec<f64>,
    /// Solver parameter override `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(flatten)]
    theory: TheoryArgs,
    #[command(flatten)]
    out: OutputArg,
}

/// Fixes the CARS radius at the limit computed from Holder constants.
#[derive(Args, Debug)]
struct TheoryArgs {
    #[arg(long)]
    theory_mode: bool,
    /// Holder exponent `a` of the Hessian.
    #[arg(long, requires = "theory_mode")]
    holder_a: Option<f64>,
    /// Holder constant `L_a` of the Hessian.
    #[arg(long, requires = "theory_mode")]
    holder_l: Option<f64>,
    /// Strong-convexity modulus; defaults to the problem's when known.
    #[arg(long, requires = "theory_mode")]
    mu: Option<f64>,
    /// Target accuracy.
    #[arg(long, requires = "theory_mode")]
    epsilon: Option<f64>,
    /// Cone parameter in (0, 1].
    #[arg(long, requires = "theory_mode")]
    gamma: Option<f64>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Problems, comma separated. Defaults to the MGH suite.
    #[arg(long, value_delimiter = ',')]
    problems: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = SOLVER_NAMES.map(String::from))]
    solvers: Vec<String>,
    /// Number of seeds; runs use seeds 0..N.
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_EPS)]
    eps: Vec<f64>,
    /// Worker threads. Defaults to all cores.
    #[arg(long, short = 'j')]
    threads: Option<usize>,
    /// Override `solver.key=value`; repeatable.
    #[arg(long = "set", value_name = "SOLVER.KEY=VALUE")]
    set: Vec<String>,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// JSONL records file.
    records: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 1e3)]
    tau_max: f64,
    /// Number of log-spaced tau values on [1, tau_max].
    #[arg(long, default_value_t = 61)]
    points: usize,
    /// CSV output file. Printed to stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuarticArgs {
    #[arg(long, default_value_t = 30)]
    dim: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    beta: f64,
    /// Seed of the Gaussian factor `G` in `A = G'G`.
    #[arg(long, default_value_t = problems::DEFAULT_QUARTIC_SEED)]
    instance_seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = ["cars".to_string(), "cars-cr".to_string()])]
    solvers: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-6])]
    eps: Vec<f64>,
    #[arg(long, short = 'j')]
    threads: Option<usize>,
    #[command(flatten)]
    out: OutputArg,
}

/// Failure classes, mapped to exit codes 2 and 3.
#[derive(Debug)]
enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<cars::Error> for CliError {
    fn from(e: cars::Error) -> Self {
        match e {
            cars::Error::Parse { .. } => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => list(),
        Command::Run(args) => run(args),
        Command::Grid(args) => grid(args),
        Command::Profile(args) => profile(args),
        Command::Quartic(args) => quartic(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Config(msg) | CliError::Io(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn list() -> CliResult<()> {
    println!("problems:");
    for p in problems::mgh_suite() {
        let f_star = p.f_star.map_or("unknown".to_string(), |v| format!("{v:e}"));
        println!("  {:<24} d={:<3} f*={f_star}", p.name, p.dim);
    }
    for g in problems::GENERATED {
        println!("  {g}");
    }
    println!("solvers:");
    for name in SOLVER_NAMES {
        let spec = SolverSpec::by_name(name)?;
        println!("  {:<10} keys: {}", name, spec.keys().join(", "));
    }
    println!("samplers: sphere, gaussian, coordinate, rademacher, averaged:<m>");
    Ok(())
}

fn output_path(out: &OutputArg, default_name: &str) -> PathBuf {
    out.output.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUTPUT_DIR_ENV)
            .map_or_else(|| PathBuf::from("results"), PathBuf::from);
        dir.join(default_name)
    })
}

fn save_records(path: &Path, records: &[RunRecord]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    write_records(BufWriter::new(file), records).map_err(|e| io_error(path, e))
}

fn parse_sets(raw: &[String]) -> CliResult<Vec<(String, String)>> {
    raw.iter()
        .map(|s| parse_assignment(s).map_err(CliError::from))
        .collect()
}

fn check_eps(eps: &[f64]) -> CliResult<()> {
    if eps.is_empty() {
        return Err(CliError::Config("--eps needs at least one value".into()));
    }
    match eps.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
        Some(e) => Err(CliError::Config(format!("eps must lie in (0, 1], got {e}"))),
        None => Ok(()),
    }
}

fn theory_constants(t: &TheoryArgs, problem: &Problem) -> CliResult<HolderConstants> {
    let diag = problem.diagnostics.unwrap_or_default();
    let need = |v: Option<f64>, fallback: Option<f64>, flag: &str| {
        v.or(fallback)
            .ok_or_else(|| CliError::Config(format!("--theory-mode needs --{flag}")))
    };
    let hc = HolderConstants {
        a: need(t.holder_a, diag.a, "holder-a")?,
        l_a: need(t.holder_l, diag.l_a, "holder-l")?,
        mu: need(t.mu, diag.mu, "mu")?,
        epsilon: need(t.epsilon, None, "epsilon")?,
        gamma: need(t.gamma, None, "gamma")?,
    };
    hc.validate()?;
    Ok(hc)
}

fn run(args: RunArgs) -> CliResult<()> {
    check_eps(&args.eps)?;
    let problem = problems::lookup(&args.problem)?;
    let overrides = parse_sets(&args.set)?;
    let spec = if args.theory.theory_mode {
        if args.solver != "cars" {
            return Err(CliError::Config(format!(
                "--theory-mode applies to the cars solver, not `{}`",
                args.solver
            )));
        }
        let hc = theory_constants(&args.theory, &problem)?;
        let mut spec = SolverSpec::Cars(CarsConfig::theory(&hc, CarsConfig::default().l_hat)?);
        spec.apply(&overrides)?;
        spec
    } else {
        SolverSpec::with_overrides(&args.solver, &overrides)?
    };
    let record = bench::run_one(&problem, spec.solver(), args.seed, args.budget, &args.eps)?;
    let path = output_path(
        &args.out,
        &format!("run-{}-{}-s{}.jsonl", problem.name, spec.name(), args.seed),
    );
    save_records(&path, std::slice::from_ref(&record))?;
    println!(
        "final best {:e} after {} queries",
        record.final_best, record.queries_used
    );
    for t in &record.queries_to_target {
        match t.queries {
            Some(q) => println!("  eps {:e}: solved at query {q}", t.eps),
            None => println!("  eps {:e}: unsolved", t.eps),
        }
    }
    println!("record written to {}", path.display());
    Ok(())
}

/// Splits `--set solver.key=value` flags per solver.
fn grid_specs(names: &[String], sets: &[String]) -> CliResult<Vec<SolverSpec>> {
    let mut specs = names
        .iter()
        .map(|n| SolverSpec::by_name(n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut per_solver: Vec<Vec<(String, String)>> = vec![Vec::new(); specs.len()];
    for (key, value) in parse_sets(sets)? {
        let Some((solver, key)) = key.split_once('.') else {
            return Err(CliError::Config(format!(
                "grid overrides take the form solver.key=value, got `{key}`"
            )));
        };
        let idx = names.iter().position(|n| n == solver).ok_or_else(|| {
            CliError::Config(format!(
                "override for `{solver}`, which is not in --solvers"
            ))
        })?;
        per_solver[idx].push((key.to_string(), value));
    }
    for (spec, overrides) in specs.iter_mut().zip(&per_solver) {
        spec.apply(overrides)?;
    }
    Ok(specs)
}

fn grid(args: GridArgs) -> CliResult<()> {
    check_eps(&args.eps)?;
    let suite = if args.problems.is_empty() {
        problems::mgh_suite()
    } else {
        args.problems
            .iter()
            .map(|n| problems::lookup(n))
            .collect::<Result<Vec<_>, _>>()?
    };
    let specs = grid_specs(&args.solvers, &args.set)?;
    let records = execute_grid(
        &suite,
        &specs,
        args.seeds,
        args.master_seed,
        args.budget,
        &args.eps,
        args.threads,
    )?;
    let path = output_path(&args.out, "grid.jsonl");
    save_records(&path, &records)?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    println!(
        "{} records written to {} ({failed} failed runs)",
        records.len(),
        path.display()
    );
    Ok(())
}

fn execute_grid(
    suite: &[Problem],
    specs: &[SolverSpec],
    seeds: u64,
    master_seed: u64,
    budget: u64,
    eps: &[f64],
    threads: Option<usize>,
) -> CliResult<Vec<RunRecord>> {
    if threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let solvers: Vec<&dyn Solver> = specs.iter().map(SolverSpec::solver).collect();
    let seeds: Vec<u64> = (0..seeds).collect();
    Ok(bench::run_grid(
        suite,
        &solvers,
        &seeds,
        master_seed,
        budget,
        eps,
        threads,
    )?)
}

fn profile(args: ProfileArgs) -> CliResult<()> {
    let file = File::open(&args.records).map_err(|e| io_error(&args.records, e))?;
    let records = read_records(BufReader::new(file))?;
    if records.is_empty() {
        return Err(CliError::Io(format!(
            "{}: no records",
            args.records.display()
        )));
    }
    let ratios = bench::performance_ratios(&records, args.eps)?;
    let grid = bench::log_tau_grid(args.tau_max, args.points)?;
    let csv = bench::performance_profile(&ratios, &grid)?.to_csv();
    match &args.output {
        Some(path) => fs::write(path, csv).map_err(|e| io_error(path, e))?,
        None => io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(())
}

fn quartic(args: QuarticArgs) -> CliResult<()> {
    check_eps(&args.eps)?;
    if args.dim == 0 || !(args.alpha > 0.0) || !(args.beta > 0.0) {
        return Err(CliError::Config(
            "quartic needs dim >= 1 and positive alpha, beta".into(),
        ));
    }
    let mut problem = problems::make_quartic(args.dim, args.alpha, args.beta, args.instance_seed);
    problem.name = format!("quartic-d{}-s{}", args.dim, args.instance_seed);
    let specs = args
        .solvers
        .iter()
        .map(|n| SolverSpec::by_name(n))
        .collect::<Result<Vec<_>, _>>()?;
    let records = execute_grid(
        std::slice::from_ref(&problem),
        &specs,
        args.seeds,
        args.master_seed,
        args.budget,
        &args.eps,
        args.threads,
    )?;
    let path = output_path(&args.out, "quartic.jsonl");
    save_records(&path, &records)?;
    let smallest = args.eps.iter().copied().fold(f64::INFINITY, f64::min);
    for spec in &specs {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.solver == spec.name()).collect();
        let solved = runs
            .iter()
            .filter(|r| r.queries_for(smallest).flatten().is_some())
            .count();
        let worst = runs
            .iter()
            .map(|r| r.final_best / r.f0)
            .fold(0.0f64, f64::max);
        println!(
            "{:<8} solved {solved}/{} at eps {smallest:e}; worst relative gap {worst:.3e}",
            spec.name(),
            runs.len()
        );
    }
    println!("records written to {}", path.display());
    Ok(())
}
