//! Thin command-line front end: instance generation, solving, oracle
//! checks at a point, and multi-trial benchmarking. All real work lives in
//! the library; this file only parses arguments and writes files.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use jadm::cost::{Dagger, JadmProblem, JointPoint};
use jadm::harness::{
    self, generate_instance, random_joint_point, read_point, read_problem, run_algo, run_trials,
    write_point, write_problem, write_report, write_trace_csv, AlgoKind, BenchSpec, InstanceSpec,
    RunReport, SolverSettings,
};
use jadm::manifold::{SlPoint, StiefelPoint};
use jadm::Result;

#[derive(Parser)]
#[command(
    name = "jadm",
    about = "Joint approximate diagonalization of complex matrix sets on St(m,n,C) x SL_m(C)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance with a known exact diagonalizer.
    Generate(GenerateArgs),
    /// Run a solver on a problem file and write trace/report files.
    Solve(SolveArgs),
    /// Run the oracle suite (finite differences, model consistency,
    /// minimizer-vs-grid, manifold closure) at a point.
    Check(CheckArgs),
    /// Run one configuration over many seeds, in parallel worker threads.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Number of matrices in the set.
    #[arg(long = "L")]
    l: usize,
    /// Dagger mode: H (Hermitian) or T (complex symmetric). [default: H]
    #[arg(long)]
    dagger: Option<String>,
    /// Noise level eta >= 0. [default: 0]
    #[arg(long)]
    noise: Option<f64>,
    /// RNG seed. [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Diagonal spread: target magnitudes are drawn from [spread, 1]. [default: 0.1]
    #[arg(long)]
    spread: Option<f64>,
    /// Output problem file (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Also write the ground-truth point here.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Config file with `key = value` lines (flags win over file entries).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// One of: bcd-glu, bcd-glq, jacobi-glu, jacobi-glq, jacobi-clu, jacobi-clq.
    #[arg(long)]
    algo: String,
    /// Problem file (JSON).
    #[arg(long)]
    problem: PathBuf,
    /// Initial point: random, identity, or file. [default: identity]
    #[arg(long)]
    init: Option<String>,
    /// Point file for --init file.
    #[arg(long)]
    init_file: Option<PathBuf>,
    /// Seed for --init random. [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration budget. [default: 5000]
    #[arg(long)]
    max_iters: Option<usize>,
    /// Gradient-norm tolerance. [default: 1e-8 * (1 + initial cost)]
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Boundedness monitor cap on the iterate norm. [default: 1e6]
    #[arg(long)]
    norm_cap: Option<f64>,
    /// BCD block-selection threshold in (0, sqrt(2)/2). [default: 0.5]
    #[arg(long)]
    upsilon: Option<f64>,
    /// Rotation selection gate. [default: half the family's provable bound]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Diagonal-rotation safeguard ratio in (0, 1/4). [default: 0.1]
    #[arg(long)]
    sigma_var: Option<f64>,
    /// Plane-rotation alignment threshold. [default: 0.1]
    #[arg(long)]
    epsilon_inner: Option<f64>,
    /// Initial line-search step. [default: 1]
    #[arg(long)]
    t_init: Option<f64>,
    /// Trace CSV output path.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Report JSON output path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the final point here.
    #[arg(long)]
    out_point: Option<PathBuf>,
    /// Config file with `key = value` lines (flags win over file entries).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Problem file (JSON).
    #[arg(long)]
    problem: PathBuf,
    /// Point to check at: random, identity, or file. [default: random]
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    init_file: Option<PathBuf>,
    /// Seed for --init random. [default: 0]
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Bench spec file (JSON: instance, algo, settings).
    #[arg(long)]
    spec: PathBuf,
    /// Number of trials (seeds spec.seed, spec.seed+1, ...).
    #[arg(long)]
    trials: usize,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write per-trial summaries here (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve(args),
        Command::Check(args) => check(args),
        Command::Bench(args) => bench(args),
    }
}

/// Looks up `key` in the config file map and parses it; flag values take
/// precedence, file entries beat defaults.
fn conf<T: FromStr>(
    flag: Option<T>,
    map: &std::collections::BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| jadm::Error::Parse(format!("config key {key}: bad value {raw:?}"))),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<std::collections::BTreeMap<String, String>> {
    match path {
        None => Ok(Default::default()),
        Some(p) => harness::parse_config_file(&std::fs::read_to_string(p)?),
    }
}

fn parse_dagger(s: &str) -> Result<Dagger> {
    match s {
        "H" | "h" => Ok(Dagger::Hermitian),
        "T" | "t" => Ok(Dagger::Transpose),
        other => Err(jadm::Error::Parse(format!(
            "dagger must be H or T, got {other:?}"
        ))),
    }
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    let file = load_config(&args.config)?;
    let spec = InstanceSpec {
        n: args.n,
        m: args.m,
        l: args.l,
        dagger: parse_dagger(&conf(args.dagger, &file, "dagger")?.unwrap_or_else(|| "H".into()))?,
        noise: conf(args.noise, &file, "noise")?.unwrap_or(0.0),
        seed: conf(args.seed, &file, "seed")?.unwrap_or(0),
        diag_spread: conf(args.spread, &file, "spread")?.unwrap_or(0.1),
    };
    let (problem, truth) = generate_instance(&spec)?;
    write_problem(&args.out, &problem)?;
    println!(
        "wrote {} ({} {}x{} matrices, dagger {}, noise {}, seed {})",
        args.out.display(),
        problem.len(),
        problem.n(),
        problem.n(),
        problem.dagger(),
        spec.noise,
        spec.seed
    );
    if let Some(path) = args.truth {
        write_point(&path, &truth)?;
        println!("wrote ground truth to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn initial_point(
    problem: &JadmProblem,
    init: &Option<String>,
    init_file: &Option<PathBuf>,
    seed: u64,
    default_kind: &str,
) -> Result<JointPoint> {
    let kind = init.as_deref().unwrap_or(default_kind);
    match kind {
        "identity" => JointPoint::new(
            StiefelPoint::standard(problem.n(), problem.m())?,
            SlPoint::identity(problem.m()),
        ),
        "random" => random_joint_point(problem.n(), problem.m(), seed),
        "file" => {
            let path = init_file
                .as_ref()
                .ok_or_else(|| jadm::Error::Parse("--init file needs --init-file".into()))?;
            read_point(path)
        }
        other => Err(jadm::Error::Parse(format!(
            "init must be random, identity or file, got {other:?}"
        ))),
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let file = load_config(&args.config)?;
    let problem = read_problem(&args.problem)?;
    let algo: AlgoKind = conf(Some(args.algo), &file, "algo")?
        .expect("algo is required")
        .parse()?;
    let seed = conf(args.seed, &file, "seed")?.unwrap_or(0);
    let init = conf(args.init, &file, "init")?;
    let omega0 = initial_point(&problem, &init, &args.init_file, seed, "identity")?;
    let settings = SolverSettings {
        max_iters: conf(args.max_iters, &file, "max-iters")?,
        grad_tol: conf(args.grad_tol, &file, "grad-tol")?,
        norm_cap: conf(args.norm_cap, &file, "norm-cap")?,
        upsilon: conf(args.upsilon, &file, "upsilon")?,
        epsilon: conf(args.epsilon, &file, "epsilon")?,
        sigma_var: conf(args.sigma_var, &file, "sigma-var")?,
        epsilon_inner: conf(args.epsilon_inner, &file, "epsilon-inner")?,
        t_init: conf(args.t_init, &file, "t-init")?,
    };
    let (run, mut echo) = run_algo(&problem, &omega0, algo, &settings)?;
    echo["init"] = serde_json::json!(init.unwrap_or_else(|| "identity".into()));
    echo["seed"] = serde_json::json!(seed);
    println!(
        "{}: {} after {} iterations, cost {:.6e} -> {:.6e}, |grad f| {:.3e} (tol {:.3e}), {:.3}s",
        algo,
        run.status,
        run.iterations(),
        run.initial_cost,
        run.final_cost,
        run.final_grad,
        run.grad_tol_used,
        run.wall_time_seconds
    );
    if let Some(path) = args.trace {
        write_trace_csv(&path, &run.trace)?;
        println!("trace -> {}", path.display());
    }
    if let Some(path) = args.report {
        write_report(&path, &RunReport::from_run(&run, echo))?;
        println!("report -> {}", path.display());
    }
    if let Some(path) = args.out_point {
        write_point(&path, &run.final_point)?;
        println!("final point -> {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn check(args: CheckArgs) -> Result<ExitCode> {
    let problem = read_problem(&args.problem)?;
    let seed = args.seed.unwrap_or(0);
    let omega = initial_point(&problem, &args.init, &args.init_file, seed, "random")?;
    let outcome = jadm::harness::oracle_suite(&problem, &omega, &mut |line| {
        println!("{line}");
    })?;
    if outcome.failed == 0 {
        println!("all {} checks passed", outcome.passed);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{} of {} checks failed", outcome.failed, outcome.passed + outcome.failed);
        Ok(ExitCode::FAILURE)
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let spec: BenchSpec = serde_json::from_str(&std::fs::read_to_string(&args.spec)?)?;
    let summaries = run_trials(&spec, args.trials, args.jobs)?;
    let converged = summaries
        .iter()
        .filter(|s| s.status == jadm::trace::RunStatus::Converged)
        .count();
    let mut iters: Vec<usize> = summaries.iter().map(|s| s.iterations).collect();
    iters.sort_unstable();
    let median_iters = iters.get(iters.len() / 2).copied().unwrap_or(0);
    let worst_cost = summaries
        .iter()
        .map(|s| s.final_cost)
        .fold(0.0f64, f64::max);
    println!(
        "{} on {} trials: {} converged, median iterations {}, worst final cost {:.3e}",
        spec.algo,
        summaries.len(),
        converged,
        median_iters,
        worst_cost
    );
    for s in &summaries {
        println!(
            "  seed {:>4}: {:<10} iters {:>6} cost {:.3e} -> {:.3e} grad {:.3e} ({:.3}s)",
            s.seed,
            s.status.to_string(),
            s.iterations,
            s.initial_cost,
            s.final_cost,
            s.final_grad,
            s.wall_time_seconds
        );
    }
    if let Some(path) = args.out {
        std::fs::write(&path, serde_json::to_string_pretty(&summaries)?)?;
        println!("summaries -> {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
