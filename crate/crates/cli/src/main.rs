//! Command-line front end: train, predict, simulate, bench, verify.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
//! failure. All failures print a one-line diagnostic to stderr and leave no
//! partial output files.

mod bench;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use policy_tree::bounded::{BoundedSearch, SearchConfig};
use policy_tree::io::{
    load_covariates, load_dataset, tree_from_json, tree_to_json, write_atomic, write_sim_csvs,
    TrainReport,
};
use policy_tree::search_exhaustive;
use policy_tree::sets::{Method, MethodChoice};
use policy_tree::simulation::{generate, CovariateKind, SimConfig};

#[derive(Parser)]
#[command(
    name = "ptree",
    version,
    about = "Exact depth-limited policy tree learning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn an optimal policy tree from covariate and reward CSVs.
    Train(TrainArgs),
    /// Assign actions to covariate rows with a stored tree.
    Predict(PredictArgs),
    /// Generate a synthetic instance and write its CSVs.
    Simulate(SimulateArgs),
    /// Time the search strategy variants on generated instances.
    Bench(bench::BenchArgs),
    /// Run the accelerated and brute-force searches on the same input and
    /// fail on any reward discrepancy.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Auto,
    Method1,
    Method2,
}

impl From<MethodArg> for MethodChoice {
    fn from(value: MethodArg) -> Self {
        match value {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Method1 => MethodChoice::Force(Method::Method1),
            MethodArg::Method2 => MethodChoice::Force(Method::Method2),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    Continuous,
    Discrete,
}

impl From<KindArg> for CovariateKind {
    fn from(value: KindArg) -> Self {
        match value {
            KindArg::Continuous => CovariateKind::Continuous,
            KindArg::Discrete => CovariateKind::Discrete,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Covariate CSV (header x1..xp).
    #[arg(long)]
    covariates: PathBuf,
    /// Reward CSV (header a1..am).
    #[arg(long)]
    rewards: PathBuf,
    /// Maximum tree depth (>= 1).
    #[arg(long)]
    depth: usize,
    /// Unit-set machinery.
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Disable the pruning bounds.
    #[arg(long)]
    no_bounds: bool,
    /// Disable the subtree cache.
    #[arg(long)]
    no_cache: bool,
    /// Output path for the tree JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional output path for the reward and search counters (JSON).
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Tree JSON produced by `train`.
    #[arg(long)]
    tree: PathBuf,
    /// Covariate CSV (header x1..xp).
    #[arg(long)]
    covariates: PathBuf,
    /// Output path: one 0-based action per row.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Sample size.
    #[arg(long)]
    n: usize,
    /// Covariate dimension (>= 3).
    #[arg(long)]
    p: usize,
    /// Number of treatments (>= 2).
    #[arg(long)]
    m: usize,
    /// Covariate distribution.
    #[arg(long, value_enum, default_value = "continuous")]
    kind: KindArg,
    /// Tree depth recorded with the instance.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Half-width of the uniform noise term.
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for covariates/actions/outcomes/rewards CSVs.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    covariates: PathBuf,
    #[arg(long)]
    rewards: PathBuf,
    #[arg(long)]
    depth: usize,
}

/// A failure with its process exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn data(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Train(args) => train(args),
        Command::Predict(args) => predict(args),
        Command::Simulate(args) => simulate(args),
        Command::Bench(args) => bench::run(args),
        Command::Verify(args) => verify(args),
    }
}

pub fn search_config(method: MethodArg, no_bounds: bool, no_cache: bool) -> SearchConfig {
    SearchConfig {
        method: method.into(),
        use_bounds: !no_bounds,
        use_cache: !no_cache,
        ..SearchConfig::default()
    }
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Method1 => "method1",
        Method::Method2 => "method2",
    }
}

fn train(args: TrainArgs) -> Result<(), Failure> {
    if args.depth < 1 {
        return Err(Failure::usage("--depth must be at least 1"));
    }
    let ds = load_dataset(&args.covariates, &args.rewards).map_err(Failure::data)?;
    let mut search = BoundedSearch::new(
        &ds,
        search_config(args.method, args.no_bounds, args.no_cache),
    );
    let units = ds.all_units();
    let (tree, reward) = search.run(&units, args.depth).map_err(Failure::data)?;

    write_atomic(&args.out, tree_to_json(&tree).as_bytes()).map_err(Failure::data)?;
    if let Some(stats_path) = &args.stats {
        let report = TrainReport {
            reward,
            method: method_name(search.method()).to_string(),
            stats: search.stats.clone(),
        };
        write_atomic(stats_path, report.to_json().as_bytes()).map_err(Failure::data)?;
    }
    println!("reward {reward}");
    println!(
        "method {} depth {} subproblems {} splits {} prunes {} cache_hits {} cache_misses {} perfect_exits {} elapsed {:.3}s",
        method_name(search.method()),
        args.depth,
        search.stats.subproblems_solved,
        search.stats.splits_evaluated,
        search.stats.bound_prunes,
        search.stats.cache_hits,
        search.stats.cache_misses,
        search.stats.perfect_exits,
        search.stats.elapsed.as_secs_f64(),
    );
    Ok(())
}

fn predict(args: PredictArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.tree)
        .map_err(|e| Failure::data(format!("{}: {e}", args.tree.display())))?;
    let tree = tree_from_json(&text).map_err(Failure::data)?;
    let rows = load_covariates(&args.covariates).map_err(Failure::data)?;
    let p = rows[0].len();
    if !tree.covariates_in_range(p) {
        return Err(Failure::data(format!(
            "tree references a covariate out of range for {p} columns"
        )));
    }
    let mut out = String::new();
    for row in &rows {
        out.push_str(&tree.assign_action(row).to_string());
        out.push('\n');
    }
    write_atomic(&args.out, out.as_bytes()).map_err(Failure::data)?;
    println!("predicted {} rows", rows.len());
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let mut config = SimConfig::new(
        args.n,
        args.p,
        args.kind.into(),
        args.m,
        args.depth,
        args.seed,
    );
    config.noise_half_width = args.noise;
    let sim = generate(&config).map_err(|e| Failure::usage(e.to_string()))?;
    write_sim_csvs(&args.out, &sim).map_err(Failure::data)?;
    println!(
        "wrote {} units ({} covariates, {} actions) to {}",
        args.n,
        args.p,
        args.m,
        args.out.display()
    );
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let ds = load_dataset(&args.covariates, &args.rewards).map_err(Failure::data)?;
    let units = ds.all_units();
    let mut search = BoundedSearch::new(&ds, SearchConfig::default());
    let (_, bounded_reward) = search.run(&units, args.depth).map_err(Failure::data)?;
    let (_, exhaustive_reward) =
        search_exhaustive(&ds, &units, args.depth).map_err(Failure::data)?;
    println!("bounded    {bounded_reward}");
    println!("exhaustive {exhaustive_reward}");
    if bounded_reward != exhaustive_reward {
        return Err(Failure::verification(format!(
            "reward mismatch: bounded {bounded_reward} vs exhaustive {exhaustive_reward}"
        )));
    }
    println!("ok");
    Ok(())
}
