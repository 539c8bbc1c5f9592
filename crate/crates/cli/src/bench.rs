//! Benchmark loop: generate an instance per repetition, train every strategy
//! variant on it, and report wall-clock means with per-run counters.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use policy_tree::bounded::{BoundedSearch, SearchConfig, SearchStats};
use policy_tree::io::write_atomic;
use policy_tree::sets::{Method, MethodChoice};
use policy_tree::simulation::{generate, SimConfig};

use crate::{Failure, KindArg};

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "continuous")]
    kind: KindArg,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions; each draws a fresh instance from seed + rep.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

fn variants() -> Vec<(&'static str, SearchConfig)> {
    let default = SearchConfig::default();
    vec![
        ("full", default),
        (
            "no-bounds",
            SearchConfig {
                use_bounds: false,
                ..default
            },
        ),
        (
            "no-cache",
            SearchConfig {
                use_cache: false,
                ..default
            },
        ),
        (
            "plain",
            SearchConfig {
                use_bounds: false,
                use_cache: false,
                ..default
            },
        ),
        (
            "method1",
            SearchConfig {
                method: MethodChoice::Force(Method::Method1),
                ..default
            },
        ),
        (
            "method2",
            SearchConfig {
                method: MethodChoice::Force(Method::Method2),
                ..default
            },
        ),
    ]
}

#[derive(Serialize)]
struct BenchReport {
    instance: InstanceInfo,
    variants: Vec<VariantReport>,
}

#[derive(Serialize)]
struct InstanceInfo {
    n: usize,
    p: usize,
    m: usize,
    depth: usize,
    kind: &'static str,
    seed: u64,
    reps: usize,
}

#[derive(Serialize)]
struct VariantReport {
    name: &'static str,
    time_mean_seconds: f64,
    time_sd_seconds: f64,
    runs: Vec<RunReport>,
}

#[derive(Serialize)]
struct RunReport {
    rep: usize,
    reward: f64,
    stats: SearchStats,
}

pub fn run(args: BenchArgs) -> Result<(), Failure> {
    if args.reps < 1 {
        return Err(Failure::usage("--reps must be at least 1"));
    }
    if args.depth < 1 {
        return Err(Failure::usage("--depth must be at least 1"));
    }
    let kind_name = match args.kind {
        KindArg::Continuous => "continuous",
        KindArg::Discrete => "discrete",
    };

    let mut variant_runs: Vec<Vec<RunReport>> = variants().iter().map(|_| Vec::new()).collect();
    for rep in 0..args.reps {
        let config = SimConfig::new(
            args.n,
            args.p,
            args.kind.into(),
            args.m,
            args.depth,
            args.seed + rep as u64,
        );
        let sim = generate(&config).map_err(|e| Failure::usage(e.to_string()))?;
        let ds = sim.to_dataset().map_err(Failure::data)?;
        let units = ds.all_units();
        for (slot, (_, config)) in variant_runs.iter_mut().zip(variants()) {
            let mut search = BoundedSearch::new(&ds, config);
            let (_, reward) = search.run(&units, args.depth).map_err(Failure::data)?;
            slot.push(RunReport {
                rep,
                reward,
                stats: search.stats.clone(),
            });
        }
    }

    let variant_reports: Vec<VariantReport> = variants()
        .iter()
        .zip(variant_runs)
        .map(|(&(name, _), runs)| {
            let times: Vec<f64> = runs.iter().map(|r| r.stats.elapsed.as_secs_f64()).collect();
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let sd = if times.len() > 1 {
                let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>()
                    / (times.len() - 1) as f64;
                var.sqrt()
            } else {
                0.0
            };
            VariantReport {
                name,
                time_mean_seconds: mean,
                time_sd_seconds: sd,
                runs,
            }
        })
        .collect();

    let report = BenchReport {
        instance: InstanceInfo {
            n: args.n,
            p: args.p,
            m: args.m,
            depth: args.depth,
            kind: kind_name,
            seed: args.seed,
            reps: args.reps,
        },
        variants: variant_reports,
    };

    let rendered = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        FormatArg::Csv => render_csv(&report),
    };
    match &args.out {
        Some(path) => write_atomic(path, rendered.as_bytes()).map_err(Failure::data)?,
        None => println!("{rendered}"),
    }
    Ok(())
}

fn render_csv(report: &BenchReport) -> String {
    let mut out = String::from(
        "variant,rep,elapsed_seconds,reward,subproblems_solved,splits_evaluated,bound_prunes,cache_hits,cache_misses,perfect_exits\n",
    );
    for variant in &report.variants {
        for run in &variant.runs {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                variant.name,
                run.rep,
                run.stats.elapsed.as_secs_f64(),
                run.reward,
                run.stats.subproblems_solved,
                run.stats.splits_evaluated,
                run.stats.bound_prunes,
                run.stats.cache_hits,
                run.stats.cache_misses,
                run.stats.perfect_exits,
            ));
        }
    }
    out
}
