use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use opgraph::harness::{
    aggregate, read_run_rows, run_experiment, time_comparison, write_aggregate, write_outputs,
    write_time_comparison, AggregateStats, ExperimentSpec, RunRow, TimeComparison,
};

/// Static baseline used by `compare-time` when the config names no modes:
/// BLX-α crossover with Gaussian mutation.
const CLASSICAL_MODES: &str = "adaptive,static:1";

#[derive(Parser)]
#[command(name = "opgraph", version, about = "Graph-driven adaptive evolutionary algorithm experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of experiments and write CSV results.
    Run(Overrides),
    /// Compare mean wall time of adaptive and static runs.
    CompareTime(Overrides),
    /// Recompute aggregate statistics from a results directory.
    Aggregate {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
    },
}

#[derive(Args, Default)]
struct Overrides {
    /// `key = value` config file; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Function name, comma-separated list, or `all`.
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    /// Maximum objective evaluations per run.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    pop: Option<String>,
    /// Generations per strategy window.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    cr: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    /// `adaptive`, `static:<id>`, or a comma-separated list.
    #[arg(long)]
    mode: Option<String>,
    /// `map` or `sample`.
    #[arg(long)]
    select: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long = "w-min")]
    w_min: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    /// Base seed; run `i` uses `seed + i`.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, value_name = "DIR")]
    out: Option<String>,
    /// Write per-generation trace CSVs.
    #[arg(long)]
    trace: bool,
    /// Write graph weight snapshots at every window boundary.
    #[arg(long = "dump-graph")]
    dump_graph: bool,
    #[arg(long)]
    parallel: Option<String>,
    /// Any config key, as KEY=VALUE. May be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Overrides {
    fn pairs(&self) -> Result<Vec<(String, String)>> {
        let mut pairs: Vec<(String, String)> = [
            ("function", &self.function),
            ("dim", &self.dim),
            ("budget", &self.budget),
            ("pop", &self.pop),
            ("delta", &self.delta),
            ("cr", &self.cr),
            ("mu", &self.mu),
            ("mode", &self.mode),
            ("select", &self.select),
            ("epsilon", &self.epsilon),
            ("eta", &self.eta),
            ("w_min", &self.w_min),
            ("runs", &self.runs),
            ("seed", &self.seed),
            ("out", &self.out),
            ("parallel", &self.parallel),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect();
        if self.trace {
            pairs.push(("trace".into(), "true".into()));
        }
        if self.dump_graph {
            pairs.push(("dump_graph".into(), "true".into()));
        }
        for item in &self.set {
            let (k, v) = item
                .split_once('=')
                .with_context(|| format!("--set expects KEY=VALUE, got `{item}`"))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(pairs)
    }

    fn resolve(&self, defaults: &[(&str, &str)]) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::default();
        for (k, v) in defaults {
            spec.set(k, v)?;
        }
        if let Some(path) = &self.config {
            spec.apply_config_file(path)?;
        }
        for (k, v) in self.pairs()? {
            spec.set(&k, &v)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn print_stats(stats: &[AggregateStats]) {
    println!(
        "{:<14} {:<10} {:>5} {:>24} {:>24} {:>12}",
        "function", "mode", "runs", "mean_best", "std_best", "wall_ms"
    );
    for s in stats {
        println!(
            "{:<14} {:<10} {:>5} {:>24.12e} {:>24.12e} {:>12.2}",
            s.function.name(),
            s.mode.to_string(),
            s.runs,
            s.mean_best,
            s.std_best,
            s.mean_wall_time_ms
        );
    }
}

fn print_times(rows: &[TimeComparison]) {
    println!(
        "{:<14} {:<10} {:>14} {:>14} {:>8}",
        "function", "static", "adaptive_ms", "static_ms", "ratio"
    );
    for t in rows {
        println!(
            "{:<14} {:<10} {:>14.2} {:>14.2} {:>8.3}",
            t.function.name(),
            t.static_mode.to_string(),
            t.adaptive_wall_ms,
            t.static_wall_ms,
            t.ratio
        );
    }
}

fn execute(spec: &ExperimentSpec) -> Result<(PathBuf, Vec<AggregateStats>)> {
    let out = spec
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("results"));
    let results = run_experiment(spec)?;
    let failed: Vec<_> = results.iter().filter(|r| r.outcome.is_err()).collect();
    for r in &failed {
        eprintln!(
            "run {} ({} {}) failed: {}",
            r.job.run_id,
            r.job.function,
            r.job.mode,
            r.outcome.as_ref().unwrap_err()
        );
    }
    let rows = RunRow::from_results(&results);
    if rows.is_empty() {
        bail!("all {} runs failed", results.len());
    }
    let stats = aggregate(&rows)?;
    write_outputs(&out, &results, &stats)?;
    Ok((out, stats))
}

fn aggregate_dir(dir: &Path) -> Result<()> {
    let rows = read_run_rows(&dir.join("runs.csv"))?;
    let stats = aggregate(&rows)?;
    write_aggregate(&dir.join("aggregate.csv"), &stats)?;
    print_stats(&stats);
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(o) => {
            let spec = o.resolve(&[])?;
            let (out, stats) = execute(&spec)?;
            print_stats(&stats);
            eprintln!("results written to {}", out.display());
        }
        Command::CompareTime(o) => {
            let spec = o.resolve(&[("mode", CLASSICAL_MODES)])?;
            let (out, stats) = execute(&spec)?;
            let rows = time_comparison(&stats)?;
            write_time_comparison(&out.join("time_comparison.csv"), &rows)?;
            print_times(&rows);
            eprintln!("results written to {}", out.display());
        }
        Command::Aggregate { input } => aggregate_dir(&input)?,
    }
    Ok(())
}
