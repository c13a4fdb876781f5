use std::collections::BTreeMap;

use super::runner::RunResult;
use crate::benchmarks::FunctionId;
use crate::engine::Mode;
use crate::error::{Error, Result};

/// One line of the per-run CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub run_id: usize,
    pub function: FunctionId,
    pub mode: Mode,
    pub seed: u64,
    pub best_fitness: f64,
    pub evals_used: u64,
    pub generations: usize,
    pub wall_time_ms: f64,
}

impl RunRow {
    /// Rows for the successful runs, in result order.
    pub fn from_results(results: &[RunResult]) -> Vec<RunRow> {
        results
            .iter()
            .filter_map(|r| {
                let rec = r.outcome.as_ref().ok()?;
                Some(RunRow {
                    run_id: r.job.run_id,
                    function: r.job.function,
                    mode: r.job.mode,
                    seed: r.job.seed,
                    best_fitness: rec.best_fitness,
                    evals_used: rec.evals_used,
                    generations: rec.generations_run,
                    wall_time_ms: rec.wall_time.as_secs_f64() * 1e3,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub function: FunctionId,
    pub mode: Mode,
    pub runs: usize,
    pub mean_best: f64,
    /// Sample standard deviation (n − 1); 0 when `single_run`.
    pub std_best: f64,
    pub single_run: bool,
    pub mean_evals: f64,
    pub mean_wall_time_ms: f64,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn aggregate_group(rows: &[&RunRow]) -> Result<AggregateStats> {
    let first = rows
        .first()
        .ok_or_else(|| Error::Parse("cannot aggregate an empty group".into()))?;
    let n = rows.len();
    let mean_best = mean(rows.iter().map(|r| r.best_fitness));
    let std_best = if n > 1 {
        let ss: f64 = rows
            .iter()
            .map(|r| (r.best_fitness - mean_best).powi(2))
            .sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(AggregateStats {
        function: first.function,
        mode: first.mode,
        runs: n,
        mean_best,
        std_best,
        single_run: n == 1,
        mean_evals: mean(rows.iter().map(|r| r.evals_used as f64)),
        mean_wall_time_ms: mean(rows.iter().map(|r| r.wall_time_ms)),
    })
}

/// Per-(function, mode) statistics, sorted by function name then mode.
pub fn aggregate(rows: &[RunRow]) -> Result<Vec<AggregateStats>> {
    if rows.is_empty() {
        return Err(Error::Parse("cannot aggregate an empty set of runs".into()));
    }
    let mut groups: BTreeMap<(&'static str, String), Vec<&RunRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.function.name(), row.mode.to_string()))
            .or_default()
            .push(row);
    }
    groups.values().map(|g| aggregate_group(g)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeComparison {
    pub function: FunctionId,
    pub static_mode: Mode,
    pub adaptive_wall_ms: f64,
    pub static_wall_ms: f64,
    /// adaptive / static.
    pub ratio: f64,
    pub adaptive_evals: f64,
    pub static_evals: f64,
}

/// Adaptive-versus-static mean wall time for every function that has both.
pub fn time_comparison(stats: &[AggregateStats]) -> Result<Vec<TimeComparison>> {
    let mut out = Vec::new();
    let mut functions: Vec<FunctionId> = stats.iter().map(|s| s.function).collect();
    functions.dedup();
    for function in functions {
        let of_fn = || stats.iter().filter(move |s| s.function == function);
        let adaptive = of_fn()
            .find(|s| s.mode == Mode::Adaptive)
            .ok_or_else(|| Error::config("mode", format!("{function}: no adaptive runs to compare")))?;
        let mut any_static = false;
        for st in of_fn().filter(|s| matches!(s.mode, Mode::Static(_))) {
            any_static = true;
            out.push(TimeComparison {
                function,
                static_mode: st.mode,
                adaptive_wall_ms: adaptive.mean_wall_time_ms,
                static_wall_ms: st.mean_wall_time_ms,
                ratio: adaptive.mean_wall_time_ms / st.mean_wall_time_ms,
                adaptive_evals: adaptive.mean_evals,
                static_evals: st.mean_evals,
            });
        }
        if !any_static {
            return Err(Error::config(
                "mode",
                format!("{function}: no static runs to compare"),
            ));
        }
    }
    Ok(out)
}
