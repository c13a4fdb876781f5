use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::runner::RunResult;
use super::stats::{AggregateStats, RunRow, TimeComparison};
use crate::engine::RunRecord;
use crate::error::{Error, Result};
use crate::graph::STRATEGY_COUNT;

pub const RUNS_HEADER: &str =
    "run_id,function,mode,seed,best_fitness,evals_used,generations,wall_time_ms";
pub const AGGREGATE_HEADER: &str =
    "function,mode,runs,mean_best,std_best,single_run,mean_evals,mean_wall_time_ms";
pub const FAILURES_HEADER: &str = "run_id,function,mode,seed,error";
pub const TRACE_HEADER: &str = "run_id,generation,best_fitness,diversity,strategy_id";
pub const GRAPH_HEADER: &str = "run_id,generation,from,to,weight";
pub const TIME_HEADER: &str =
    "function,static_mode,adaptive_wall_ms,static_wall_ms,ratio,adaptive_evals,static_evals";

/// Scientific notation with 17 significant digits; round-trips every f64.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn runs_csv(rows: &[RunRow]) -> String {
    let mut s = String::from(RUNS_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.run_id,
            r.function,
            r.mode,
            r.seed,
            format_float(r.best_fitness),
            r.evals_used,
            r.generations,
            format_float(r.wall_time_ms)
        );
    }
    s
}

fn aggregate_csv(stats: &[AggregateStats]) -> String {
    let mut s = String::from(AGGREGATE_HEADER);
    s.push('\n');
    for a in stats {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            a.function,
            a.mode,
            a.runs,
            format_float(a.mean_best),
            format_float(a.std_best),
            a.single_run,
            format_float(a.mean_evals),
            format_float(a.mean_wall_time_ms)
        );
    }
    s
}

fn failures_csv(results: &[RunResult]) -> String {
    let mut s = String::from(FAILURES_HEADER);
    s.push('\n');
    for r in results {
        if let Err(e) = &r.outcome {
            let j = &r.job;
            let _ = writeln!(s, "{},{},{},{},{}", j.run_id, j.function, j.mode, j.seed, quote(e));
        }
    }
    s
}

fn trace_csv(run_id: usize, rec: &RunRecord) -> String {
    let mut s = String::from(TRACE_HEADER);
    s.push('\n');
    for t in &rec.trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            run_id,
            t.generation,
            format_float(t.best_fitness),
            format_float(t.diversity),
            t.strategy
        );
    }
    s
}

fn graph_csv(run_id: usize, rec: &RunRecord) -> String {
    let mut s = String::from(GRAPH_HEADER);
    s.push('\n');
    for snap in &rec.graph_snapshots {
        for (k, w) in snap.weights.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                run_id,
                snap.generation,
                k / STRATEGY_COUNT,
                k % STRATEGY_COUNT,
                format_float(*w)
            );
        }
    }
    s
}

/// Writes the per-run, aggregate and failure CSVs into `dir`, plus per-run
/// trace and graph files for runs that recorded them.
pub fn write_outputs(dir: &Path, results: &[RunResult], stats: &[AggregateStats]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows = RunRow::from_results(results);
    write_file(&dir.join("runs.csv"), &runs_csv(&rows))?;
    write_file(&dir.join("aggregate.csv"), &aggregate_csv(stats))?;
    write_file(&dir.join("failures.csv"), &failures_csv(results))?;

    for r in results {
        let Ok(rec) = &r.outcome else { continue };
        let id = r.job.run_id;
        if !rec.trace.is_empty() {
            let sub = dir.join("traces");
            fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
            write_file(&sub.join(format!("run_{id}.csv")), &trace_csv(id, rec))?;
        }
        if !rec.graph_snapshots.is_empty() {
            let sub = dir.join("graphs");
            fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
            write_file(&sub.join(format!("run_{id}.csv")), &graph_csv(id, rec))?;
        }
    }
    Ok(())
}

pub fn write_aggregate(path: &Path, stats: &[AggregateStats]) -> Result<()> {
    write_file(path, &aggregate_csv(stats))
}

pub fn write_time_comparison(path: &Path, rows: &[TimeComparison]) -> Result<()> {
    let mut s = String::from(TIME_HEADER);
    s.push('\n');
    for t in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            t.function,
            t.static_mode,
            format_float(t.adaptive_wall_ms),
            format_float(t.static_wall_ms),
            format_float(t.ratio),
            format_float(t.adaptive_evals),
            format_float(t.static_evals)
        );
    }
    write_file(path, &s)
}

/// Reads a per-run CSV written by [`write_outputs`].
pub fn read_run_rows(path: &Path) -> Result<Vec<RunRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let bad = |n: usize, what: &str| Error::Parse(format!("{}:{}: {what}", path.display(), n));
    match lines.next() {
        Some(h) if h == RUNS_HEADER => {}
        _ => return Err(bad(1, &format!("expected header `{RUNS_HEADER}`"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(n, "expected 8 fields"));
        }
        let field = |k: usize| f[k].trim();
        let num_err = |k: usize| bad(n, &format!("malformed field `{}`", field(k)));
        rows.push(RunRow {
            run_id: field(0).parse().map_err(|_| num_err(0))?,
            function: field(1).parse().map_err(|_| num_err(1))?,
            mode: field(2).parse().map_err(|_| num_err(2))?,
            seed: field(3).parse().map_err(|_| num_err(3))?,
            best_fitness: field(4).parse().map_err(|_| num_err(4))?,
            evals_used: field(5).parse().map_err(|_| num_err(5))?,
            generations: field(6).parse().map_err(|_| num_err(6))?,
            wall_time_ms: field(7).parse().map_err(|_| num_err(7))?,
        });
    }
    Ok(rows)
}
