//! Experiment harness: configuration, batch execution, statistics and CSV output.
//!
//! Output directory layout written by [`write_outputs`]:
//!
//! ```text
//! runs.csv          run_id,function,mode,seed,best_fitness,evals_used,generations,wall_time_ms
//! aggregate.csv     function,mode,runs,mean_best,std_best,single_run,mean_evals,mean_wall_time_ms
//! failures.csv      run_id,function,mode,seed,error
//! traces/run_<id>.csv   run_id,generation,best_fitness,diversity,strategy_id   (optional)
//! graphs/run_<id>.csv   run_id,generation,from,to,weight                      (optional)
//! ```
//!
//! Rows are sorted by (function, mode, run_id). Floats carry 17 significant digits.

mod config;
mod output;
mod runner;
mod stats;

pub use config::{ExperimentSpec, CONFIG_KEYS};
pub use output::{
    format_float, read_run_rows, write_aggregate, write_outputs, write_time_comparison, AGGREGATE_HEADER,
    FAILURES_HEADER, GRAPH_HEADER, RUNS_HEADER, TIME_HEADER, TRACE_HEADER,
};
pub use runner::{run_experiment, Job, RunResult};
pub use stats::{aggregate, time_comparison, AggregateStats, RunRow, TimeComparison};
