use rayon::prelude::*;

use super::config::ExperimentSpec;
use crate::benchmarks::FunctionId;
use crate::engine::{run, Mode, RunRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Job {
    pub run_id: usize,
    pub function: FunctionId,
    pub mode: Mode,
    pub seed: u64,
}

#[derive(Debug)]
pub struct RunResult {
    pub job: Job,
    /// Engine errors are kept as text; a failed run does not abort the batch.
    pub outcome: std::result::Result<RunRecord, String>,
}

impl ExperimentSpec {
    /// All runs in id order.
    pub fn jobs(&self) -> Vec<Job> {
        let mut jobs = Vec::with_capacity(self.functions.len() * self.modes.len() * self.runs);
        for &function in &self.functions {
            for &mode in &self.modes {
                for _ in 0..self.runs {
                    let run_id = jobs.len();
                    jobs.push(Job {
                        run_id,
                        function,
                        mode,
                        seed: self.base_seed.wrapping_add(run_id as u64),
                    });
                }
            }
        }
        jobs
    }
}

/// Orders results by (function name, mode, run id).
pub(crate) fn sort_key(job: &Job) -> (&'static str, String, usize) {
    (job.function.name(), job.mode.to_string(), job.run_id)
}

/// Executes every job on up to `spec.parallel` threads. Results do not
/// depend on the degree of parallelism.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunResult>> {
    spec.validate()?;
    let jobs = spec.jobs();
    let execute = |job: &Job| RunResult {
        job: *job,
        outcome: run(&spec.run_config(job.function, job.mode, job.seed)).map_err(|e| e.to_string()),
    };
    let mut results: Vec<RunResult> = if spec.parallel == 1 {
        jobs.iter().map(execute).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.parallel)
            .build()
            .map_err(|e| Error::config("parallel", e.to_string()))?;
        pool.install(|| jobs.par_iter().map(execute).collect())
    };
    results.sort_by_cached_key(|r| sort_key(&r.job));
    Ok(results)
}
