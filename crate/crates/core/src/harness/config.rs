use std::path::{Path, PathBuf};

use crate::benchmarks::FunctionId;
use crate::engine::{EngineConfig, Mode};
use crate::error::{Error, Result};

/// Every key accepted by [`ExperimentSpec::set`], in documentation order.
pub const CONFIG_KEYS: &[&str] = &[
    "function",
    "dim",
    "budget",
    "pop",
    "delta",
    "cr",
    "mu",
    "mode",
    "select",
    "epsilon",
    "eta",
    "w_min",
    "delta_eps",
    "blx_alpha",
    "gaussian_sigma",
    "levy_beta",
    "levy_scale",
    "de_f",
    "de_cr",
    "runs",
    "seed",
    "out",
    "trace",
    "dump_graph",
    "parallel",
];

/// A batch of runs: every function × every mode × `runs` repetitions.
///
/// Run ids are assigned in that nesting order and each run is seeded with
/// `base_seed + run_id`, so seeds are unique within an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub functions: Vec<FunctionId>,
    pub modes: Vec<Mode>,
    /// Template for every run; `function`, `mode` and `seed` are set per run.
    pub base: EngineConfig,
    pub runs: usize,
    pub base_seed: u64,
    pub out_dir: Option<PathBuf>,
    pub parallel: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            functions: FunctionId::ALL.to_vec(),
            modes: vec![Mode::Adaptive],
            base: EngineConfig::default(),
            runs: 100,
            base_seed: 0,
            out_dir: None,
            parallel: 1,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, what: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("expected {what}, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::config(key, format!("expected a boolean, got `{value}`"))),
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl ExperimentSpec {
    /// Parses `key = value` lines on top of the defaults.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        spec.apply_config(text)?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut spec = Self::default();
        spec.apply_config_file(path)?;
        Ok(spec)
    }

    pub fn apply_config_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_config(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        }
        self.validate()
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let base = &mut self.base;
        match key {
            "function" => {
                self.functions = if value == "all" {
                    FunctionId::ALL.to_vec()
                } else {
                    list(value).map(str::parse).collect::<Result<_>>()?
                };
                if self.functions.is_empty() {
                    return Err(Error::config(key, "no functions given"));
                }
            }
            "mode" => {
                self.modes = list(value).map(str::parse).collect::<Result<_>>()?;
                if self.modes.is_empty() {
                    return Err(Error::config(key, "no modes given"));
                }
            }
            "dim" => base.dim = parse_num(key, value, "a positive integer")?,
            "budget" => base.budget = parse_num(key, value, "a positive integer")?,
            "pop" => base.pop_size = parse_num(key, value, "a positive integer")?,
            "delta" => base.delta = parse_num(key, value, "a positive integer")?,
            "cr" => base.crossover_rate = parse_num(key, value, "a number")?,
            "mu" => base.mutation_rate = parse_num(key, value, "a number")?,
            "select" => base.graph.selection = value.parse()?,
            "epsilon" => base.graph.epsilon = parse_num(key, value, "a number")?,
            "eta" => base.graph.eta = parse_num(key, value, "a number")?,
            "w_min" => base.graph.w_min = parse_num(key, value, "a number")?,
            "delta_eps" => base.graph.delta_eps = parse_num(key, value, "a number")?,
            "blx_alpha" => base.operators.blx_alpha = parse_num(key, value, "a number")?,
            "gaussian_sigma" => base.operators.gaussian_sigma = parse_num(key, value, "a number")?,
            "levy_beta" => base.operators.levy_beta = parse_num(key, value, "a number")?,
            "levy_scale" => base.operators.levy_scale = parse_num(key, value, "a number")?,
            "de_f" => base.operators.de_f = parse_num(key, value, "a number")?,
            "de_cr" => base.operators.de_cr = parse_num(key, value, "a number")?,
            "runs" => self.runs = parse_num(key, value, "a positive integer")?,
            "seed" => self.base_seed = parse_num(key, value, "a non-negative integer")?,
            "out" => self.out_dir = Some(PathBuf::from(value)),
            "trace" => base.record_trace = parse_bool(key, value)?,
            "dump_graph" => base.record_graph = parse_bool(key, value)?,
            "parallel" => self.parallel = parse_num(key, value, "a positive integer")?,
            other => return Err(Error::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("runs", "must be at least 1"));
        }
        if self.parallel == 0 {
            return Err(Error::config("parallel", "must be at least 1"));
        }
        for &function in &self.functions {
            EngineConfig {
                function,
                ..self.base.clone()
            }
            .validate()?;
        }
        Ok(())
    }

    /// Engine configuration for one run.
    pub fn run_config(&self, function: FunctionId, mode: Mode, seed: u64) -> EngineConfig {
        EngineConfig {
            function,
            mode,
            seed,
            ..self.base.clone()
        }
    }
}
