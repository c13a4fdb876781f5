//! Generational evolutionary loop under a hard evaluation budget.
//!
//! Each generation produces `pop` offspring from binary-tournament parent
//! pairs. A pair is recombined with probability `crossover_rate` (otherwise
//! copied), each offspring is mutated with probability `mutation_rate`, and
//! the next generation is the best parent plus the best `pop - 1` of the
//! remaining parents and offspring. Offspring identical to one of their
//! parents are not admitted, so an unvaried generation leaves the population
//! multiset unchanged.
//!
//! In adaptive mode the strategy is re-decided every `delta` generations
//! from the [`StrategyGraph`]; in static mode one strategy runs throughout.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::benchmarks::{BenchmarkFn, FunctionId};
use crate::diversity::{diversity_delta, population_diversity, DiversityRecord, DEFAULT_DELTA_EPS};
use crate::error::{Error, Result};
use crate::graph::{SelectionMode, StrategyGraph, StrategyId, STRATEGY_COUNT};
use crate::operators::{self, CrossoverKind, MutationKind, OperatorParams};
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Vec<f64>,
    /// `None` until evaluated.
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn unevaluated(genes: Vec<f64>) -> Self {
        Self {
            genes,
            fitness: None,
        }
    }

    /// Fitness for ranking; unevaluated individuals rank last.
    fn rank_key(&self) -> f64 {
        self.fitness.unwrap_or(f64::INFINITY)
    }
}

impl AsRef<[f64]> for Individual {
    fn as_ref(&self) -> &[f64] {
        &self.genes
    }
}

/// Objective-call accounting with best-so-far tracking.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
    best: Option<(f64, Vec<f64>)>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: 0,
            best: None,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }

    pub fn best(&self) -> Option<(f64, &[f64])> {
        self.best.as_ref().map(|(f, x)| (*f, x.as_slice()))
    }

    /// Charges one evaluation. Fails without evaluating once the limit is reached.
    pub fn evaluate(&mut self, func: &BenchmarkFn, x: &[f64]) -> Result<f64> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted { budget: self.limit });
        }
        self.used += 1;
        let f = func.evaluate(x)?;
        if self.best.as_ref().is_none_or(|(b, _)| f < *b) {
            self.best = Some((f, x.to_vec()));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<Individual>,
    budget: Budget,
}

impl Population {
    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn evals_used(&self) -> u64 {
        self.budget.used()
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Lowest fitness among current members.
    pub fn best_fitness(&self) -> f64 {
        self.members
            .iter()
            .map(Individual::rank_key)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn diversity(&self) -> Result<f64> {
        population_diversity(&self.members)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Adaptive,
    Static(StrategyId),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Adaptive => f.write_str("adaptive"),
            Mode::Static(id) => write!(f, "static:{id}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "adaptive" {
            return Ok(Mode::Adaptive);
        }
        let bad = || {
            Error::config(
                "mode",
                format!("expected `adaptive` or `static:<0..{STRATEGY_COUNT}>`, got `{s}`"),
            )
        };
        let id = s.strip_prefix("static:").ok_or_else(bad)?;
        let id: usize = id.parse().map_err(|_| bad())?;
        StrategyId::new(id).map(Mode::Static).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    pub selection: SelectionMode,
    /// Exploration probability in map mode.
    pub epsilon: f64,
    /// Learning step.
    pub eta: f64,
    /// Weight floor.
    pub w_min: f64,
    /// Denominator floor for the relative diversity change.
    pub delta_eps: f64,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            selection: SelectionMode::Map,
            epsilon: 0.05,
            eta: 0.1,
            w_min: 0.01,
            delta_eps: DEFAULT_DELTA_EPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub function: FunctionId,
    pub dim: usize,
    /// Maximum number of objective evaluations.
    pub budget: u64,
    pub pop_size: usize,
    /// Generations per strategy window.
    pub delta: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub mode: Mode,
    pub graph: GraphParams,
    pub operators: OperatorParams,
    pub seed: u64,
    /// Record a [`TraceRow`] for every generation.
    pub record_trace: bool,
    /// Record the weight matrix at every window boundary.
    pub record_graph: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            function: FunctionId::Sphere,
            dim: 40,
            budget: 40_000,
            pop_size: 50,
            delta: 20,
            crossover_rate: 0.7,
            mutation_rate: 0.3,
            mode: Mode::Adaptive,
            graph: GraphParams::default(),
            operators: OperatorParams::default(),
            seed: 0,
            record_trace: false,
            record_graph: false,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::config("dim", "must be at least 2"));
        }
        if self.budget == 0 {
            return Err(Error::config("budget", "must be positive"));
        }
        if self.pop_size < 4 {
            return Err(Error::config("pop", "must be at least 4"));
        }
        if self.budget < self.pop_size as u64 {
            return Err(Error::config(
                "budget",
                format!("must cover the initial population of {}", self.pop_size),
            ));
        }
        if self.delta == 0 {
            return Err(Error::config("delta", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::config("cr", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config("mu", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.graph.epsilon) {
            return Err(Error::config("epsilon", "must lie in [0, 1]"));
        }
        if self.graph.delta_eps.is_nan() || self.graph.delta_eps <= 0.0 {
            return Err(Error::config("delta_eps", "must be positive"));
        }
        StrategyGraph::new(STRATEGY_COUNT, self.graph.eta, self.graph.w_min)?;
        self.operators.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    /// Best fitness over every evaluation so far.
    pub best_fitness: f64,
    pub diversity: f64,
    pub strategy: StrategyId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSnapshot {
    pub generation: usize,
    /// Row-major weight matrix.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub best_genes: Vec<f64>,
    pub best_fitness: f64,
    pub evals_used: u64,
    pub generations_run: usize,
    pub wall_time: Duration,
    /// `(window index, strategy)` for every window that ran at least one generation.
    pub strategy_trajectory: Vec<(usize, StrategyId)>,
    /// Diversity at each window boundary (adaptive mode).
    pub diversity_trace: Vec<DiversityRecord>,
    /// Generations at which a graph weight was updated.
    pub graph_updates: Vec<usize>,
    /// Per-generation rows, generation 0 included; empty unless requested.
    pub trace: Vec<TraceRow>,
    pub graph_snapshots: Vec<GraphSnapshot>,
}

/// Evaluates `pop_size` uniform random individuals.
pub fn init_population(
    cfg: &EngineConfig,
    func: &BenchmarkFn,
    rng: &mut RandomStream,
) -> Result<Population> {
    if cfg.budget < cfg.pop_size as u64 {
        return Err(Error::config(
            "budget",
            format!("must cover the initial population of {}", cfg.pop_size),
        ));
    }
    let mut budget = Budget::new(cfg.budget);
    let bounds = func.bounds();
    let mut members = Vec::with_capacity(cfg.pop_size);
    for _ in 0..cfg.pop_size {
        let genes: Vec<f64> = (0..func.dimension())
            .map(|i| rng.uniform_in(bounds.lower[i], bounds.upper[i]))
            .collect();
        let fitness = budget.evaluate(func, &genes)?;
        members.push(Individual {
            genes,
            fitness: Some(fitness),
        });
    }
    Ok(Population { members, budget })
}

/// Binary tournament; the lower fitness wins and ties go to the first draw.
pub fn tournament_select(members: &[Individual], rng: &mut RandomStream) -> usize {
    let a = rng.index(members.len());
    let b = rng.index(members.len());
    if members[b].rank_key() < members[a].rank_key() {
        b
    } else {
        a
    }
}

struct Offspring {
    genes: Vec<f64>,
    fitness: Option<f64>,
    /// Parent whose slot this child takes; excluded as its own DE donor.
    origin: usize,
    partner: usize,
}

/// Advances `pop` by one generation using `strategy`.
///
/// Returns `true` once the evaluation budget is spent; the population is
/// valid either way.
pub fn step_generation(
    pop: &mut Population,
    strategy: StrategyId,
    cfg: &EngineConfig,
    func: &BenchmarkFn,
    rng: &mut RandomStream,
) -> Result<bool> {
    let n = pop.members.len();
    let bounds = func.bounds();
    let params = &cfg.operators;
    let parents = &pop.members;
    let budget = &mut pop.budget;

    let mut offspring: Vec<Offspring> = Vec::with_capacity(n + 1);
    let mut exhausted = false;
    while offspring.len() < n {
        let i = tournament_select(parents, rng);
        let j = tournament_select(parents, rng);
        let (p1, p2) = (&parents[i].genes, &parents[j].genes);
        let ((c1, f1), (c2, f2)) = if rng.chance(cfg.crossover_rate) {
            let unscored = |(a, b): (Vec<f64>, Vec<f64>)| ((a, None), (b, None));
            match strategy.crossover() {
                CrossoverKind::BlxAlpha => {
                    let (mut a, mut b) = operators::crossover_blx(p1, p2, params.blx_alpha, rng)?;
                    operators::clamp_in_place(&mut a, bounds);
                    operators::clamp_in_place(&mut b, bounds);
                    unscored((a, b))
                }
                CrossoverKind::Discrete => unscored(operators::crossover_discrete(p1, p2, rng)?),
                CrossoverKind::OnePoint => unscored(operators::crossover_one_point(p1, p2, rng)?),
                CrossoverKind::Barycentric => {
                    unscored(operators::crossover_barycentric(p1, p2, rng)?)
                }
                CrossoverKind::Linear => {
                    match operators::crossover_linear(p1, p2, bounds, |x| budget.evaluate(func, x)) {
                        Ok(((a, fa), (b, fb))) => ((a, Some(fa)), (b, Some(fb))),
                        Err(Error::BudgetExhausted { .. }) => {
                            exhausted = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        } else {
            ((p1.clone(), None), (p2.clone(), None))
        };
        offspring.push(Offspring {
            genes: c1,
            fitness: f1,
            origin: i,
            partner: j,
        });
        offspring.push(Offspring {
            genes: c2,
            fitness: f2,
            origin: j,
            partner: i,
        });
    }
    offspring.truncate(n);

    for child in &mut offspring {
        if !rng.chance(cfg.mutation_rate) {
            continue;
        }
        child.genes = match strategy.mutation() {
            MutationKind::Levy => operators::mutate_levy(
                &child.genes,
                bounds,
                params.levy_beta,
                params.levy_scale,
                rng,
            ),
            MutationKind::Gaussian => {
                operators::mutate_gaussian(&child.genes, bounds, params.gaussian_sigma, rng)
            }
            MutationKind::DeRand1Bin => operators::mutate_de_rand_1_bin(
                &child.genes,
                Some(child.origin),
                parents,
                bounds,
                params.de_f,
                params.de_cr,
                rng,
            )?,
            MutationKind::Scramble => {
                let mut g = operators::mutate_scramble(&child.genes, rng)?;
                operators::clamp_in_place(&mut g, bounds);
                g
            }
        };
        child.fitness = None;
    }

    if !exhausted {
        for child in &mut offspring {
            if child.fitness.is_some() {
                continue;
            }
            match budget.evaluate(func, &child.genes) {
                Ok(f) => child.fitness = Some(f),
                Err(Error::BudgetExhausted { .. }) => {
                    exhausted = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
    }

    let admitted = offspring.into_iter().filter(|c| {
        c.fitness.is_some()
            && c.genes != parents[c.origin].genes
            && c.genes != parents[c.partner].genes
    });

    let mut pool: Vec<Individual> = parents.clone();
    pool.extend(admitted.map(|c| Individual {
        genes: c.genes,
        fitness: c.fitness,
    }));
    // Stable sort: on equal fitness parents precede offspring.
    pool.sort_by(|a, b| a.rank_key().total_cmp(&b.rank_key()));
    let elite = (0..n)
        .min_by(|&a, &b| parents[a].rank_key().total_cmp(&parents[b].rank_key()))
        .expect("non-empty population");
    let elite = parents[elite].clone();
    let elite_pos = pool.iter().position(|ind| *ind == elite).expect("elite in pool");
    if elite_pos >= n {
        pool.remove(elite_pos);
        pool.insert(n - 1, elite);
    }
    pool.truncate(n);
    pop.members = pool;

    Ok(exhausted || pop.budget.is_exhausted())
}

/// A single run, advanced one generation at a time.
#[derive(Debug)]
pub struct Engine {
    cfg: EngineConfig,
    func: BenchmarkFn,
    rng: RandomStream,
    pop: Population,
    graph: Option<StrategyGraph>,
    current: StrategyId,
    previous: StrategyId,
    generation: usize,
    finished: bool,
    last_boundary_diversity: Option<f64>,
    started: Instant,
    trajectory: Vec<(usize, StrategyId)>,
    diversity_trace: Vec<DiversityRecord>,
    graph_updates: Vec<usize>,
    trace: Vec<TraceRow>,
    snapshots: Vec<GraphSnapshot>,
}

impl Engine {
    pub fn new(cfg: &EngineConfig) -> Result<Self> {
        cfg.validate()?;
        let started = Instant::now();
        let func = BenchmarkFn::new(cfg.function, cfg.dim)?;
        let mut rng = RandomStream::new(cfg.seed);
        let pop = init_population(cfg, &func, &mut rng)?;
        let (graph, current) = match cfg.mode {
            Mode::Adaptive => {
                let g = StrategyGraph::new(STRATEGY_COUNT, cfg.graph.eta, cfg.graph.w_min)?;
                let first = StrategyId::new(rng.index(STRATEGY_COUNT))?;
                (Some(g), first)
            }
            Mode::Static(id) => (None, id),
        };
        let mut engine = Self {
            cfg: cfg.clone(),
            finished: pop.budget.is_exhausted(),
            func,
            rng,
            pop,
            graph,
            current,
            previous: current,
            generation: 0,
            last_boundary_diversity: None,
            started,
            trajectory: Vec::new(),
            diversity_trace: Vec::new(),
            graph_updates: Vec::new(),
            trace: Vec::new(),
            snapshots: Vec::new(),
        };
        engine.record_trace_row()?;
        Ok(engine)
    }

    pub fn population(&self) -> &Population {
        &self.pop
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn current_strategy(&self) -> StrategyId {
        self.current
    }

    pub fn graph(&self) -> Option<&StrategyGraph> {
        self.graph.as_ref()
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Runs one generation, then handles a window boundary if one was reached.
    /// Returns `true` when the run is over.
    pub fn step(&mut self) -> Result<bool> {
        if self.finished {
            return Ok(true);
        }
        if self.generation.is_multiple_of(self.cfg.delta) {
            self.trajectory
                .push((self.generation / self.cfg.delta, self.current));
        }
        let exhausted =
            step_generation(&mut self.pop, self.current, &self.cfg, &self.func, &mut self.rng)?;
        self.generation += 1;
        self.record_trace_row()?;
        if exhausted {
            self.finished = true;
            return Ok(true);
        }
        if self.generation.is_multiple_of(self.cfg.delta) {
            self.window_boundary()?;
        }
        Ok(false)
    }

    fn window_boundary(&mut self) -> Result<()> {
        let Some(graph) = self.graph.as_mut() else {
            return Ok(());
        };
        let value = population_diversity(&self.pop.members)?;
        self.diversity_trace.push(DiversityRecord {
            generation: self.generation,
            value,
        });
        if let Some(before) = self.last_boundary_diversity {
            let p_hat = diversity_delta(before, value, self.cfg.graph.delta_eps);
            graph.update(self.previous.index(), self.current.index(), p_hat);
            self.graph_updates.push(self.generation);
        }
        self.last_boundary_diversity = Some(value);
        let next = graph.select_next(
            self.current.index(),
            self.cfg.graph.selection,
            self.cfg.graph.epsilon,
            &mut self.rng,
        );
        if self.cfg.record_graph {
            self.snapshots.push(GraphSnapshot {
                generation: self.generation,
                weights: graph.snapshot(),
            });
        }
        self.previous = self.current;
        self.current = StrategyId::new(next)?;
        Ok(())
    }

    fn record_trace_row(&mut self) -> Result<()> {
        if !self.cfg.record_trace {
            return Ok(());
        }
        let best_fitness = self.pop.budget.best().map_or(f64::INFINITY, |(f, _)| f);
        self.trace.push(TraceRow {
            generation: self.generation,
            best_fitness,
            diversity: population_diversity(&self.pop.members)?,
            strategy: self.current,
        });
        Ok(())
    }

    pub fn into_record(self) -> RunRecord {
        let (best_fitness, best_genes) = self
            .pop
            .budget
            .best
            .clone()
            .expect("initial population was evaluated");
        RunRecord {
            best_genes,
            best_fitness,
            evals_used: self.pop.evals_used(),
            generations_run: self.generation,
            wall_time: self.started.elapsed(),
            strategy_trajectory: self.trajectory,
            diversity_trace: self.diversity_trace,
            graph_updates: self.graph_updates,
            trace: self.trace,
            graph_snapshots: self.snapshots,
        }
    }
}

/// Runs `cfg` to budget exhaustion.
pub fn run(cfg: &EngineConfig) -> Result<RunRecord> {
    let mut engine = Engine::new(cfg)?;
    while !engine.step()? {}
    Ok(engine.into_record())
}
