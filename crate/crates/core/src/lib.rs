//! Adaptive real-coded evolutionary algorithm driven by a strategy transition graph.
//!
//! A *strategy* pairs one of five crossover operators with one of four mutation
//! operators, giving twenty strategies. Every `delta` generations the engine
//! measures population diversity, credits the change to the arc of the graph
//! that led to the current strategy, and picks the next strategy from the
//! outgoing arcs of the current node.
//!
//! The crate is organised bottom-up:
//!
//! - [`benchmarks`]: the twelve objective functions and their box domains.
//! - [`operators`]: crossover and mutation operators, plus bound clamping.
//! - [`diversity`]: mean pairwise Euclidean distance and its relative change.
//! - [`graph`]: strategy ids, the weighted transition graph, and selection.
//! - [`engine`]: the generational loop in adaptive and static modes.
//! - [`harness`]: experiment configuration, batch execution, statistics and CSV output.

pub mod benchmarks;
pub mod diversity;
pub mod engine;
mod error;
pub mod graph;
pub mod harness;
pub mod operators;
mod rng;

pub use benchmarks::{BenchmarkFn, Bounds, FunctionId};
pub use diversity::{diversity_delta, population_diversity, DiversityRecord};
pub use engine::{
    run, EngineConfig, GraphParams, Individual, Mode, Population, RunRecord, TraceRow,
};
pub use error::{Error, Result};
pub use graph::{SelectionMode, StrategyGraph, StrategyId};
pub use operators::{CrossoverKind, MutationKind, OperatorParams};
pub use rng::RandomStream;
