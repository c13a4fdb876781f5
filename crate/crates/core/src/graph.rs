//! Strategy identifiers and the weighted strategy transition graph.
//!
//! The graph is a complete digraph (self-loops included) over all strategies.
//! Row `r` of the weight matrix is the selection distribution for the
//! strategy that follows `r`; rows always sum to one and no entry drops
//! below the floor `w_min`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operators::{CrossoverKind, MutationKind};
use crate::rng::RandomStream;

pub const STRATEGY_COUNT: usize = CrossoverKind::ALL.len() * MutationKind::ALL.len();

/// One (crossover, mutation) pairing. The id is `crossover * 4 + mutation`
/// over the orderings in [`CrossoverKind::ALL`] and [`MutationKind::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyId(u8);

impl StrategyId {
    pub fn new(index: usize) -> Result<Self> {
        if index < STRATEGY_COUNT {
            Ok(StrategyId(index as u8))
        } else {
            Err(Error::config(
                "strategy",
                format!("id {index} out of range 0..{STRATEGY_COUNT}"),
            ))
        }
    }

    pub fn from_parts(crossover: CrossoverKind, mutation: MutationKind) -> Self {
        let c = CrossoverKind::ALL.iter().position(|k| *k == crossover).unwrap();
        let m = MutationKind::ALL.iter().position(|k| *k == mutation).unwrap();
        StrategyId((c * MutationKind::ALL.len() + m) as u8)
    }

    pub fn all() -> impl Iterator<Item = StrategyId> {
        (0..STRATEGY_COUNT).map(|i| StrategyId(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn crossover(self) -> CrossoverKind {
        CrossoverKind::ALL[self.index() / MutationKind::ALL.len()]
    }

    pub fn mutation(self) -> MutationKind {
        MutationKind::ALL[self.index() % MutationKind::ALL.len()]
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionMode {
    /// Argmax of the outgoing row, with ε-uniform exploration.
    #[default]
    Map,
    /// Draw from the categorical distribution given by the row.
    Sample,
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "map" => Ok(SelectionMode::Map),
            "sample" => Ok(SelectionMode::Sample),
            other => Err(Error::config(
                "select",
                format!("expected `map` or `sample`, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::Map => "map",
            SelectionMode::Sample => "sample",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyGraph {
    n: usize,
    weights: Vec<f64>,
    eta: f64,
    w_min: f64,
}

impl StrategyGraph {
    /// Complete digraph on `n` nodes with uniform weights `1/n`.
    pub fn new(n: usize, eta: f64, w_min: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::config("strategies", "graph needs at least 2 nodes"));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::config("eta", "must be a finite non-negative number"));
        }
        if !(w_min > 0.0 && w_min < 1.0 / n as f64) {
            return Err(Error::config(
                "w_min",
                format!("must lie in (0, 1/{n})"),
            ));
        }
        Ok(Self {
            n,
            weights: vec![1.0 / n as f64; n * n],
            eta,
            w_min,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from * self.n + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.weights[from * self.n..(from + 1) * self.n]
    }

    /// Row-major copy of the full weight matrix.
    pub fn snapshot(&self) -> Vec<f64> {
        self.weights.clone()
    }

    /// Reinforces (`p_hat >= 0`) or weakens the arc `prev -> cur` by
    /// `eta * min(|p_hat|, 1)`, then renormalises row `prev`.
    ///
    /// Renormalisation divides the row by its sum. Entries that sit on the
    /// floor, or would fall below it, are pinned at `w_min` and the remaining
    /// mass is rescaled over the free entries.
    pub fn update(&mut self, prev: usize, cur: usize, p_hat: f64) {
        if p_hat.is_nan() {
            return;
        }
        let step = self.eta * p_hat.abs().min(1.0);
        if step == 0.0 {
            return;
        }
        let n = self.n;
        let w_min = self.w_min;
        let row = &mut self.weights[prev * n..(prev + 1) * n];
        if p_hat >= 0.0 {
            row[cur] += step;
        } else {
            row[cur] -= step;
        }
        renormalize_with_floor(row, w_min);
    }

    /// Chooses the strategy for the next window after `cur`.
    pub fn select_next(
        &self,
        cur: usize,
        mode: SelectionMode,
        epsilon: f64,
        rng: &mut RandomStream,
    ) -> usize {
        let row = self.row(cur);
        match mode {
            SelectionMode::Map => {
                if epsilon > 0.0 && rng.chance(epsilon) {
                    rng.index(self.n)
                } else {
                    argmax(row)
                }
            }
            SelectionMode::Sample => sample_categorical(row, rng.uniform()),
        }
    }
}

fn renormalize_with_floor(row: &mut [f64], w_min: f64) {
    let mut pinned: Vec<bool> = row.iter().map(|w| *w <= w_min).collect();
    for (w, p) in row.iter_mut().zip(&pinned) {
        if *p {
            *w = w_min;
        }
    }
    loop {
        let n_pinned = pinned.iter().filter(|p| **p).count();
        let free: f64 = row
            .iter()
            .zip(&pinned)
            .filter(|(_, p)| !**p)
            .map(|(w, _)| *w)
            .sum();
        if n_pinned == row.len() || free <= 0.0 {
            break;
        }
        let scale = (1.0 - n_pinned as f64 * w_min) / free;
        let mut newly_pinned = false;
        for (w, p) in row.iter_mut().zip(pinned.iter_mut()) {
            if !*p {
                *w *= scale;
                if *w < w_min {
                    *w = w_min;
                    *p = true;
                    newly_pinned = true;
                }
            }
        }
        if !newly_pinned {
            break;
        }
    }
}

/// Index of the largest entry; ties resolve to the lowest index.
pub fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, w) in row.iter().enumerate().skip(1) {
        if *w > row[best] {
            best = i;
        }
    }
    best
}

/// Inverse-CDF draw from `weights` (assumed to sum to one) using `u ∈ [0, 1)`.
pub fn sample_categorical(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // rounding left u above the final cumulative sum
    weights.len() - 1
}
