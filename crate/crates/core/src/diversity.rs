//! Population diversity as mean pairwise Euclidean distance.

use crate::error::{Error, Result};

/// Default floor on the denominator of [`diversity_delta`].
pub const DEFAULT_DELTA_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityRecord {
    pub generation: usize,
    pub value: f64,
}

/// Mean Euclidean distance over all unordered pairs of members.
pub fn population_diversity<P: AsRef<[f64]>>(members: &[P]) -> Result<f64> {
    let n = members.len();
    if n < 2 {
        return Err(Error::PopulationTooSmall { min: 2, got: n });
    }
    let mut total = 0.0;
    for (i, a) in members.iter().enumerate() {
        let a = a.as_ref();
        for b in &members[i + 1..] {
            total += distance(a, b.as_ref());
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(total / pairs)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Relative diversity change `(after - before) / max(before, eps)`; positive
/// when diversity was preserved or gained.
pub fn diversity_delta(before: f64, after: f64, eps: f64) -> f64 {
    (after - before) / before.max(eps)
}
