//! Fixtures shared by the criterion benchmarks.

use opgraph::{BenchmarkFn, FunctionId, RandomStream};

/// `n` points drawn uniformly from the domain of `id` in dimension `dim`.
pub fn random_population(id: FunctionId, dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let bounds = BenchmarkFn::new(id, dim).expect("valid dimension").bounds().clone();
    let mut rng = RandomStream::new(seed);
    (0..n)
        .map(|_| {
            (0..dim)
                .map(|i| rng.uniform_in(bounds.lower[i], bounds.upper[i]))
                .collect()
        })
        .collect()
}
