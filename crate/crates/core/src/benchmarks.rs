//! Benchmark objective functions (all minimised).
//!
//! | id              | definition                                                                                  | domain        |
//! |-----------------|---------------------------------------------------------------------------------------------|---------------|
//! | `sphere`        | Σ xᵢ²                                                                                       | [-100, 100]   |
//! | `schwefel12`    | Σᵢ (Σ_{j≤i} xⱼ)²                                                                            | [-100, 100]   |
//! | `schwefel221`   | maxᵢ \|xᵢ\|                                                                                 | [-100, 100]   |
//! | `griewank`      | 1 + Σ xᵢ²/4000 − Π cos(xᵢ/√i)                                                               | [-600, 600]   |
//! | `elliptic`      | Σ (10⁶)^((i−1)/(D−1)) xᵢ²                                                                   | [-100, 100]   |
//! | `zakharov`      | Σ xᵢ² + (Σ 0.5·i·xᵢ)² + (Σ 0.5·i·xᵢ)⁴                                                       | [-10, 10]     |
//! | `cosmix`        | 0.1·D − (0.1 Σ cos(5πxᵢ) − Σ xᵢ²)                                                           | [-1, 1]       |
//! | `levymontalvo2` | 0.1·(sin²(3πx₁) + Σ_{i<D} (xᵢ−1)²(1+sin²(3πxᵢ₊₁)) + (x_D−1)²(1+sin²(2πx_D)))                | [-5, 5]       |
//! | `neumaier3`     | Σ (xᵢ−1)² − Σ_{i≥2} xᵢ xᵢ₋₁                                                                  | [-D², D²]     |
//! | `periodic`      | 1 + Σ sin²(xᵢ) − 0.1·exp(−Σ xᵢ²)                                                             | [-10, 10]     |
//! | `michalewicz`   | −Σ sin(xᵢ) · sin²ᵐ(i·xᵢ²/π), m = 10                                                         | [0, π]        |
//! | `alpine`        | Σ \|xᵢ sin(xᵢ) + 0.1 xᵢ\|                                                                   | [-10, 10]     |
//!
//! Indices `i` are 1-based in the table. Reference optima are descriptive
//! metadata; the engine never reads them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const MICHALEWICZ_M: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionId {
    Sphere,
    Schwefel12,
    Schwefel221,
    Griewank,
    Elliptic,
    Zakharov,
    CosineMixture,
    LevyMontalvo2,
    Neumaier3,
    Periodic,
    Michalewicz,
    Alpine,
}

impl FunctionId {
    pub const ALL: [FunctionId; 12] = [
        FunctionId::Sphere,
        FunctionId::Schwefel12,
        FunctionId::Schwefel221,
        FunctionId::Griewank,
        FunctionId::Elliptic,
        FunctionId::Zakharov,
        FunctionId::CosineMixture,
        FunctionId::LevyMontalvo2,
        FunctionId::Neumaier3,
        FunctionId::Periodic,
        FunctionId::Michalewicz,
        FunctionId::Alpine,
    ];

    /// Lowercase name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Sphere => "sphere",
            FunctionId::Schwefel12 => "schwefel12",
            FunctionId::Schwefel221 => "schwefel221",
            FunctionId::Griewank => "griewank",
            FunctionId::Elliptic => "elliptic",
            FunctionId::Zakharov => "zakharov",
            FunctionId::CosineMixture => "cosmix",
            FunctionId::LevyMontalvo2 => "levymontalvo2",
            FunctionId::Neumaier3 => "neumaier3",
            FunctionId::Periodic => "periodic",
            FunctionId::Michalewicz => "michalewicz",
            FunctionId::Alpine => "alpine",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL
            .iter()
            .map(|f| f.name())
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Symmetric under any permutation of the coordinates.
    pub fn is_permutation_invariant(self) -> bool {
        matches!(
            self,
            FunctionId::Sphere
                | FunctionId::Schwefel221
                | FunctionId::Alpine
                | FunctionId::CosineMixture
                | FunctionId::Periodic
        )
    }

    fn domain(self, dimension: usize) -> (f64, f64) {
        match self {
            FunctionId::Sphere
            | FunctionId::Schwefel12
            | FunctionId::Schwefel221
            | FunctionId::Elliptic => (-100.0, 100.0),
            FunctionId::Griewank => (-600.0, 600.0),
            FunctionId::Zakharov | FunctionId::Periodic | FunctionId::Alpine => (-10.0, 10.0),
            FunctionId::CosineMixture => (-1.0, 1.0),
            FunctionId::LevyMontalvo2 => (-5.0, 5.0),
            FunctionId::Neumaier3 => {
                let d2 = (dimension * dimension) as f64;
                (-d2, d2)
            }
            FunctionId::Michalewicz => (0.0, PI),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFunction {
                name: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

/// Per-dimension box constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn uniform(dimension: usize, lower: f64, upper: f64) -> Self {
        Self {
            lower: vec![lower; dimension],
            upper: vec![upper; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }
}

/// A benchmark function instantiated at a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkFn {
    id: FunctionId,
    dimension: usize,
    bounds: Bounds,
}

impl BenchmarkFn {
    pub fn new(id: FunctionId, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::config("dim", "must be a positive integer"));
        }
        let (lo, hi) = id.domain(dimension);
        Ok(Self {
            id,
            dimension,
            bounds: Bounds::uniform(dimension, lo, hi),
        })
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Best known objective value at this dimension, if one is known.
    pub fn reference_optimum(&self) -> Option<f64> {
        let d = self.dimension as f64;
        match self.id {
            FunctionId::Neumaier3 => Some(-d * (d + 4.0) * (d - 1.0) / 6.0),
            FunctionId::Periodic => Some(0.9),
            FunctionId::Michalewicz => match self.dimension {
                1 => Some(-1.0),
                2 => Some(-1.801_303_4),
                5 => Some(-4.687_658),
                10 => Some(-9.660_15),
                _ => None,
            },
            _ => Some(0.0),
        }
    }

    /// A point attaining [`reference_optimum`](Self::reference_optimum), where
    /// it has a closed form.
    pub fn known_optimizer(&self) -> Option<Vec<f64>> {
        let n = self.dimension;
        match self.id {
            FunctionId::Michalewicz => None,
            FunctionId::LevyMontalvo2 => Some(vec![1.0; n]),
            FunctionId::Neumaier3 => Some(
                (1..=n)
                    .map(|i| (i * (n + 1 - i)) as f64)
                    .collect(),
            ),
            _ => Some(vec![0.0; n]),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(self.evaluate_unchecked(x))
    }

    fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        match self.id {
            FunctionId::Sphere => x.iter().map(|v| v * v).sum(),
            FunctionId::Schwefel12 => {
                let mut prefix = 0.0;
                x.iter()
                    .map(|v| {
                        prefix += v;
                        prefix * prefix
                    })
                    .sum()
            }
            FunctionId::Schwefel221 => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            FunctionId::Griewank => {
                let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                1.0 + sum - prod
            }
            FunctionId::Elliptic => {
                let denom = (x.len().max(2) - 1) as f64;
                x.iter()
                    .enumerate()
                    .map(|(i, v)| 1e6f64.powf(i as f64 / denom) * v * v)
                    .sum()
            }
            FunctionId::Zakharov => {
                let squares: f64 = x.iter().map(|v| v * v).sum();
                let weighted: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum();
                let w2 = weighted * weighted;
                squares + w2 + w2 * w2
            }
            FunctionId::CosineMixture => {
                let cos: f64 = x.iter().map(|v| (5.0 * PI * v).cos()).sum();
                let squares: f64 = x.iter().map(|v| v * v).sum();
                0.1 * x.len() as f64 - (0.1 * cos - squares)
            }
            FunctionId::LevyMontalvo2 => {
                let n = x.len();
                let head = (3.0 * PI * x[0]).sin().powi(2);
                let body: f64 = x
                    .windows(2)
                    .map(|w| (w[0] - 1.0).powi(2) * (1.0 + (3.0 * PI * w[1]).sin().powi(2)))
                    .sum();
                let last = x[n - 1];
                let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                0.1 * (head + body + tail)
            }
            FunctionId::Neumaier3 => {
                let squares: f64 = x.iter().map(|v| (v - 1.0).powi(2)).sum();
                let cross: f64 = x.windows(2).map(|w| w[0] * w[1]).sum();
                squares - cross
            }
            FunctionId::Periodic => {
                let sines: f64 = x.iter().map(|v| v.sin().powi(2)).sum();
                let squares: f64 = x.iter().map(|v| v * v).sum();
                1.0 + sines - 0.1 * (-squares).exp()
            }
            FunctionId::Michalewicz => -x
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.sin() * ((i + 1) as f64 * v * v / PI).sin().powi(2 * MICHALEWICZ_M)
                })
                .sum::<f64>(),
            FunctionId::Alpine => x.iter().map(|v| (v * v.sin() + 0.1 * v).abs()).sum(),
        }
    }
}

/// Descriptors for all twelve functions at `dimension`.
pub fn list_functions(dimension: usize) -> Result<Vec<BenchmarkFn>> {
    FunctionId::ALL
        .iter()
        .map(|&id| BenchmarkFn::new(id, dimension))
        .collect()
}
