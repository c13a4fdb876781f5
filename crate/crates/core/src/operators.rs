//! Crossover and mutation operators over real vectors.
//!
//! Every randomised operator has a deterministic core taking its draws
//! explicitly (`*_with` / `*_children`), and a wrapper that takes the draws
//! from a [`RandomStream`]. Out-of-bounds genes are repaired by clamping.

use std::f64::consts::PI;
use std::fmt;

use statrs::function::gamma::gamma;

use crate::benchmarks::Bounds;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Lower bound on `|v|` in the Mantegna construction; smaller draws are redrawn.
const MANTEGNA_MIN_V: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossoverKind {
    BlxAlpha,
    Discrete,
    OnePoint,
    Linear,
    Barycentric,
}

impl CrossoverKind {
    pub const ALL: [CrossoverKind; 5] = [
        CrossoverKind::BlxAlpha,
        CrossoverKind::Discrete,
        CrossoverKind::OnePoint,
        CrossoverKind::Linear,
        CrossoverKind::Barycentric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CrossoverKind::BlxAlpha => "blx-alpha",
            CrossoverKind::Discrete => "discrete",
            CrossoverKind::OnePoint => "one-point",
            CrossoverKind::Linear => "linear",
            CrossoverKind::Barycentric => "barycentric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationKind {
    Levy,
    Gaussian,
    DeRand1Bin,
    Scramble,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [
        MutationKind::Levy,
        MutationKind::Gaussian,
        MutationKind::DeRand1Bin,
        MutationKind::Scramble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::Levy => "levy",
            MutationKind::Gaussian => "gaussian",
            MutationKind::DeRand1Bin => "de-rand-1-bin",
            MutationKind::Scramble => "scramble",
        }
    }
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Operator parameters shared by all strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    /// BLX-α interval extension, α > 0.
    pub blx_alpha: f64,
    /// Gaussian step as a fraction of the domain width, > 0.
    pub gaussian_sigma: f64,
    /// Lévy stability index β ∈ (1, 2].
    pub levy_beta: f64,
    /// Lévy step scale as a fraction of the domain width, > 0.
    pub levy_scale: f64,
    /// DE differential weight F ∈ (0, 2].
    pub de_f: f64,
    /// DE binomial crossover rate ∈ [0, 1].
    pub de_cr: f64,
}

impl Default for OperatorParams {
    fn default() -> Self {
        Self {
            blx_alpha: 0.5,
            gaussian_sigma: 0.1,
            levy_beta: 1.5,
            levy_scale: 0.01,
            de_f: 0.5,
            de_cr: 0.9,
        }
    }
}

impl OperatorParams {
    pub fn validate(&self) -> Result<()> {
        fn check(key: &str, ok: bool, domain: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::config(key, format!("must lie in {domain}")))
            }
        }
        check("blx_alpha", self.blx_alpha > 0.0 && self.blx_alpha.is_finite(), "(0, inf)")?;
        check(
            "gaussian_sigma",
            self.gaussian_sigma > 0.0 && self.gaussian_sigma.is_finite(),
            "(0, inf)",
        )?;
        check("levy_beta", self.levy_beta > 1.0 && self.levy_beta <= 2.0, "(1, 2]")?;
        check(
            "levy_scale",
            self.levy_scale > 0.0 && self.levy_scale.is_finite(),
            "(0, inf)",
        )?;
        check("de_f", self.de_f > 0.0 && self.de_f <= 2.0, "(0, 2]")?;
        check("de_cr", (0.0..=1.0).contains(&self.de_cr), "[0, 1]")
    }
}

fn same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        })
    }
}

pub fn clamp_to_bounds(x: &[f64], bounds: &Bounds) -> Vec<f64> {
    let mut out = x.to_vec();
    clamp_in_place(&mut out, bounds);
    out
}

pub fn clamp_in_place(x: &mut [f64], bounds: &Bounds) {
    for ((v, lo), hi) in x.iter_mut().zip(&bounds.lower).zip(&bounds.upper) {
        *v = v.clamp(*lo, *hi);
    }
}

// --- crossover -------------------------------------------------------------

/// One BLX-α child from per-gene uniform draws in `[0, 1]`.
pub fn blx_alpha_child(p1: &[f64], p2: &[f64], alpha: f64, draws: &[f64]) -> Vec<f64> {
    p1.iter()
        .zip(p2)
        .zip(draws)
        .map(|((a, b), u)| {
            let d = (a - b).abs();
            let lo = a.min(*b) - alpha * d;
            lo + u * (d + 2.0 * alpha * d)
        })
        .collect()
}

pub fn crossover_blx(
    p1: &[f64],
    p2: &[f64],
    alpha: f64,
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    same_len(p1, p2)?;
    let mut child = || {
        let draws: Vec<f64> = (0..p1.len()).map(|_| rng.uniform()).collect();
        blx_alpha_child(p1, p2, alpha, &draws)
    };
    let c1 = child();
    let c2 = child();
    Ok((c1, c2))
}

/// `mask[i] == true` gives child 1 the gene of `p1`, child 2 the gene of `p2`.
pub fn discrete_children(p1: &[f64], p2: &[f64], mask: &[bool]) -> (Vec<f64>, Vec<f64>) {
    p1.iter()
        .zip(p2)
        .zip(mask)
        .map(|((a, b), heads)| if *heads { (*a, *b) } else { (*b, *a) })
        .unzip()
}

pub fn crossover_discrete(
    p1: &[f64],
    p2: &[f64],
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    same_len(p1, p2)?;
    let mask: Vec<bool> = (0..p1.len()).map(|_| rng.coin()).collect();
    Ok(discrete_children(p1, p2, &mask))
}

/// Exchanges the tails after cut index `k`.
pub fn one_point_children(p1: &[f64], p2: &[f64], k: usize) -> (Vec<f64>, Vec<f64>) {
    let c1 = p1[..k].iter().chain(&p2[k..]).copied().collect();
    let c2 = p2[..k].iter().chain(&p1[k..]).copied().collect();
    (c1, c2)
}

pub fn crossover_one_point(
    p1: &[f64],
    p2: &[f64],
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    same_len(p1, p2)?;
    if p1.len() < 2 {
        return Err(Error::TooShort {
            min: 2,
            got: p1.len(),
        });
    }
    let k = 1 + rng.index(p1.len() - 1);
    Ok(one_point_children(p1, p2, k))
}

/// The three linear-crossover candidates, in tie-break order.
pub fn linear_candidates(p1: &[f64], p2: &[f64]) -> [Vec<f64>; 3] {
    // 1.5a - 0.5b written as a + 0.5(a - b) so equal parents reproduce exactly.
    let mean = p1.iter().zip(p2).map(|(a, b)| 0.5 * (a + b)).collect();
    let beyond_p1 = p1.iter().zip(p2).map(|(a, b)| a + 0.5 * (a - b)).collect();
    let beyond_p2 = p1.iter().zip(p2).map(|(a, b)| b + 0.5 * (b - a)).collect();
    [mean, beyond_p1, beyond_p2]
}

/// Linear crossover: evaluates three clamped candidates through `evaluate`
/// and keeps the two with the lowest fitness. Ties go to the earlier candidate.
///
/// Errors from `evaluate` (typically budget exhaustion) propagate unchanged.
#[allow(clippy::type_complexity)]
pub fn crossover_linear<F>(
    p1: &[f64],
    p2: &[f64],
    bounds: &Bounds,
    mut evaluate: F,
) -> Result<((Vec<f64>, f64), (Vec<f64>, f64))>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    same_len(p1, p2)?;
    let mut scored = Vec::with_capacity(3);
    for mut cand in linear_candidates(p1, p2) {
        clamp_in_place(&mut cand, bounds);
        let fit = evaluate(&cand)?;
        scored.push((cand, fit));
    }
    // stable: equal fitness keeps candidate order
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut it = scored.into_iter();
    let first = it.next().expect("three candidates");
    let second = it.next().expect("three candidates");
    Ok((first, second))
}

pub fn barycentric_children(p1: &[f64], p2: &[f64], lambda: f64) -> (Vec<f64>, Vec<f64>) {
    p1.iter()
        .zip(p2)
        .map(|(a, b)| {
            (
                lambda * a + (1.0 - lambda) * b,
                (1.0 - lambda) * a + lambda * b,
            )
        })
        .unzip()
}

pub fn crossover_barycentric(
    p1: &[f64],
    p2: &[f64],
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    same_len(p1, p2)?;
    let lambda = rng.uniform();
    Ok(barycentric_children(p1, p2, lambda))
}

// --- mutation --------------------------------------------------------------

/// Gaussian perturbation given standard-normal draws `z`.
pub fn gaussian_with(x: &[f64], bounds: &Bounds, sigma_frac: f64, z: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = x
        .iter()
        .zip(z)
        .enumerate()
        .map(|(i, (v, zi))| v + zi * sigma_frac * bounds.width(i))
        .collect();
    clamp_in_place(&mut out, bounds);
    out
}

pub fn mutate_gaussian(
    x: &[f64],
    bounds: &Bounds,
    sigma_frac: f64,
    rng: &mut RandomStream,
) -> Vec<f64> {
    let z: Vec<f64> = (0..x.len()).map(|_| rng.normal()).collect();
    gaussian_with(x, bounds, sigma_frac, &z)
}

/// Mantegna's σ_u for stability index `beta`:
/// (Γ(1+β) sin(πβ/2) / (Γ((1+β)/2) β 2^((β−1)/2)))^(1/β).
pub fn mantegna_sigma(beta: f64) -> f64 {
    let num = gamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// Lévy step `u / |v|^(1/β)` with `u = sigma_u * z_u`.
pub fn levy_step(z_u: f64, v: f64, beta: f64, sigma_u: f64) -> f64 {
    sigma_u * z_u / v.abs().powf(1.0 / beta)
}

/// Draws one Lévy step. `|v|` below 1e-300 is redrawn.
pub fn draw_levy_step(beta: f64, sigma_u: f64, rng: &mut RandomStream) -> f64 {
    let z_u = rng.normal();
    let v = loop {
        let v = rng.normal();
        if v.abs() >= MANTEGNA_MIN_V {
            break v;
        }
    };
    levy_step(z_u, v, beta, sigma_u)
}

pub fn mutate_levy(
    x: &[f64],
    bounds: &Bounds,
    beta: f64,
    scale: f64,
    rng: &mut RandomStream,
) -> Vec<f64> {
    let sigma_u = mantegna_sigma(beta);
    let mut out: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, v)| v + scale * bounds.width(i) * draw_levy_step(beta, sigma_u, rng))
        .collect();
    clamp_in_place(&mut out, bounds);
    out
}

/// DE/rand/1/bin trial vector given the three donors and the binomial mask
/// (`take_donor[i]` already includes the forced index).
pub fn de_trial(
    x: &[f64],
    r1: &[f64],
    r2: &[f64],
    r3: &[f64],
    f: f64,
    take_donor: &[bool],
    bounds: &Bounds,
) -> Vec<f64> {
    let mut out: Vec<f64> = (0..x.len())
        .map(|i| {
            if take_donor[i] {
                r1[i] + f * (r2[i] - r3[i])
            } else {
                x[i]
            }
        })
        .collect();
    clamp_in_place(&mut out, bounds);
    out
}

/// DE/rand/1/bin mutation of `x` against the population snapshot `members`.
/// `self_index` is x's position in `members`, excluded from donor choice.
pub fn mutate_de_rand_1_bin<P: AsRef<[f64]>>(
    x: &[f64],
    self_index: Option<usize>,
    members: &[P],
    bounds: &Bounds,
    f: f64,
    cr: f64,
    rng: &mut RandomStream,
) -> Result<Vec<f64>> {
    if members.len() < 4 {
        return Err(Error::PopulationTooSmall {
            min: 4,
            got: members.len(),
        });
    }
    let mut picked: [usize; 3] = [usize::MAX; 3];
    for slot in 0..3 {
        picked[slot] = loop {
            let r = rng.index(members.len());
            if Some(r) != self_index && !picked[..slot].contains(&r) {
                break r;
            }
        };
    }
    let d = x.len();
    for &r in &picked {
        same_len(x, members[r].as_ref())?;
    }
    let forced = rng.index(d);
    let mask: Vec<bool> = (0..d).map(|i| rng.uniform() < cr || i == forced).collect();
    let [a, b, c] = picked.map(|r| members[r].as_ref());
    Ok(de_trial(x, a, b, c, f, &mask, bounds))
}

/// Applies `perm` (a permutation of `0..=end-start`) to the segment `start..=end`.
pub fn scramble_with(x: &[f64], start: usize, end: usize, perm: &[usize]) -> Vec<f64> {
    let mut out = x.to_vec();
    for (offset, &p) in perm.iter().enumerate() {
        out[start + offset] = x[start + p];
    }
    debug_assert_eq!(perm.len(), end - start + 1);
    out
}

pub fn mutate_scramble(x: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            min: 2,
            got: x.len(),
        });
    }
    let i = rng.index(x.len());
    let j = loop {
        let j = rng.index(x.len());
        if j != i {
            break j;
        }
    };
    let (start, end) = (i.min(j), i.max(j));
    let mut perm: Vec<usize> = (0..=end - start).collect();
    rng.shuffle(&mut perm);
    Ok(scramble_with(x, start, end, &perm))
}
