//! Parent selection: proportional (roulette), stochastic universal sampling,
//! ranking and tournament.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::Population;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Selection {
    Roulette,
    Sus,
    /// Linear ranking with selection pressure `eta` in (1, 2].
    LinearRanking { eta: f64 },
    /// Explicit ranking function: `alpha[r - 1]` is the probability of rank `r`.
    Ranking { alpha: Vec<f64> },
    Tournament { size: usize },
}

impl Selection {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Selection::LinearRanking { eta } => linear_ranking_alpha(n, *eta).map(|_| ()),
            Selection::Ranking { alpha } => check_alpha(alpha, n),
            Selection::Tournament { size } if *size == 0 => Err(invalid("tournament size must be at least 1")),
            _ => Ok(()),
        }
    }
}

fn check_alpha(alpha: &[f64], n: usize) -> Result<()> {
    if alpha.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: alpha.len() });
    }
    if alpha.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(invalid("ranking probabilities must lie in [0, 1]"));
    }
    if (alpha.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(invalid("ranking probabilities must sum to 1"));
    }
    Ok(())
}

/// Cumulative-sum wheel: O(N) to build, O(log N) per draw. A zero or
/// non-finite total falls back to uniform choice.
#[derive(Debug, Clone)]
pub struct RouletteWheel {
    cumulative: Vec<f64>,
}

impl RouletteWheel {
    pub fn new<S: Scalar>(weights: &[S]) -> Self {
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w.as_f64();
                acc
            })
            .collect();
        RouletteWheel { cumulative }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.total() > 0.0 && self.total().is_finite())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let n = self.cumulative.len();
        if self.is_degenerate() {
            return rng.random_range(0..n);
        }
        let u = rng.random::<f64>() * self.total();
        self.locate(u)
    }

    // First index whose cumulative weight exceeds `u`; skips zero-weight slots.
    fn locate(&self, u: f64) -> usize {
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }
}

/// One proportional draw: index `i` with probability `Φ_i / ΣΦ`.
pub fn roulette_select<S: Scalar, R: Rng + ?Sized>(pop: &Population<S>, rng: &mut R) -> Result<usize> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    Ok(RouletteWheel::new(pop.fitness()).sample(rng))
}

/// Stochastic universal sampling of `m` indices.
///
/// One offset `x ~ U[0,1)` and one random permutation `j_1..j_m` of `0..m`;
/// draw `k` selects the first index whose cumulative fitness share exceeds
/// the pointer `{j_k / m + x}`. Copy counts are `⌊m p_i⌋` or `⌈m p_i⌉`.
pub fn sus_select<S: Scalar, R: Rng + ?Sized>(fitness: &[S], m: usize, rng: &mut R) -> Result<Vec<usize>> {
    if fitness.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let wheel = RouletteWheel::new(fitness);
    if wheel.is_degenerate() {
        return Err(Error::ZeroFitnessSum);
    }
    let x: f64 = rng.random();
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let total = wheel.total();
    Ok(order
        .into_iter()
        .map(|j| {
            let pointer = (j as f64 / m as f64 + x).fract();
            wheel.locate(pointer * total)
        })
        .collect())
}

/// A full round of `N` draws from the population.
pub fn sus_select_round<S: Scalar, R: Rng + ?Sized>(pop: &Population<S>, rng: &mut R) -> Result<Vec<usize>> {
    sus_select(pop.fitness(), pop.len(), rng)
}

/// Ranks `1..=N`, higher fitness gets the higher rank; among equal fitness the
/// lower index ranks higher.
pub fn ranking<S: Scalar>(fitness: &[S]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap_or(std::cmp::Ordering::Equal).then(b.cmp(&a)));
    let mut rank = vec![0; fitness.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    debug_assert!(is_valid_ranking(fitness, &rank));
    rank
}

/// Checks `Φ_i > Φ_j ⟹ r_i > r_j` and that ranks are a bijection on `1..=N`.
pub fn is_valid_ranking<S: Scalar>(fitness: &[S], rank: &[usize]) -> bool {
    let n = fitness.len();
    let mut seen = vec![false; n];
    for &r in rank {
        if r == 0 || r > n || seen[r - 1] {
            return false;
        }
        seen[r - 1] = true;
    }
    (0..n).all(|i| (0..n).all(|j| !(fitness[i] > fitness[j]) || rank[i] > rank[j]))
}

/// Linear ranking `α(r) = (η−1)/N · (2(r−N)/(N−1) + η/(η−1))`, `r = 1..=N`.
pub fn linear_ranking_alpha(n: usize, eta: f64) -> Result<Vec<f64>> {
    if !(eta > 1.0 && eta <= 2.0) {
        return Err(invalid(format!("eta = {eta} outside (1, 2]")));
    }
    if n < 2 {
        return Err(invalid("linear ranking needs at least two individuals"));
    }
    let nf = n as f64;
    Ok((1..=n)
        .map(|r| (eta - 1.0) / nf * (2.0 * (r as f64 - nf) / (nf - 1.0) + eta / (eta - 1.0)))
        .collect())
}

/// Roulette over ranks: `α(r) = r / (N(N+1)/2)`.
pub fn rank_roulette_alpha(n: usize) -> Vec<f64> {
    let total = (n * (n + 1)) as f64 / 2.0;
    (1..=n).map(|r| r as f64 / total).collect()
}

/// Picks a rank with probability `alpha[r-1]` and returns the index holding it.
pub fn rank_select<R: Rng + ?Sized>(rank: &[usize], alpha: &[f64], rng: &mut R) -> usize {
    let r = RouletteWheel::new(alpha).sample(rng) + 1;
    rank.iter().position(|&x| x == r).expect("ranks are a bijection")
}

/// Best of `s` uniform draws with replacement, compared by rank.
pub fn tournament_select<R: Rng + ?Sized>(rank: &[usize], s: usize, rng: &mut R) -> usize {
    let n = rank.len();
    let mut best = rng.random_range(0..n);
    for _ in 1..s {
        let c = rng.random_range(0..n);
        if rank[c] > rank[best] {
            best = c;
        }
    }
    best
}

/// Draws `count` parent indices from `pop`. Per-population structures (wheel,
/// ranks) are built once, so a round costs O(N log N).
pub fn select_parents<S: Scalar, R: Rng + ?Sized>(
    pop: &Population<S>,
    selection: &Selection,
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let n = pop.len();
    match selection {
        Selection::Roulette => {
            let wheel = RouletteWheel::new(pop.fitness());
            Ok((0..count).map(|_| wheel.sample(rng)).collect())
        }
        Selection::Sus => match sus_select(pop.fitness(), count, rng) {
            Err(Error::ZeroFitnessSum) => Ok((0..count).map(|_| rng.random_range(0..n)).collect()),
            other => other,
        },
        Selection::LinearRanking { eta } => {
            let alpha = linear_ranking_alpha(n, *eta)?;
            let rank = ranking(pop.fitness());
            let by_rank = invert(&rank);
            let wheel = RouletteWheel::new(&alpha);
            Ok((0..count).map(|_| by_rank[wheel.sample(rng)]).collect())
        }
        Selection::Ranking { alpha } => {
            check_alpha(alpha, n)?;
            let rank = ranking(pop.fitness());
            let by_rank = invert(&rank);
            let wheel = RouletteWheel::new(alpha);
            Ok((0..count).map(|_| by_rank[wheel.sample(rng)]).collect())
        }
        Selection::Tournament { size } => {
            if *size == 0 {
                return Err(invalid("tournament size must be at least 1"));
            }
            let rank = ranking(pop.fitness());
            Ok((0..count).map(|_| tournament_select(&rank, *size, rng)).collect())
        }
    }
}

// by_rank[r - 1] = index holding rank r
fn invert(rank: &[usize]) -> Vec<usize> {
    let mut by_rank = vec![0; rank.len()];
    for (i, &r) in rank.iter().enumerate() {
        by_rank[r - 1] = i;
    }
    by_rank
}
