//! Analytic quantities of the simple GA and Monte Carlo verifiers for them:
//! schema growth, allele degeneration, copy-count statistics of the selection
//! operators, sizing of a GA that behaves as a local search, and a small
//! exhaustive audit of the operator classes that govern convergence.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::engine::{run_ea, Genotype, Population, Problem, Termination};
use crate::error::{invalid, Error, Result};
use crate::problems::{all_bit_strings, OneMax};
use crate::rng::{seeded, stream};
use crate::scalar::Scalar;
use crate::selection::{rank_roulette_alpha, select_parents, Selection};
use crate::stats::{ProportionCheck, Summary};
use crate::strategies::{kga_offspring, survive_elitist, StrategyConfig, StrategyKind};
use crate::variation::{CrossoverKind, MutationKind, OperatorSuite};

/// Hyperplane of binary strings with some positions fixed. Positions are
/// zero-based and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schema {
    l: usize,
    fixed: Vec<(usize, bool)>,
}

impl Schema {
    pub fn new(l: usize, fixed: Vec<(usize, bool)>) -> Result<Self> {
        if fixed.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("schema positions must be strictly increasing"));
        }
        if let Some(&(j, _)) = fixed.last() {
            if j >= l {
                return Err(invalid(format!("schema position {j} outside 0..{l}")));
            }
        }
        Ok(Schema { l, fixed })
    }

    /// The first `k` positions fixed to one.
    pub fn leading_ones(l: usize, k: usize) -> Result<Self> {
        Schema::new(l, (0..k).map(|j| (j, true)).collect())
    }

    /// The last `k` positions fixed to one.
    pub fn trailing_ones(l: usize, k: usize) -> Result<Self> {
        if k > l {
            return Err(invalid(format!("k = {k} exceeds l = {l}")));
        }
        Schema::new(l, (l - k..l).map(|j| (j, true)).collect())
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn fixed(&self) -> &[(usize, bool)] {
        &self.fixed
    }

    /// Number of fixed positions `K`.
    pub fn order(&self) -> usize {
        self.fixed.len()
    }

    /// Distance between the outermost fixed positions; 0 for order ≤ 1.
    pub fn defining_length(&self) -> usize {
        match (self.fixed.first(), self.fixed.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }

    pub fn matches(&self, x: &[bool]) -> bool {
        x.len() == self.l && self.fixed.iter().all(|&(j, h)| x[j] == h)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = vec!['*'; self.l];
        for &(j, h) in &self.fixed {
            s[j] = if h { '1' } else { '0' };
        }
        f.write_str(&s.into_iter().collect::<String>())
    }
}

/// Parses patterns such as `11**0`.
impl FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fixed = Vec::new();
        for (j, c) in s.trim().chars().enumerate() {
            match c {
                '0' => fixed.push((j, false)),
                '1' => fixed.push((j, true)),
                '*' => {}
                _ => return Err(Error::Parse(format!("schema character {c:?} is not 0, 1 or *"))),
            }
        }
        Schema::new(s.trim().chars().count(), fixed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemaStats<S> {
    pub count: usize,
    /// Mean fitness of the representatives; `None` when there are none.
    pub mean_fitness: Option<S>,
}

fn check_length<S: Scalar>(schema: &Schema, pop: &Population<S>) -> Result<()> {
    for g in pop.members() {
        let x = g.as_binary()?;
        if x.len() != schema.len() {
            return Err(Error::LengthMismatch { expected: schema.len(), found: x.len() });
        }
    }
    Ok(())
}

pub fn schema_count<S: Scalar>(schema: &Schema, pop: &Population<S>) -> Result<SchemaStats<S>> {
    check_length(schema, pop)?;
    let mut count = 0;
    let mut sum = S::zero();
    for (g, &phi) in pop.members().iter().zip(pop.fitness()) {
        if schema.matches(g.as_binary()?) {
            count += 1;
            sum = sum + phi;
        }
    }
    let mean_fitness = (count > 0).then(|| sum / S::from_usize_lossy(count));
    Ok(SchemaStats { count, mean_fitness })
}

/// Lower bound on the expected number of representatives of `schema` after
/// one generation of proportional selection, one-point crossover and bitwise
/// mutation: `c (1 − δ P_c/(l−1)) (1 − P_m)^K N(H)` with `c` the ratio of the
/// schema's mean fitness to the population mean fitness.
pub fn schema_theorem_bound<S: Scalar>(schema: &Schema, pop: &Population<S>, p_c: f64, p_m: f64) -> Result<f64> {
    if schema.len() < 2 {
        return Err(invalid("schema bound needs l >= 2"));
    }
    let stats = schema_count(schema, pop)?;
    let mean_h = stats.mean_fitness.ok_or(Error::EmptySchema)?.as_f64();
    let total = pop.total_fitness().as_f64();
    if !(total > 0.0) {
        return Err(Error::ZeroFitnessSum);
    }
    let c = mean_h / (total / pop.len() as f64);
    let crossover = 1.0 - schema.defining_length() as f64 * p_c / (schema.len() - 1) as f64;
    Ok(c * crossover * (1.0 - p_m).powi(schema.order() as i32) * stats.count as f64)
}

/// Largest `P_m` for which the bound still exceeds `N(H)`, given the fitness
/// ratio `c` and the crossover survival factor: `1 − (c·factor)^{−1/K}`.
pub fn growth_mutation_threshold(c: f64, crossover_factor: f64, order: usize) -> f64 {
    1.0 - (1.0 / (c * crossover_factor)).powf(1.0 / order as f64)
}

/// For `f(x) = x` on all `2^l` genotypes with the first `l/4` bits fixed to
/// one, growth is guaranteed for `P_m < 1 − (2/3)^{4/l}`.
pub fn leading_ones_mutation_threshold(l: usize) -> f64 {
    1.0 - (2.0f64 / 3.0).powf(4.0 / l as f64)
}

/// Exact `Φ(H)/Φ(B)` for `f(x) = x` over all `2^l` genotypes with the first
/// `k` bits fixed to one: `(2^{l+1} − 2^{l−k} − 1)/(2^l − 1)`.
pub fn leading_ones_ratio(l: usize, k: usize) -> f64 {
    let p = |e: usize| 2f64.powi(e as i32);
    (p(l + 1) - p(l - k) - 1.0) / (p(l) - 1.0)
}

/// Same setting with the last `k` bits fixed: `Φ(H')/Φ(B) − 1 =
/// (2^k − 1)/(2^l − 1)`, returned without the leading 1 so that it survives
/// rounding.
pub fn trailing_ones_ratio_excess(l: usize, k: usize) -> f64 {
    (2f64.powi(k as i32) - 1.0) / (2f64.powi(l as i32) - 1.0)
}

/// Excess over 1 of the upper bound `(1 + 2^{l−k})/(2^{l−k} − 2^{−k})` on the
/// same ratio, i.e. `(1 + 2^{−k})/(2^{l−k} − 2^{−k})`.
pub fn trailing_ones_bound_excess(l: usize, k: usize) -> f64 {
    let tail = 2f64.powi(-(k as i32));
    (1.0 + tail) / (2f64.powi((l - k) as i32) - tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemaReport {
    pub trials: usize,
    pub empirical_mean: f64,
    pub std_error: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Regenerates `pop` `trials` times with one KGA generation each and compares
/// the mean number of representatives of `schema` with the analytic bound.
pub fn verify_schema_theorem<S, P>(
    problem: &P,
    pop: &Population<S>,
    schema: &Schema,
    suite: &OperatorSuite<S>,
    trials: usize,
    seed: u64,
) -> Result<SchemaReport>
where
    S: Scalar,
    P: Problem<S>,
{
    if trials < 100 {
        return Err(invalid(format!("{trials} trials are too few; use at least 100")));
    }
    let bound = schema_theorem_bound(schema, pop, suite.p_c, suite.p_m)?;
    let mut counts = Vec::with_capacity(trials);
    for k in 0..trials {
        let children = kga_offspring(problem, pop, suite, &mut stream(seed, k as u64))?;
        let mut n = 0usize;
        for c in &children {
            n += schema.matches(c.as_binary()?) as usize;
        }
        counts.push(n as f64);
    }
    let s = Summary::of(&counts);
    Ok(SchemaReport { trials, empirical_mean: s.mean, std_error: s.std_error, bound, passed: s.mean >= bound - 3.0 * s.std_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Degeneration {
    /// Probability that every child carries the zero allele at the locus.
    pub p_all: f64,
    /// Probability that no child carries it.
    pub p_none: f64,
    pub p_total: f64,
}

/// Loss probabilities of the zero and the one allele at a locus after one KGA
/// generation, where `a` is the fitness share of the zero allele.
pub fn degeneration_probabilities(a: f64, p_m: f64, n: usize) -> Degeneration {
    let zero = a + (1.0 - 2.0 * a) * p_m;
    let p_all = zero.powi(n as i32);
    let p_none = (1.0 - zero).powi(n as i32);
    Degeneration { p_all, p_none, p_total: p_all + p_none }
}

/// Share of the total fitness held by members with a zero at locus `q`.
pub fn compute_a_q<S: Scalar>(pop: &Population<S>, q: usize) -> Result<f64> {
    let total = pop.total_fitness().as_f64();
    if !(total > 0.0) {
        return Err(Error::ZeroFitnessSum);
    }
    let mut zero = 0.0;
    for (g, &phi) in pop.members().iter().zip(pop.fitness()) {
        let x = g.as_binary()?;
        if q >= x.len() {
            return Err(invalid(format!("locus {q} outside 0..{}", x.len())));
        }
        if !x[q] {
            zero += phi.as_f64();
        }
    }
    Ok(zero / total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerationEstimate {
    pub all: ProportionCheck,
    pub none: ProportionCheck,
}

/// Simulates `trials` KGA generations (roulette, one-point crossover with
/// `p_c`, bitwise mutation `p_m`) from a population of `n` strings of length 4
/// in which member 0 alone has a zero at locus 1 and holds the fitness share
/// `a`. Counts generations where the zero allele is everywhere / nowhere.
pub fn degeneration_monte_carlo(a: f64, p_m: f64, n: usize, p_c: f64, trials: usize, seed: u64) -> Result<DegenerationEstimate> {
    const L: usize = 4;
    const Q: usize = 1;
    if n < 2 || n % 2 == 1 {
        return Err(invalid(format!("population size {n} must be even and at least 2")));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(invalid(format!("a = {a} outside [0, 1]")));
    }
    let members = (0..n)
        .map(|i| {
            let mut x: Vec<bool> = (0..L).map(|j| (i >> j) & 1 == 1).collect();
            x[Q] = i != 0;
            Genotype::Binary(x)
        })
        .collect();
    let rest = (1.0 - a) / (n - 1) as f64;
    let fitness = (0..n).map(|i| if i == 0 { a } else { rest }).collect();
    let pop = Population::<f64>::with_fitness(members, fitness)?;
    let suite = OperatorSuite::new(Selection::Roulette, CrossoverKind::OnePoint, p_c, MutationKind::Bernoulli, p_m);
    let problem = OneMax::new(L);
    let expected = degeneration_probabilities(a, p_m, n);
    let (mut all, mut none) = (0, 0);
    for k in 0..trials {
        let children = kga_offspring(&problem, &pop, &suite, &mut stream(seed, k as u64))?;
        let zeros = children.iter().filter(|c| !c.as_binary().expect("binary")[Q]).count();
        all += (zeros == n) as usize;
        none += (zeros == 0) as usize;
    }
    Ok(DegenerationEstimate {
        all: ProportionCheck::new(all, trials, expected.p_all),
        none: ProportionCheck::new(none, trials, expected.p_none),
    })
}

/// Copy count `Z(i)` of one individual over a round of `N` selections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CopyStatsQuery {
    /// Proportional selection, individual holding fitness share `p`.
    Roulette { n: usize, p: f64 },
    /// Stochastic universal sampling with expected count `np = N p`.
    Sus { n: usize, np: f64 },
    /// Binary tournament, individual of rank `r` (N is best).
    Tournament2 { n: usize, r: usize },
    /// Roulette over ranks, individual of rank `r`.
    RankRoulette { n: usize, r: usize },
}

impl CopyStatsQuery {
    pub fn n(&self) -> usize {
        match *self {
            CopyStatsQuery::Roulette { n, .. }
            | CopyStatsQuery::Sus { n, .. }
            | CopyStatsQuery::Tournament2 { n, .. }
            | CopyStatsQuery::RankRoulette { n, .. } => n,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(invalid("copy statistics need N >= 2"));
        }
        match *self {
            CopyStatsQuery::Roulette { p, .. } if !(0.0..=1.0).contains(&p) => Err(invalid(format!("p = {p} outside [0, 1]"))),
            CopyStatsQuery::Sus { np, .. } if !(0.0..=n as f64).contains(&np) => {
                Err(invalid(format!("Np = {np} outside [0, {n}]")))
            }
            CopyStatsQuery::Tournament2 { r, .. } | CopyStatsQuery::RankRoulette { r, .. } if r == 0 || r > n => {
                Err(invalid(format!("rank {r} outside 1..={n}")))
            }
            _ => Ok(()),
        }
    }
}

/// Mean and variance of the copy count.
pub fn analytic_copy_stats(q: CopyStatsQuery) -> Result<(f64, f64)> {
    q.validate()?;
    Ok(match q {
        CopyStatsQuery::Roulette { n, p } => (n as f64 * p, n as f64 * p * (1.0 - p)),
        CopyStatsQuery::Sus { np, .. } => {
            let frac = np - np.floor();
            (np, frac * (1.0 - frac))
        }
        CopyStatsQuery::Tournament2 { n, r } => {
            let (n, r) = (n as f64, r as f64);
            ((2.0 * r - 1.0) / n, (2.0 * r - 1.0) * (n * n - 2.0 * r + 1.0) / n.powi(3))
        }
        CopyStatsQuery::RankRoulette { n, r } => {
            let (n, r) = (n as f64, r as f64);
            (2.0 * r / (n + 1.0), 2.0 * r * (n * n - 2.0 * r + n) / (n.powi(3) + 2.0 * n * n + n))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopyStatsReport {
    pub rounds: usize,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
    pub analytic_mean: f64,
    pub analytic_variance: f64,
}

impl CopyStatsReport {
    pub fn passed(&self, k_se: f64) -> bool {
        (self.mean - self.analytic_mean).abs() <= k_se * self.mean_se + 1e-12
            && (self.variance - self.analytic_variance).abs() <= k_se * self.variance_se + 1e-12
    }
}

/// Population (index 0 is the tracked individual) and selection realizing `q`.
fn copy_stats_setup(q: CopyStatsQuery) -> Result<(Population<f64>, Selection, usize)> {
    q.validate()?;
    let n = q.n();
    let members: Vec<Genotype<f64>> = (0..n).map(|i| Genotype::Permutation(vec![i])).collect();
    let share = |p: f64| -> Vec<f64> { (0..n).map(|i| if i == 0 { p } else { (1.0 - p) / (n - 1) as f64 }).collect() };
    let (fitness, selection, tracked) = match q {
        CopyStatsQuery::Roulette { p, .. } => (share(p), Selection::Roulette, 0),
        CopyStatsQuery::Sus { np, .. } => (share(np / n as f64), Selection::Sus, 0),
        CopyStatsQuery::Tournament2 { r, .. } => {
            ((1..=n).map(|v| v as f64).collect(), Selection::Tournament { size: 2 }, r - 1)
        }
        CopyStatsQuery::RankRoulette { r, .. } => {
            ((1..=n).map(|v| v as f64).collect(), Selection::Ranking { alpha: rank_roulette_alpha(n) }, r - 1)
        }
    };
    Ok((Population::with_fitness(members, fitness)?, selection, tracked))
}

/// Per-round copy counts of the tracked individual.
pub fn sample_copy_counts(q: CopyStatsQuery, rounds: usize, seed: u64) -> Result<Vec<usize>> {
    let (pop, selection, tracked) = copy_stats_setup(q)?;
    let mut rng = seeded(seed);
    (0..rounds)
        .map(|_| Ok(select_parents(&pop, &selection, pop.len(), &mut rng)?.iter().filter(|&&i| i == tracked).count()))
        .collect()
}

pub fn empirical_copy_stats(q: CopyStatsQuery, rounds: usize, seed: u64) -> Result<CopyStatsReport> {
    let (analytic_mean, analytic_variance) = analytic_copy_stats(q)?;
    let counts: Vec<f64> = sample_copy_counts(q, rounds, seed)?.into_iter().map(|c| c as f64).collect();
    let s = Summary::of(&counts);
    Ok(CopyStatsReport {
        rounds,
        mean: s.mean,
        mean_se: s.std_error,
        variance: s.variance,
        variance_se: Summary::variance_std_error(&counts),
        analytic_mean,
        analytic_variance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SusReport {
    /// Every count was `⌊Np⌋` or `⌈Np⌉` for its individual.
    pub confined: bool,
    /// Frequency of `⌈Np⌉` against `{Np}`, per individual with fractional `Np`.
    pub ceil_checks: Vec<ProportionCheck>,
    /// Empirical count variance per individual with its standard error.
    pub variances: Vec<(f64, f64)>,
}

impl SusReport {
    pub fn passed(&self, k_se: f64) -> bool {
        self.confined
            && self.ceil_checks.iter().all(|c| c.within(k_se))
            && self.variances.iter().all(|&(v, se)| v <= 0.25 + k_se * se)
    }
}

/// Runs `rounds` SUS rounds of size `N = fitness.len()`.
pub fn verify_sus(fitness: &[f64], rounds: usize, seed: u64) -> Result<SusReport> {
    let n = fitness.len();
    let total: f64 = fitness.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroFitnessSum);
    }
    let members: Vec<Genotype<f64>> = (0..n).map(|i| Genotype::Permutation(vec![i])).collect();
    let pop = Population::with_fitness(members, fitness.to_vec())?;
    let np: Vec<f64> = fitness.iter().map(|f| n as f64 * f / total).collect();
    let mut rng = seeded(seed);
    let mut counts = vec![Vec::with_capacity(rounds); n];
    for _ in 0..rounds {
        let mut c = vec![0usize; n];
        for i in select_parents(&pop, &Selection::Sus, n, &mut rng)? {
            c[i] += 1;
        }
        for (i, v) in c.into_iter().enumerate() {
            counts[i].push(v);
        }
    }
    // tolerate counts at an integer Np that rounding placed on either side
    let eps = 1e-9;
    let confined = (0..n).all(|i| {
        let (lo, hi) = ((np[i] + eps).floor() as usize, (np[i] - eps).ceil() as usize);
        counts[i].iter().all(|&c| c == lo.min(hi) || c == hi.max(lo))
    });
    let mut ceil_checks = Vec::new();
    let mut variances = Vec::new();
    for i in 0..n {
        let frac = np[i] - np[i].floor();
        if frac > eps && frac < 1.0 - eps {
            let hi = np[i].ceil() as usize;
            ceil_checks.push(ProportionCheck::new(counts[i].iter().filter(|&&c| c == hi).count(), rounds, frac));
        }
        let xs: Vec<f64> = counts[i].iter().map(|&c| c as f64).collect();
        variances.push((Summary::of(&xs).variance, Summary::variance_std_error(&xs)));
    }
    Ok(SusReport { confined, ceil_checks, variances })
}

/// Probability that the individual of rank `r` wins a tournament of `s`
/// uniform draws with replacement: `(r/N)^s − ((r−1)/N)^s`, for `r = 1..=N`.
pub fn tournament_pmf(n: usize, s: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n).map(|r| (r as f64 / nf).powi(s as i32) - ((r - 1) as f64 / nf).powi(s as i32)).collect()
}

/// Frequency of each rank winning among `draws` tournaments, checked against
/// [`tournament_pmf`]. Entry `r − 1` belongs to rank `r`.
pub fn verify_tournament_pmf(n: usize, s: usize, draws: usize, seed: u64) -> Result<Vec<ProportionCheck>> {
    if n == 0 || s == 0 {
        return Err(invalid("tournament needs N >= 1 and s >= 1"));
    }
    let members: Vec<Genotype<f64>> = (0..n).map(|i| Genotype::Permutation(vec![i])).collect();
    let pop = Population::with_fitness(members, (1..=n).map(|v| v as f64).collect())?;
    let mut hits = vec![0usize; n];
    for i in select_parents(&pop, &Selection::Tournament { size: s }, draws, &mut seeded(seed))? {
        hits[i] += 1;
    }
    Ok(tournament_pmf(n, s).into_iter().zip(hits).map(|(p, h)| ProportionCheck::new(h, draws, p)).collect())
}

/// Inputs of the GA sizing rule under which a tournament GA finds a local
/// optimum about as fast as a local search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaLsParams {
    /// Number of non-optimal objective values.
    pub h: f64,
    /// Least probability that mutation turns a string into a given neighbor.
    pub l_min: f64,
    /// Least probability that crossover leaves a parent's quality intact.
    pub eps: f64,
    /// Tournament size as a fraction of the population.
    pub r: f64,
}

impl GaLsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 1.0) || !(self.l_min > 0.0) || !(self.eps > 0.0 && self.eps <= 1.0) || !(self.r > 0.0) {
            return Err(invalid(format!("need h > 1, L > 0, 0 < eps <= 1, r > 0; got {self:?}")));
        }
        Ok(())
    }
}

/// `N = 2⌈(1 + ln h)/(L ε (1 − e^{−2r}))⌉` and `s = ⌈rN⌉`.
pub fn ga_ls_parameters(p: GaLsParams) -> Result<(usize, usize)> {
    p.validate()?;
    let half = ((1.0 + p.h.ln()) / (p.l_min * p.eps * (1.0 - (-2.0 * p.r).exp()))).ceil();
    let n = 2 * half as usize;
    let s = (p.r * n as f64).ceil() as usize;
    Ok((n, s))
}

/// One run of the tournament GA on OneMax with single-bit-flip mutation and
/// one-point crossover; returns the first iteration at which the optimum is
/// in the population, if within `max_iter`.
pub fn ga_ls_first_hit(l: usize, n: usize, s: usize, p_c: f64, max_iter: usize, seed: u64) -> Result<Option<usize>> {
    let problem = OneMax::new(l);
    let suite = OperatorSuite::<f64>::new(Selection::Tournament { size: s }, CrossoverKind::OnePoint, p_c, MutationKind::SingleFlip, 1.0);
    let strategy = StrategyConfig::new(StrategyKind::FullReplacement, n);
    let term = Termination::new(Some(max_iter), None, Some(l as f64))?;
    Ok(run_ea(&problem, &strategy, &suite, &term, seed)?.first_hit_iteration)
}

/// Verdicts of the convergence audit. Selection and reproduction verdicts are
/// Monte Carlo (a property is reported when every required event was observed
/// at least once); survival verdicts are exact because the supported survival
/// rules are deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub populations: usize,
    pub samples: usize,
    pub selection_non_degenerate: bool,
    pub reproduce_positive: bool,
    pub reproduce_connecting: bool,
    pub survival_conservative: bool,
    pub survival_non_degenerate: bool,
    pub monte_carlo: bool,
}

// Multisets of size n over 0..m as sorted index vectors.
fn multisets(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, n: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in from..m {
            cur.push(v);
            go(m, n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

fn index_of(x: &[bool]) -> usize {
    x.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// Classifies selection, reproduction and survival of a GA on a binary
/// problem with `l ≤ 4` and `N ≤ 4` by enumerating every population.
/// `samples` draws are taken per population for the stochastic operators.
/// Survival must be full replacement or elitist.
pub fn ea_convergence_audit<S, P>(
    problem: &P,
    suite: &OperatorSuite<S>,
    survival: StrategyKind,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<AuditReport>
where
    S: Scalar,
    P: Problem<S>,
{
    let l = problem.dimension();
    if problem.kind() != crate::engine::GenotypeKind::Binary {
        return Err(invalid("the audit enumerates binary genotypes"));
    }
    if l > 4 || !(2..=4).contains(&n) || n % 2 == 1 {
        return Err(Error::TooLarge(format!("audit needs l <= 4 and even N in 2..=4, got l = {l}, N = {n}")));
    }
    if !matches!(survival, StrategyKind::FullReplacement | StrategyKind::Elitist) {
        return Err(invalid("audit supports full replacement and elitist survival"));
    }
    suite.validate(problem.kind(), l)?;
    let space: Vec<Genotype<S>> = all_bit_strings(l).map(Genotype::Binary).collect();
    let m = space.len();
    let values: Vec<S> = space.iter().map(|g| problem.objective(g)).collect();
    let best = values.iter().copied().fold(S::neg_infinity(), S::max);
    let optimal: Vec<bool> = values.iter().map(|&v| v == best).collect();
    let pops = multisets(m, n);
    let make = |idx: &[usize]| Population::evaluate(problem, idx.iter().map(|&i| space[i].clone()).collect(), 0);

    let mut selection_ok = true;
    // reach[p] = genotypes produced from parent multiset p
    let mut reach: Vec<BTreeSet<usize>> = Vec::with_capacity(pops.len());
    for (k, idx) in pops.iter().enumerate() {
        let pop = make(idx);
        let mut rng = stream(seed, k as u64);
        let mut chosen = HashSet::new();
        let mut produced = BTreeSet::new();
        for _ in 0..samples {
            for i in select_parents(&pop, &suite.selection, n, &mut rng)? {
                chosen.insert(idx[i]);
            }
            let mut order = idx.clone();
            order.shuffle(&mut rng);
            for pair in order.chunks(2) {
                let (a, b) = suite.reproduce_pair(&space[pair[0]], &space[pair[1]], &mut rng)?;
                produced.insert(index_of(a.as_binary()?));
                produced.insert(index_of(b.as_binary()?));
            }
        }
        selection_ok &= idx.iter().all(|i| chosen.contains(i));
        reach.push(produced);
    }
    let positive = reach.iter().all(|r| r.len() == m);

    // step[η] = genotypes reached from every parent multiset containing η
    let mut step: Vec<BTreeSet<usize>> = vec![(0..m).collect(); m];
    for (idx, r) in pops.iter().zip(&reach) {
        for &eta in idx {
            step[eta] = step[eta].intersection(r).copied().collect();
        }
    }
    let connecting = (0..m).all(|start| {
        let mut seen = vec![false; m];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            if optimal[v] {
                return true;
            }
            for &w in &step[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    });

    let mut conservative = true;
    let mut survival_non_degenerate = true;
    for old in &pops {
        let parent = make(old);
        for new in &pops {
            let children = make(new);
            let before = parent.max_objective().max(children.max_objective());
            let kept = match survival {
                StrategyKind::Elitist => survive_elitist(problem, &parent, children)?,
                _ => children,
            };
            conservative &= kept.max_objective() >= before;
            let survivors: HashSet<usize> = kept.members().iter().map(|g| index_of(g.as_binary().expect("binary"))).collect();
            survival_non_degenerate &= new.iter().all(|i| survivors.contains(i));
        }
    }

    Ok(AuditReport {
        populations: pops.len(),
        samples,
        selection_non_degenerate: selection_ok,
        reproduce_positive: positive,
        reproduce_connecting: connecting,
        survival_conservative: conservative,
        survival_non_degenerate,
        monte_carlo: true,
    })
}
