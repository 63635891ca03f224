//! Generation transitions: full replacement, elitist, steady state, elitist
//! recombination, and the `(μ,λ)` / `(μ+λ)` evolution strategies.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{best_of, Genotype, Population, Problem};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::selection::select_parents;
use crate::variation::OperatorSuite;

pub use crate::variation::gaussian_mutate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    FullReplacement,
    Elitist,
    SteadyState,
    ElitistRecombination,
    EsComma,
    EsPlus,
}

/// Which member a steady-state child replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VictimPolicy {
    #[default]
    Worst,
    /// Uniform among members below the population mean; the worst member when
    /// none is below the mean.
    UniformBelowMean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// Population size `N`, or `μ` for the evolution strategies.
    pub size: usize,
    /// Offspring per generation of the evolution strategies.
    pub lambda: usize,
    pub victim: VictimPolicy,
    pub reject_duplicates: bool,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind, size: usize) -> Self {
        StrategyConfig { kind, size, lambda: size, victim: VictimPolicy::Worst, reject_duplicates: true }
    }

    pub fn es(plus: bool, mu: usize, lambda: usize) -> Self {
        let kind = if plus { StrategyKind::EsPlus } else { StrategyKind::EsComma };
        StrategyConfig { lambda, ..StrategyConfig::new(kind, mu) }
    }

    pub fn population_size(&self) -> usize {
        self.size
    }

    pub fn validate(&self) -> Result<()> {
        use StrategyKind::*;
        if self.size == 0 {
            return Err(invalid("population size must be at least 1"));
        }
        match self.kind {
            FullReplacement | Elitist | ElitistRecombination if self.size % 2 == 1 => Err(Error::OddPopulation(self.size)),
            SteadyState if self.size < 2 => Err(invalid("steady state needs N >= 2")),
            EsComma | EsPlus if self.lambda == 0 => Err(invalid("lambda must be at least 1")),
            EsComma if self.size > self.lambda => {
                Err(invalid(format!("mu = {} exceeds lambda = {}", self.size, self.lambda)))
            }
            _ => Ok(()),
        }
    }
}

/// Checks the strategy, the suite and their fit to the problem's genotypes.
pub fn validate<S: Scalar, P: Problem<S>>(strategy: &StrategyConfig, suite: &OperatorSuite<S>, problem: &P) -> Result<()> {
    strategy.validate()?;
    suite.selection.validate(strategy.size)?;
    suite.validate(problem.kind(), problem.dimension())
}

/// One generation of the configured strategy.
pub fn step<S, P, R>(
    problem: &P,
    pop: &Population<S>,
    strategy: &StrategyConfig,
    suite: &OperatorSuite<S>,
    rng: &mut R,
) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    match strategy.kind {
        StrategyKind::FullReplacement => step_full_replacement(problem, pop, suite, rng),
        StrategyKind::Elitist => step_elitist(problem, pop, suite, rng),
        StrategyKind::SteadyState => step_steady_state(problem, pop, strategy, suite, rng),
        StrategyKind::ElitistRecombination => step_elitist_recombination(problem, pop, suite, rng),
        StrategyKind::EsComma | StrategyKind::EsPlus => step_es(problem, pop, strategy, suite, rng),
    }
}

/// `N/2` rounds of (select two parents, cross, mutate both): exactly `N` children.
pub fn kga_offspring<S, P, R>(problem: &P, pop: &Population<S>, suite: &OperatorSuite<S>, rng: &mut R) -> Result<Vec<Genotype<S>>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    let n = pop.len();
    if n % 2 == 1 {
        return Err(Error::OddPopulation(n));
    }
    let parents = select_parents(pop, &suite.selection, n, rng)?;
    let mut children = Vec::with_capacity(n);
    for pair in parents.chunks(2) {
        let (a, b) = suite.reproduce_pair(pop.member(pair[0]), pop.member(pair[1]), rng)?;
        children.push(a);
        children.push(b);
    }
    debug_assert!(children.iter().all(|c| problem.validate(c).is_ok()));
    Ok(children)
}

pub fn step_full_replacement<S, P, R>(problem: &P, pop: &Population<S>, suite: &OperatorSuite<S>, rng: &mut R) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    let children = kga_offspring(problem, pop, suite, rng)?;
    Ok(Population::evaluate(problem, children, pop.generation() + 1))
}

/// Full replacement, except that when every child is strictly worse than the
/// previous best member, that member replaces the worst child (lowest index
/// among ties).
pub fn step_elitist<S, P, R>(problem: &P, pop: &Population<S>, suite: &OperatorSuite<S>, rng: &mut R) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    let next = step_full_replacement(problem, pop, suite, rng)?;
    survive_elitist(problem, pop, next)
}

/// Survival rule of the elitist strategy applied to an evaluated generation
/// of children.
pub fn survive_elitist<S: Scalar, P: Problem<S>>(problem: &P, pop: &Population<S>, next: Population<S>) -> Result<Population<S>> {
    let (_, elite, elite_value) = best_of(pop)?;
    if next.objective().iter().all(|&f| f < elite_value) {
        let worst = argmin(next.objective(), |_| true).expect("non-empty");
        let mut members = next.members().to_vec();
        let mut objective = next.objective().to_vec();
        members[worst] = elite.clone();
        objective[worst] = elite_value;
        return Ok(Population::from_scored(problem, members, objective, next.generation()));
    }
    Ok(next)
}

// Lowest-index minimum among slots accepted by `keep`.
fn argmin<S: Scalar>(values: &[S], keep: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if keep(i) && best.is_none_or(|b| v < values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Two parents produce two children; each child replaces a victim chosen per
/// the policy among slots not yet replaced in this step. With
/// `reject_duplicates`, a child identical to a current member is discarded.
pub fn step_steady_state<S, P, R>(
    problem: &P,
    pop: &Population<S>,
    strategy: &StrategyConfig,
    suite: &OperatorSuite<S>,
    rng: &mut R,
) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    let parents = select_parents(pop, &suite.selection, 2, rng)?;
    let (c1, c2) = suite.reproduce_pair(pop.member(parents[0]), pop.member(parents[1]), rng)?;
    let mut members = pop.members().to_vec();
    let mut objective = pop.objective().to_vec();
    let mean = pop.mean_objective();
    let mut replaced = vec![false; members.len()];
    for child in [c1, c2] {
        if strategy.reject_duplicates && members.contains(&child) {
            continue;
        }
        let victim = match strategy.victim {
            VictimPolicy::Worst => argmin(&objective, |i| !replaced[i]),
            VictimPolicy::UniformBelowMean => {
                let below: Vec<usize> = (0..members.len()).filter(|&i| !replaced[i] && objective[i] < mean).collect();
                if below.is_empty() {
                    argmin(&objective, |i| !replaced[i])
                } else {
                    Some(below[rng.random_range(0..below.len())])
                }
            }
        };
        let Some(v) = victim else { break };
        objective[v] = problem.objective(&child);
        members[v] = child;
        replaced[v] = true;
    }
    Ok(Population::from_scored(problem, members, objective, pop.generation() + 1))
}

/// Random pairing of the population; every family of two parents and their
/// two children passes on its best two (parents first among ties) into the
/// parents' slots.
pub fn step_elitist_recombination<S, P, R>(
    problem: &P,
    pop: &Population<S>,
    suite: &OperatorSuite<S>,
    rng: &mut R,
) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    let n = pop.len();
    if n % 2 == 1 {
        return Err(Error::OddPopulation(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut members = pop.members().to_vec();
    let mut objective = pop.objective().to_vec();
    for pair in order.chunks(2) {
        let (i, j) = (pair[0], pair[1]);
        let (c1, c2) = suite.reproduce_pair(pop.member(i), pop.member(j), rng)?;
        let (f1, f2) = (problem.objective(&c1), problem.objective(&c2));
        let mut family = vec![
            (pop.member(i).clone(), pop.objective()[i]),
            (pop.member(j).clone(), pop.objective()[j]),
            (c1, f1),
            (c2, f2),
        ];
        family.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let mut winners = family.into_iter();
        for slot in [i, j] {
            let (g, f) = winners.next().expect("family of four");
            members[slot] = g;
            objective[slot] = f;
        }
    }
    Ok(Population::from_scored(problem, members, objective, pop.generation() + 1))
}

/// `λ` mutants of uniformly drawn parents, truncated to the best `μ` slots of
/// the mutants (comma) or of parents followed by mutants (plus); ties keep the
/// earlier slot.
pub fn step_es<S, P, R>(
    problem: &P,
    pop: &Population<S>,
    strategy: &StrategyConfig,
    suite: &OperatorSuite<S>,
    rng: &mut R,
) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    let mu = pop.len();
    if mu == 0 {
        return Err(Error::EmptyPopulation);
    }
    let plus = strategy.kind == StrategyKind::EsPlus;
    if !plus && mu > strategy.lambda {
        return Err(invalid(format!("mu = {mu} exceeds lambda = {}", strategy.lambda)));
    }
    let mut candidates: Vec<(Genotype<S>, S)> = Vec::with_capacity(strategy.lambda + mu);
    if plus {
        candidates.extend(pop.members().iter().cloned().zip(pop.objective().iter().copied()));
    }
    for _ in 0..strategy.lambda {
        let u = rng.random_range(0..mu);
        let child = suite.mutate(pop.member(u), rng)?;
        let f = problem.objective(&child);
        candidates.push((child, f));
    }
    let survivors = truncate_best(candidates, mu);
    let (members, objective) = survivors.into_iter().unzip();
    Ok(Population::from_scored(problem, members, objective, pop.generation() + 1))
}

/// The `mu` best candidates by (objective descending, position ascending).
pub fn truncate_best<S: Scalar>(mut candidates: Vec<(Genotype<S>, S)>, mu: usize) -> Vec<(Genotype<S>, S)> {
    candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    candidates.truncate(mu);
    candidates
}
