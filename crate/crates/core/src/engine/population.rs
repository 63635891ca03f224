use std::collections::HashSet;

use rand::Rng;

use super::{FitnessScaling, Genotype, Problem};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Fixed-size ordered collection of genotypes with cached objective and
/// fitness values.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<S> {
    members: Vec<Genotype<S>>,
    objective: Vec<S>,
    fitness: Vec<S>,
    generation: usize,
}

impl<S: Scalar> Population<S> {
    /// Evaluates every member with `problem`.
    pub fn evaluate<P: Problem<S>>(problem: &P, members: Vec<Genotype<S>>, generation: usize) -> Self {
        let objective: Vec<S> = members.iter().map(|g| problem.objective(g)).collect();
        let fitness = scale(problem.scaling(), &objective);
        Population { members, objective, fitness, generation }
    }

    /// Members scored externally; objective and fitness coincide.
    pub fn with_fitness(members: Vec<Genotype<S>>, fitness: Vec<S>) -> Result<Self> {
        if members.len() != fitness.len() {
            return Err(Error::LengthMismatch { expected: members.len(), found: fitness.len() });
        }
        if fitness.iter().any(|f| !(*f >= S::zero())) {
            return Err(invalid("fitness values must be non-negative"));
        }
        Ok(Population { members, objective: fitness.clone(), fitness, generation: 0 })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Genotype<S>] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Genotype<S> {
        &self.members[i]
    }

    /// Raw objective values, comparable across generations.
    pub fn objective(&self) -> &[S] {
        &self.objective
    }

    /// Non-negative selection fitness Φ.
    pub fn fitness(&self) -> &[S] {
        &self.fitness
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn set_generation(&mut self, generation: usize) {
        self.generation = generation;
    }

    pub fn into_members(self) -> Vec<Genotype<S>> {
        self.members
    }

    pub fn total_fitness(&self) -> S {
        self.fitness.iter().copied().sum()
    }

    pub fn mean_objective(&self) -> S {
        self.objective.iter().copied().sum::<S>() / S::from_usize_lossy(self.len().max(1))
    }

    pub fn max_objective(&self) -> S {
        self.objective.iter().copied().fold(S::neg_infinity(), S::max)
    }

    pub fn distinct_count(&self) -> usize {
        self.members.iter().map(|g| g.to_string()).collect::<HashSet<_>>().len()
    }

    /// Builds the population that replaces slot-wise members, re-evaluating the
    /// fitness window when the problem uses one.
    pub(crate) fn from_scored<P: Problem<S>>(
        problem: &P,
        members: Vec<Genotype<S>>,
        objective: Vec<S>,
        generation: usize,
    ) -> Self {
        let fitness = scale(problem.scaling(), &objective);
        Population { members, objective, fitness, generation }
    }

    /// Recomputes every cached value from scratch.
    pub fn recomputed<P: Problem<S>>(&self, problem: &P) -> Self {
        Population::evaluate(problem, self.members.clone(), self.generation)
    }
}

fn scale<S: Scalar>(scaling: FitnessScaling, objective: &[S]) -> Vec<S> {
    match scaling {
        FitnessScaling::Identity => objective.to_vec(),
        FitnessScaling::Window => {
            if objective.is_empty() {
                return Vec::new();
            }
            let min = objective.iter().copied().fold(S::infinity(), S::min);
            let avg = objective.iter().copied().sum::<S>() / S::from_usize_lossy(objective.len());
            if avg <= min {
                vec![S::one(); objective.len()]
            } else {
                objective.iter().map(|&f| (f - min) / (avg - min)).collect()
            }
        }
    }
}

/// Random initial population of `n` members.
pub fn init_population<S, P, R>(problem: &P, n: usize, rng: &mut R) -> Result<Population<S>>
where
    S: Scalar,
    P: Problem<S>,
    R: Rng + ?Sized,
{
    if n == 0 {
        return Err(invalid("population size must be at least 1"));
    }
    let members = (0..n).map(|_| problem.random_genotype(rng)).collect();
    Ok(Population::evaluate(problem, members, 0))
}

/// Member of maximal objective; ties go to the lowest index.
pub fn best_of<S: Scalar>(pop: &Population<S>) -> Result<(usize, &Genotype<S>, S)> {
    let mut best: Option<usize> = None;
    for (i, &f) in pop.objective().iter().enumerate() {
        if best.is_none_or(|b| f > pop.objective()[b]) {
            best = Some(i);
        }
    }
    let i = best.ok_or(Error::EmptyPopulation)?;
    Ok((i, pop.member(i), pop.objective()[i]))
}
