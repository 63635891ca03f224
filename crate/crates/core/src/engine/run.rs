use super::{best_of, init_population, Genotype, Population, Problem};
use crate::error::{invalid, Result};
use crate::rng::seeded;
use crate::scalar::Scalar;
use crate::strategies::{self, StrategyConfig};
use crate::variation::OperatorSuite;

/// Stopping rule. At least one bound must be set.
#[derive(Debug, Clone, PartialEq)]
pub struct Termination<S> {
    pub max_iterations: Option<usize>,
    pub max_stagnation: Option<usize>,
    pub target_fitness: Option<S>,
}

impl<S: Scalar> Termination<S> {
    pub fn new(max_iterations: Option<usize>, max_stagnation: Option<usize>, target_fitness: Option<S>) -> Result<Self> {
        if max_iterations.is_none() && max_stagnation.is_none() && target_fitness.is_none() {
            return Err(invalid("termination needs at least one bound"));
        }
        Ok(Termination { max_iterations, max_stagnation, target_fitness })
    }

    pub fn iterations(max_iterations: usize) -> Self {
        Termination { max_iterations: Some(max_iterations), max_stagnation: None, target_fitness: None }
    }

    pub fn with_target(mut self, target: S) -> Self {
        self.target_fitness = Some(target);
        self
    }

    /// `t` completed generations, best-so-far `best`, `stagnation` generations
    /// without improvement.
    pub fn should_stop(&self, t: usize, best: S, stagnation: usize) -> bool {
        self.max_iterations.is_some_and(|m| t >= m)
            || self.target_fitness.is_some_and(|f| best >= f)
            || self.max_stagnation.is_some_and(|k| stagnation >= k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<S> {
    pub t: usize,
    /// Running maximum of every objective value evaluated so far.
    pub best_fitness: S,
    pub mean_fitness: S,
    pub distinct_genotypes: usize,
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<S> {
    pub trajectory: Vec<TrajectoryPoint<S>>,
    pub incumbent: Genotype<S>,
    pub incumbent_fitness: S,
    pub seed: u64,
    /// First iteration whose best-so-far reached the target (or the known optimum).
    pub first_hit_iteration: Option<usize>,
}

impl<S: Scalar> RunRecord<S> {
    pub fn best_trace(&self) -> impl Iterator<Item = S> + '_ {
        self.trajectory.iter().map(|p| p.best_fitness)
    }

    pub fn is_monotone(&self) -> bool {
        self.trajectory.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness)
    }
}

/// Best-so-far bookkeeping shared by population methods and trajectory searches.
#[derive(Debug, Clone)]
pub struct Incumbent<S> {
    genotype: Option<Genotype<S>>,
    value: S,
    target: Option<S>,
    first_hit: Option<usize>,
}

impl<S: Scalar> Incumbent<S> {
    pub fn new(target: Option<S>) -> Self {
        Incumbent { genotype: None, value: S::neg_infinity(), target, first_hit: None }
    }

    /// Records a candidate; returns true on strict improvement.
    pub fn observe(&mut self, genotype: &Genotype<S>, value: S, t: usize) -> bool {
        let improved = self.genotype.is_none() || value > self.value;
        if improved {
            self.genotype = Some(genotype.clone());
            self.value = value;
        }
        if self.first_hit.is_none() && self.target.is_some_and(|f| self.value >= f) {
            self.first_hit = Some(t);
        }
        improved
    }

    pub fn observe_population(&mut self, pop: &Population<S>, t: usize) -> bool {
        match best_of(pop) {
            Ok((_, g, v)) => self.observe(g, v, t),
            Err(_) => false,
        }
    }

    pub fn value(&self) -> S {
        self.value
    }

    pub fn genotype(&self) -> Option<&Genotype<S>> {
        self.genotype.as_ref()
    }

    pub fn first_hit(&self) -> Option<usize> {
        self.first_hit
    }

    pub fn into_record(self, trajectory: Vec<TrajectoryPoint<S>>, seed: u64) -> Option<RunRecord<S>> {
        Some(RunRecord {
            trajectory,
            incumbent: self.genotype?,
            incumbent_fitness: self.value,
            seed,
            first_hit_iteration: self.first_hit,
        })
    }
}

/// Runs `Π(t+1) = Survive(Π(t), Reproduce(Select(Π(t))))` from a random
/// initial population until `term` holds.
pub fn run_ea<S, P>(
    problem: &P,
    strategy: &StrategyConfig,
    suite: &OperatorSuite<S>,
    term: &Termination<S>,
    seed: u64,
) -> Result<RunRecord<S>>
where
    S: Scalar,
    P: Problem<S>,
{
    strategies::validate(strategy, suite, problem)?;
    let mut rng = seeded(seed);
    let mut pop = init_population(problem, strategy.population_size(), &mut rng)?;
    let mut incumbent = Incumbent::new(term.target_fitness.or(problem.optimum_value()));
    incumbent.observe_population(&pop, 0);
    let mut trajectory = vec![point(&pop, &incumbent, 0)];
    let mut t = 0;
    let mut stagnation = 0;
    while !term.should_stop(t, incumbent.value(), stagnation) {
        pop = strategies::step(problem, &pop, strategy, suite, &mut rng)?;
        t += 1;
        pop.set_generation(t);
        if incumbent.observe_population(&pop, t) {
            stagnation = 0;
        } else {
            stagnation += 1;
        }
        trajectory.push(point(&pop, &incumbent, t));
    }
    Ok(incumbent.into_record(trajectory, seed).expect("population is non-empty"))
}

fn point<S: Scalar>(pop: &Population<S>, inc: &Incumbent<S>, t: usize) -> TrajectoryPoint<S> {
    TrajectoryPoint {
        t,
        best_fitness: inc.value(),
        mean_fitness: pop.mean_objective(),
        distinct_genotypes: pop.distinct_count(),
    }
}
