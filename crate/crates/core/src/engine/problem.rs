use rand::seq::SliceRandom;
use rand::Rng;

use super::{Genotype, GenotypeKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How cached fitness values are derived from raw objective values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitnessScaling {
    /// Fitness equals the objective, which must be non-negative.
    #[default]
    Identity,
    /// Per-population window `(f - f_min) / (f_avg - f_min)`, and 1 for every
    /// member when `f_avg = f_min`. Used by objectives of either sign.
    Window,
}

/// An optimisation problem in maximisation form.
///
/// `objective` must be deterministic. With [`FitnessScaling::Identity`] it is
/// the fitness itself and must be non-negative.
pub trait Problem<S: Scalar>: Sync {
    type Phenotype;

    fn kind(&self) -> GenotypeKind;

    /// Genotype length `l` (binary), `n` (permutation, real). Ignored for trees.
    fn dimension(&self) -> usize;

    fn decode(&self, genotype: &Genotype<S>) -> Self::Phenotype;

    fn objective(&self, genotype: &Genotype<S>) -> S;

    fn scaling(&self) -> FitnessScaling {
        FitnessScaling::Identity
    }

    /// Known optimal objective value, if any.
    fn optimum_value(&self) -> Option<S> {
        None
    }

    /// Uniform random genotype. Binary and permutation problems get fair coin
    /// bits and a uniform permutation; real and tree problems must override.
    fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Genotype<S> {
        match self.kind() {
            GenotypeKind::Binary => Genotype::Binary(random_bits(self.dimension(), rng)),
            GenotypeKind::Permutation => Genotype::Permutation(random_permutation(self.dimension(), rng)),
            kind => panic!("problems over {} genotypes must provide random_genotype", kind.name()),
        }
    }

    /// Checks kind and length of a genotype against this problem.
    fn validate(&self, genotype: &Genotype<S>) -> Result<()> {
        if genotype.kind() != self.kind() {
            return Err(Error::IncompatibleGenotype {
                expected: self.kind().name(),
                found: genotype.kind().name(),
            });
        }
        if self.kind() != GenotypeKind::Tree && genotype.len() != self.dimension() {
            return Err(Error::LengthMismatch { expected: self.dimension(), found: genotype.len() });
        }
        Ok(())
    }
}

/// `l` i.i.d. fair bits.
pub fn random_bits<R: Rng + ?Sized>(l: usize, rng: &mut R) -> Vec<bool> {
    (0..l).map(|_| rng.random::<bool>()).collect()
}

/// Uniform random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
