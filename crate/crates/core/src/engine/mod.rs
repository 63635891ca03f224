//! The generic evolutionary loop: initialisation, generation steps composed of
//! selection, reproduction and survival, termination and best-so-far tracking.

mod genotype;
mod population;
mod problem;
mod run;

pub use genotype::{Genotype, GenotypeKind};
pub use population::{best_of, init_population, Population};
pub use problem::{random_bits, random_permutation, FitnessScaling, Problem};
pub use run::{run_ea, Incumbent, RunRecord, Termination, TrajectoryPoint};
