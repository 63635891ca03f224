//! Evolutionary algorithms over binary, permutation, integer, real and
//! expression-tree genotypes, with the analytic tools used to reason about
//! them: schema bounds, degeneration probabilities, selection copy
//! statistics, optimal recombination on graphs and tabu search.
//!
//! The engine is generic over the fitness scalar (`f32` or `f64`); the
//! `*64` aliases below fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod encoding;
pub mod engine;
pub mod error;
pub mod gp;
pub mod graph;
pub mod localsearch;
pub mod optrec;
pub mod problems;
pub mod rng;
pub mod scalar;
pub mod selection;
pub mod stats;
pub mod strategies;
pub mod theory;
pub mod variation;

pub use engine::{run_ea, Genotype, Population, Problem, RunRecord, Termination};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use strategies::{StrategyConfig, StrategyKind};
pub use variation::OperatorSuite;

pub type Genotype64 = Genotype<f64>;
pub type Population64 = Population<f64>;
pub type RunRecord64 = RunRecord<f64>;
pub type Termination64 = Termination<f64>;
pub type OperatorSuite64 = OperatorSuite<f64>;

pub type Genotype32 = Genotype<f32>;
pub type Population32 = Population<f32>;
pub type RunRecord32 = RunRecord<f32>;
