//! Crossover and mutation for binary strings, permutations, real vectors and
//! expression trees.
//!
//! Positions passed to the `*_at` variants are zero-based, except cut points
//! `chi`, which count how many leading genes stay in place.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::engine::{Genotype, GenotypeKind};
use crate::error::{invalid, Error, Result};
use crate::gp::{self, GpConfig};
use crate::scalar::Scalar;
use crate::selection::Selection;

fn same_len<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

/// One-point crossover with the tails after the first `chi` genes swapped.
pub fn one_point_cross_at(x: &[bool], y: &[bool], chi: usize) -> Result<(Vec<bool>, Vec<bool>)> {
    same_len(x, y)?;
    if chi == 0 || chi >= x.len() {
        return Err(invalid(format!("cut {chi} outside 1..{}", x.len())));
    }
    let c1 = x[..chi].iter().chain(&y[chi..]).copied().collect();
    let c2 = y[..chi].iter().chain(&x[chi..]).copied().collect();
    Ok((c1, c2))
}

/// With probability `p_c` a one-point crossover at a uniform cut in `1..l`,
/// otherwise copies of the parents.
pub fn one_point_cross<R: Rng + ?Sized>(
    x: &[bool],
    y: &[bool],
    p_c: f64,
    rng: &mut R,
) -> Result<(Vec<bool>, Vec<bool>)> {
    same_len(x, y)?;
    if x.len() < 2 {
        return Err(invalid("one-point crossover needs l >= 2"));
    }
    if rng.random_bool(p_c) {
        let chi = rng.random_range(1..x.len());
        one_point_cross_at(x, y, chi)
    } else {
        Ok((x.to_vec(), y.to_vec()))
    }
}

/// First child takes `x_i` where the mask is set and `y_i` elsewhere; the
/// second child gets the complementary choice.
pub fn apply_mask(x: &[bool], y: &[bool], mask: &[bool]) -> Result<(Vec<bool>, Vec<bool>)> {
    same_len(x, y)?;
    same_len(x, mask)?;
    let c1 = mask.iter().zip(x.iter().zip(y)).map(|(&m, (&a, &b))| if m { a } else { b }).collect();
    let c2 = mask.iter().zip(x.iter().zip(y)).map(|(&m, (&a, &b))| if m { b } else { a }).collect();
    Ok((c1, c2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    Uniform,
    KPoint(usize),
}

/// Mask for `k` sorted one-based cuts in `1..l`: `m_i = 1` iff the number of
/// cuts below `i` is even.
pub fn k_point_mask(l: usize, cuts: &[usize]) -> Result<Vec<bool>> {
    let mut sorted = cuts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cuts.len() || sorted.iter().any(|&c| c == 0 || c >= l) {
        return Err(invalid(format!("cuts must be distinct values in 1..{l}")));
    }
    Ok((1..=l).map(|i| sorted.iter().filter(|&&c| c < i).count() % 2 == 0).collect())
}

pub fn build_mask<R: Rng + ?Sized>(kind: MaskKind, l: usize, rng: &mut R) -> Result<Vec<bool>> {
    match kind {
        MaskKind::Uniform => Ok((0..l).map(|_| rng.random::<bool>()).collect()),
        MaskKind::KPoint(k) => {
            if k == 0 || k >= l {
                return Err(invalid(format!("k = {k} outside 1..{l}")));
            }
            let cuts: Vec<usize> = rand::seq::index::sample(rng, l - 1, k).into_iter().map(|c| c + 1).collect();
            k_point_mask(l, &cuts)
        }
    }
}

/// Flips each bit independently with probability `p_m`.
pub fn bernoulli_mutate<R: Rng + ?Sized>(x: &[bool], p_m: f64, rng: &mut R) -> Vec<bool> {
    x.iter().map(|&b| b ^ rng.random_bool(p_m)).collect()
}

/// Flips one uniformly chosen bit.
pub fn single_flip_mutate<R: Rng + ?Sized>(x: &[bool], rng: &mut R) -> Vec<bool> {
    let mut y = x.to_vec();
    if !y.is_empty() {
        let i = rng.random_range(0..y.len());
        y[i] = !y[i];
    }
    y
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn check_perms(x: &[usize], y: &[usize]) -> Result<()> {
    same_len(x, y)?;
    for p in [x, y] {
        if !is_permutation(p) {
            return Err(Error::NotAPermutation(p.len()));
        }
    }
    Ok(())
}

/// Partially mapped crossover exchanging positions `first..=last`.
pub fn pmx_cross_at(x: &[usize], y: &[usize], first: usize, last: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    check_perms(x, y)?;
    if first >= last || last >= x.len() {
        return Err(invalid(format!("segment {first}..={last} invalid for n = {}", x.len())));
    }
    Ok((pmx_child(x, y, first, last), pmx_child(y, x, first, last)))
}

// Child of `base` receiving `donor`'s segment. Genes of `base` outside the
// segment that clash are mapped donor -> base through the segment until free.
fn pmx_child(base: &[usize], donor: &[usize], first: usize, last: usize) -> Vec<usize> {
    let n = base.len();
    let mut in_segment = vec![false; n];
    let mut map = vec![usize::MAX; n];
    for i in first..=last {
        in_segment[donor[i]] = true;
        map[donor[i]] = base[i];
    }
    let mut child = base.to_vec();
    child[first..=last].copy_from_slice(&donor[first..=last]);
    for i in (0..first).chain(last + 1..n) {
        let mut v = base[i];
        let mut steps = 0;
        while in_segment[v] {
            v = map[v];
            steps += 1;
            assert!(steps <= n, "mapping chain must leave the segment");
        }
        child[i] = v;
    }
    child
}

/// PMX over a uniformly chosen segment of length at least 2.
pub fn pmx_cross<R: Rng + ?Sized>(x: &[usize], y: &[usize], rng: &mut R) -> Result<(Vec<usize>, Vec<usize>)> {
    if x.len() < 2 {
        return Err(invalid("PMX needs n >= 2"));
    }
    let (a, b) = distinct_pair(x.len(), rng);
    pmx_cross_at(x, y, a, b)
}

/// Order crossover: each child keeps its own first `chi` genes and takes the
/// rest in the other parent's relative order.
pub fn order_cross_at(x: &[usize], y: &[usize], chi: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    check_perms(x, y)?;
    if chi == 0 || chi >= x.len() {
        return Err(invalid(format!("cut {chi} outside 1..{}", x.len())));
    }
    Ok((order_child(x, y, chi), order_child(y, x, chi)))
}

fn order_child(keep: &[usize], order: &[usize], chi: usize) -> Vec<usize> {
    let mut used = vec![false; keep.len()];
    for &v in &keep[..chi] {
        used[v] = true;
    }
    keep[..chi].iter().copied().chain(order.iter().copied().filter(|&v| !used[v])).collect()
}

pub fn order_cross<R: Rng + ?Sized>(x: &[usize], y: &[usize], rng: &mut R) -> Result<(Vec<usize>, Vec<usize>)> {
    if x.len() < 2 {
        return Err(invalid("order crossover needs n >= 2"));
    }
    let chi = rng.random_range(1..x.len());
    order_cross_at(x, y, chi)
}

// Uniform pair a < b from 0..n.
fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

pub fn exchange_at(p: &[usize], i: usize, j: usize) -> Vec<usize> {
    let mut q = p.to_vec();
    q.swap(i, j);
    q
}

/// Moves the gene at `from` to position `to`, closing the gap.
pub fn shift_at(p: &[usize], from: usize, to: usize) -> Vec<usize> {
    let mut q = p.to_vec();
    let v = q.remove(from);
    q.insert(to, v);
    q
}

/// Reverses positions `a..=b`.
pub fn two_opt_at(p: &[usize], a: usize, b: usize) -> Vec<usize> {
    let mut q = p.to_vec();
    q[a..=b].reverse();
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermMutation {
    Exchange,
    Shift,
    TwoOpt,
}

/// Random permutation mutation. Two-opt reverses a segment of length
/// `2..=n-2`, so exactly two tour edges change.
pub fn perm_mutate<R: Rng + ?Sized>(p: &[usize], kind: PermMutation, rng: &mut R) -> Result<Vec<usize>> {
    let n = p.len();
    let min_n = if kind == PermMutation::TwoOpt { 4 } else { 2 };
    if n < min_n {
        return Err(invalid(format!("{kind:?} mutation needs n >= {min_n}")));
    }
    Ok(match kind {
        PermMutation::Exchange => {
            let (i, j) = distinct_pair(n, rng);
            exchange_at(p, i, j)
        }
        PermMutation::Shift => {
            let from = rng.random_range(0..n);
            let mut to = rng.random_range(0..n - 1);
            if to >= from {
                to += 1;
            }
            shift_at(p, from, to)
        }
        PermMutation::TwoOpt => loop {
            let (a, b) = distinct_pair(n, rng);
            if b - a < n - 2 {
                break two_opt_at(p, a, b);
            }
        },
    })
}

/// `x + Z` with `Z_i ~ N(0, sigma^2)` i.i.d.
pub fn gaussian_mutate<S: Scalar, R: Rng + ?Sized>(x: &[S], sigma: f64, rng: &mut R) -> Result<Vec<S>> {
    let normal = Normal::new(0.0, sigma).map_err(|_| invalid(format!("sigma = {sigma} must be positive")))?;
    if !(sigma > 0.0) {
        return Err(invalid(format!("sigma = {sigma} must be positive")));
    }
    Ok(x.iter().map(|&v| v + S::lit(normal.sample(rng))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CrossoverKind {
    OnePoint,
    Uniform,
    KPoint { k: usize },
    Pmx,
    Order,
    Subtree,
    None,
}

/// Mutation operators. Apart from `Bernoulli`, which flips each bit with
/// probability `p_m`, and `Gaussian`, which always perturbs, a mutation is
/// applied to each child with probability `p_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MutationKind {
    Bernoulli,
    SingleFlip,
    Exchange,
    Shift,
    TwoOpt,
    Gaussian { sigma: f64 },
    Subtree,
    None,
}

impl CrossoverKind {
    fn kind(self) -> Option<GenotypeKind> {
        match self {
            CrossoverKind::OnePoint | CrossoverKind::Uniform | CrossoverKind::KPoint { .. } => Some(GenotypeKind::Binary),
            CrossoverKind::Pmx | CrossoverKind::Order => Some(GenotypeKind::Permutation),
            CrossoverKind::Subtree => Some(GenotypeKind::Tree),
            CrossoverKind::None => None,
        }
    }
}

impl MutationKind {
    fn kind(self) -> Option<GenotypeKind> {
        match self {
            MutationKind::Bernoulli | MutationKind::SingleFlip => Some(GenotypeKind::Binary),
            MutationKind::Exchange | MutationKind::Shift | MutationKind::TwoOpt => Some(GenotypeKind::Permutation),
            MutationKind::Gaussian { .. } => Some(GenotypeKind::Real),
            MutationKind::Subtree => Some(GenotypeKind::Tree),
            MutationKind::None => None,
        }
    }
}

/// Selection, crossover and mutation with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSuite<S> {
    pub selection: Selection,
    pub crossover: CrossoverKind,
    pub p_c: f64,
    pub mutation: MutationKind,
    pub p_m: f64,
    /// Primitive set and caps for tree operators.
    pub gp: Option<GpConfig<S>>,
}

impl<S: Scalar> OperatorSuite<S> {
    pub fn new(selection: Selection, crossover: CrossoverKind, p_c: f64, mutation: MutationKind, p_m: f64) -> Self {
        OperatorSuite { selection, crossover, p_c, mutation, p_m, gp: None }
    }

    pub fn with_gp(mut self, cfg: GpConfig<S>) -> Self {
        self.gp = Some(cfg);
        self
    }

    /// Checks probabilities, operator/genotype compatibility and size limits.
    pub fn validate(&self, kind: GenotypeKind, dimension: usize) -> Result<()> {
        for (name, p) in [("p_c", self.p_c), ("p_m", self.p_m)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("{name} = {p} outside [0, 1]")));
            }
        }
        let expected = [self.crossover.kind(), self.mutation.kind()];
        if let Some(op) = expected.into_iter().flatten().find(|&k| k != kind) {
            return Err(Error::IncompatibleGenotype { expected: op.name(), found: kind.name() });
        }
        let too_small = |need: usize, what: &str| -> Result<()> {
            if dimension < need {
                Err(invalid(format!("{what} needs dimension >= {need}, got {dimension}")))
            } else {
                Ok(())
            }
        };
        match self.crossover {
            CrossoverKind::OnePoint | CrossoverKind::Pmx | CrossoverKind::Order => too_small(2, "crossover")?,
            CrossoverKind::KPoint { k } if k == 0 || k >= dimension => {
                return Err(invalid(format!("k = {k} outside 1..{dimension}")))
            }
            _ => {}
        }
        match self.mutation {
            MutationKind::Exchange | MutationKind::Shift => too_small(2, "mutation")?,
            MutationKind::TwoOpt => too_small(4, "two-opt mutation")?,
            MutationKind::Gaussian { sigma } if !(sigma > 0.0) => {
                return Err(invalid(format!("sigma = {sigma} must be positive")))
            }
            _ => {}
        }
        if kind == GenotypeKind::Tree {
            self.gp.as_ref().ok_or_else(|| invalid("tree operators need a GP configuration"))?.validate()?;
        }
        Ok(())
    }

    /// Crossover with probability `p_c` (one-point handles its own coin), then
    /// mutation of both children.
    pub fn reproduce_pair<R: Rng + ?Sized>(
        &self,
        a: &Genotype<S>,
        b: &Genotype<S>,
        rng: &mut R,
    ) -> Result<(Genotype<S>, Genotype<S>)> {
        let (c1, c2) = self.cross(a, b, rng)?;
        Ok((self.mutate(&c1, rng)?, self.mutate(&c2, rng)?))
    }

    pub fn cross<R: Rng + ?Sized>(
        &self,
        a: &Genotype<S>,
        b: &Genotype<S>,
        rng: &mut R,
    ) -> Result<(Genotype<S>, Genotype<S>)> {
        use Genotype as G;
        if self.crossover == CrossoverKind::OnePoint {
            let (x, y) = one_point_cross(a.as_binary()?, b.as_binary()?, self.p_c, rng)?;
            return Ok((G::Binary(x), G::Binary(y)));
        }
        if self.crossover == CrossoverKind::None || !rng.random_bool(self.p_c) {
            return Ok((a.clone(), b.clone()));
        }
        Ok(match self.crossover {
            CrossoverKind::Uniform | CrossoverKind::KPoint { .. } => {
                let (x, y) = (a.as_binary()?, b.as_binary()?);
                let kind = match self.crossover {
                    CrossoverKind::KPoint { k } => MaskKind::KPoint(k),
                    _ => MaskKind::Uniform,
                };
                let mask = build_mask(kind, x.len(), rng)?;
                let (c1, c2) = apply_mask(x, y, &mask)?;
                (G::Binary(c1), G::Binary(c2))
            }
            CrossoverKind::Pmx => {
                let (c1, c2) = pmx_cross(a.as_permutation()?, b.as_permutation()?, rng)?;
                (G::Permutation(c1), G::Permutation(c2))
            }
            CrossoverKind::Order => {
                let (c1, c2) = order_cross(a.as_permutation()?, b.as_permutation()?, rng)?;
                (G::Permutation(c1), G::Permutation(c2))
            }
            CrossoverKind::Subtree => {
                let cfg = self.gp.as_ref().ok_or_else(|| invalid("tree operators need a GP configuration"))?;
                let (c1, c2) = gp::subtree_cross(a.as_tree()?, b.as_tree()?, cfg, rng);
                (G::Tree(c1), G::Tree(c2))
            }
            CrossoverKind::OnePoint | CrossoverKind::None => unreachable!(),
        })
    }

    pub fn mutate<R: Rng + ?Sized>(&self, g: &Genotype<S>, rng: &mut R) -> Result<Genotype<S>> {
        use Genotype as G;
        Ok(match self.mutation {
            MutationKind::Bernoulli => G::Binary(bernoulli_mutate(g.as_binary()?, self.p_m, rng)),
            MutationKind::Gaussian { sigma } => G::Real(gaussian_mutate(g.as_real()?, sigma, rng)?),
            MutationKind::None => g.clone(),
            _ if !rng.random_bool(self.p_m) => g.clone(),
            MutationKind::SingleFlip => G::Binary(single_flip_mutate(g.as_binary()?, rng)),
            MutationKind::Exchange => G::Permutation(perm_mutate(g.as_permutation()?, PermMutation::Exchange, rng)?),
            MutationKind::Shift => G::Permutation(perm_mutate(g.as_permutation()?, PermMutation::Shift, rng)?),
            MutationKind::TwoOpt => G::Permutation(perm_mutate(g.as_permutation()?, PermMutation::TwoOpt, rng)?),
            MutationKind::Subtree => {
                let cfg = self.gp.as_ref().ok_or_else(|| invalid("tree operators need a GP configuration"))?;
                G::Tree(gp::subtree_mutate(g.as_tree()?, cfg, rng))
            }
        })
    }
}
