//! Benchmark problems in maximisation form.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::encoding::{IlpCode, IntRangeCode};
use crate::engine::{FitnessScaling, Genotype, GenotypeKind, Problem};
use crate::error::{invalid, Error, Result};
use crate::gp::{random_tree, ExprTree, GpConfig};
use crate::graph::Graph;
use crate::scalar::Scalar;

fn bits<S: Scalar>(g: &Genotype<S>) -> &[bool] {
    g.as_binary().expect("binary genotype")
}

fn hamming(x: &[bool], y: &[bool]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// Number of ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneMax {
    pub l: usize,
}

impl OneMax {
    pub fn new(l: usize) -> Self {
        OneMax { l }
    }
}

impl<S: Scalar> Problem<S> for OneMax {
    type Phenotype = usize;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.l
    }

    fn decode(&self, g: &Genotype<S>) -> usize {
        bits(g).iter().filter(|&&b| b).count()
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        S::from_usize_lossy(self.decode(g))
    }

    fn optimum_value(&self) -> Option<S> {
        Some(S::from_usize_lossy(self.l))
    }
}

/// Arbitrary non-negative function of `l ≤ 24` bits given by its value table,
/// indexed by the genotype read most significant bit first.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoBoolean<S> {
    pub l: usize,
    pub table: Vec<S>,
}

impl<S: Scalar> PseudoBoolean<S> {
    pub fn new(l: usize, table: Vec<S>) -> Result<Self> {
        if l > 24 {
            return Err(Error::TooLarge(format!("table over {l} bits")));
        }
        if table.len() != 1 << l {
            return Err(Error::LengthMismatch { expected: 1 << l, found: table.len() });
        }
        if table.iter().any(|v| !(*v >= S::zero())) {
            return Err(invalid("table values must be non-negative"));
        }
        Ok(PseudoBoolean { l, table })
    }

    /// Values drawn uniformly from `0..levels`.
    pub fn random<R: Rng + ?Sized>(l: usize, levels: usize, rng: &mut R) -> Result<Self> {
        let size = 1usize.checked_shl(l as u32).filter(|_| l <= 24).ok_or_else(|| Error::TooLarge(format!("{l} bits")))?;
        let table = (0..size).map(|_| S::from_usize_lossy(rng.random_range(0..levels.max(1)))).collect();
        PseudoBoolean::new(l, table)
    }

    pub fn index(x: &[bool]) -> usize {
        x.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

impl<S: Scalar> Problem<S> for PseudoBoolean<S> {
    type Phenotype = usize;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.l
    }

    fn decode(&self, g: &Genotype<S>) -> usize {
        Self::index(bits(g))
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        self.table[self.decode(g)]
    }

    fn optimum_value(&self) -> Option<S> {
        self.table.iter().copied().reduce(S::max)
    }
}

/// Two peaks: `f(x) = max(l − d(x, local), l + 1 − d(x, global))` with
/// `d(local, global) ≥ 3`, so `local` is a strict local optimum of the
/// one-flip neighbourhood and `global` the unique global optimum `l + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPeak {
    pub local: Vec<bool>,
    pub global: Vec<bool>,
}

impl TwoPeak {
    pub fn new(local: Vec<bool>, global: Vec<bool>) -> Result<Self> {
        if local.len() != global.len() {
            return Err(Error::LengthMismatch { expected: local.len(), found: global.len() });
        }
        if hamming(&local, &global) < 3 {
            return Err(invalid("peaks must be at Hamming distance at least 3"));
        }
        Ok(TwoPeak { local, global })
    }

    /// Random peaks at distance at least `l / 2` (and at least 3).
    pub fn random<R: Rng + ?Sized>(l: usize, rng: &mut R) -> Result<Self> {
        if l < 3 {
            return Err(invalid("two peaks need l >= 3"));
        }
        loop {
            let a: Vec<bool> = (0..l).map(|_| rng.random()).collect();
            let b: Vec<bool> = (0..l).map(|_| rng.random()).collect();
            if hamming(&a, &b) >= (l / 2).max(3) {
                return TwoPeak::new(a, b);
            }
        }
    }
}

impl<S: Scalar> Problem<S> for TwoPeak {
    type Phenotype = Vec<bool>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.local.len()
    }

    fn decode(&self, g: &Genotype<S>) -> Vec<bool> {
        bits(g).to_vec()
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        let x = bits(g);
        let l = self.local.len();
        let near_local = l - hamming(x, &self.local);
        let near_global = l + 1 - hamming(x, &self.global);
        S::from_usize_lossy(near_local.max(near_global))
    }

    fn optimum_value(&self) -> Option<S> {
        Some(S::from_usize_lossy(self.local.len() + 1))
    }
}

/// Maximisation of `f ≥ 0` over the integers `a..=b`; codes decoding above
/// `b` score 0.
#[derive(Clone)]
pub struct IntFunction<S> {
    pub code: IntRangeCode,
    f: Arc<dyn Fn(i64) -> S + Send + Sync>,
}

impl<S> fmt::Debug for IntFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntFunction").field("code", &self.code).finish_non_exhaustive()
    }
}

impl<S: Scalar> IntFunction<S> {
    pub fn new(a: i64, b: i64, f: impl Fn(i64) -> S + Send + Sync + 'static) -> Result<Self> {
        Ok(IntFunction { code: IntRangeCode::new(a, b)?, f: Arc::new(f) })
    }

    pub fn eval(&self, x: i64) -> S {
        (self.f)(x)
    }
}

impl<S: Scalar> Problem<S> for IntFunction<S> {
    type Phenotype = Option<i64>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.code.l
    }

    fn decode(&self, g: &Genotype<S>) -> Option<i64> {
        let (x, ok) = self.code.decode(bits(g)).expect("length checked by the caller");
        ok.then_some(x)
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        self.decode(g).map_or(S::zero(), |x| (self.f)(x))
    }
}

/// Maximum-weight cut, `U(ξ) = {v_j : ξ_j = 1}`. The bijective code has
/// `l = n − 1` and pins the last vertex outside `U`, so each cut has one code.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCut {
    pub graph: Graph,
    pub bijective: bool,
}

impl MaxCut {
    pub fn new(graph: Graph, bijective: bool) -> Result<Self> {
        if graph.n() < 2 {
            return Err(invalid("max-cut needs at least two vertices"));
        }
        Ok(MaxCut { graph, bijective })
    }

    /// Side of every vertex.
    pub fn sides(&self, x: &[bool]) -> Vec<bool> {
        let mut s = x.to_vec();
        if self.bijective {
            s.push(false);
        }
        s
    }

    pub fn cut_weight(&self, side: &[bool]) -> f64 {
        self.graph
            .edges()
            .iter()
            .zip(self.graph.weights())
            .filter(|((u, v), _)| side[*u] != side[*v])
            .map(|(_, w)| w)
            .sum()
    }
}

impl<S: Scalar> Problem<S> for MaxCut {
    type Phenotype = Vec<bool>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.graph.n() - self.bijective as usize
    }

    fn decode(&self, g: &Genotype<S>) -> Vec<bool> {
        self.sides(bits(g))
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        S::lit(self.cut_weight(&self.decode(g)))
    }
}

/// `max (c, x)` subject to `Ax ≤ b`, `0 ≤ x ≤ d`, integer `x`, coded with
/// [`IlpCode`]. The raw objective is `(c, x)` on feasible points and `−C·s(x)`
/// otherwise, where `s` sums the violations of `Ax ≤ b` and of `x ≤ d`; fitness
/// is the per-population window.
///
/// With integer `A` and `b`, every infeasible point has `s ≥ 1`, so
/// `C ≥ 1 + Σ|c_j| d_j` ranks all feasible points above all infeasible ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Ilp<S> {
    pub a: Vec<Vec<S>>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub code: IlpCode,
    pub penalty: S,
}

impl<S: Scalar> Ilp<S> {
    /// `penalty = None` selects `1 + Σ|c_j| d_j`.
    pub fn new(a: Vec<Vec<S>>, b: Vec<S>, c: Vec<S>, d: Vec<u64>, penalty: Option<S>) -> Result<Self> {
        let n = c.len();
        if d.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: d.len() });
        }
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
        }
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: row.len() });
        }
        let floor = S::one() + c.iter().zip(&d).map(|(cj, &dj)| cj.abs() * S::lit(dj as f64)).sum::<S>();
        let penalty = penalty.unwrap_or(floor);
        if penalty < floor {
            return Err(invalid(format!("penalty {penalty} below 1 + sum |c_j| d_j = {floor}")));
        }
        let code = IlpCode::new(d)?;
        if code.is_empty() {
            return Err(invalid("all coordinate bounds are zero"));
        }
        Ok(Ilp { a, b, c, code, penalty })
    }

    pub fn violation(&self, x: &[u64]) -> S {
        let rows = self.a.iter().zip(&self.b).map(|(row, &bi)| {
            let lhs: S = row.iter().zip(x).map(|(&aij, &xj)| aij * S::lit(xj as f64)).sum();
            (lhs - bi).max(S::zero())
        });
        let bounds = x.iter().zip(&self.code.bounds).map(|(&xj, &dj)| S::lit(xj.saturating_sub(dj) as f64));
        rows.chain(bounds).sum()
    }

    pub fn score(&self, x: &[u64]) -> S {
        let s = self.violation(x);
        if s > S::zero() {
            -self.penalty * s
        } else {
            self.c.iter().zip(x).map(|(&cj, &xj)| cj * S::lit(xj as f64)).sum()
        }
    }
}

impl<S: Scalar> Problem<S> for Ilp<S> {
    type Phenotype = Vec<u64>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.code.len()
    }

    fn decode(&self, g: &Genotype<S>) -> Vec<u64> {
        self.code.decode(bits(g)).expect("length checked by the caller")
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        self.score(&self.decode(g))
    }

    fn scaling(&self) -> FitnessScaling {
        FitnessScaling::Window
    }
}

/// Simple plant location: open facilities `z`, cost
/// `F(z) = Σ c_i z_i + Σ_j min_{i: z_i = 1} C_ij`, fitness `1/F`, and 0 when no
/// facility is open.
#[derive(Debug, Clone, PartialEq)]
pub struct Spl<S> {
    pub open_cost: Vec<S>,
    /// `service[i][j]`: cost of serving client `j` from facility `i`.
    pub service: Vec<Vec<S>>,
}

impl<S: Scalar> Spl<S> {
    pub fn new(open_cost: Vec<S>, service: Vec<Vec<S>>) -> Result<Self> {
        if open_cost.is_empty() || open_cost.len() != service.len() {
            return Err(Error::LengthMismatch { expected: open_cost.len(), found: service.len() });
        }
        if open_cost.iter().any(|c| !(*c > S::zero())) {
            return Err(invalid("opening costs must be positive"));
        }
        let clients = service[0].len();
        if let Some(row) = service.iter().find(|r| r.len() != clients) {
            return Err(Error::LengthMismatch { expected: clients, found: row.len() });
        }
        if service.iter().flatten().any(|c| !(*c >= S::zero())) {
            return Err(invalid("service costs must be non-negative"));
        }
        Ok(Spl { open_cost, service })
    }

    /// Total cost, `None` when nothing is open.
    pub fn cost(&self, z: &[bool]) -> Option<S> {
        if !z.iter().any(|&b| b) {
            return None;
        }
        let opening: S = self.open_cost.iter().zip(z).filter(|(_, &o)| o).map(|(c, _)| *c).sum();
        let clients = self.service[0].len();
        let serving: S = (0..clients)
            .map(|j| {
                (0..z.len()).filter(|&i| z[i]).map(|i| self.service[i][j]).fold(S::infinity(), S::min)
            })
            .sum();
        Some(opening + serving)
    }
}

impl<S: Scalar> Problem<S> for Spl<S> {
    type Phenotype = Vec<bool>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Binary
    }

    fn dimension(&self) -> usize {
        self.open_cost.len()
    }

    fn decode(&self, g: &Genotype<S>) -> Vec<bool> {
        bits(g).to_vec()
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        self.cost(bits(g)).map_or(S::zero(), |f| S::one() / f)
    }
}

/// Symmetric travelling salesman; fitness is the reciprocal tour length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tsp<S> {
    pub dist: Vec<Vec<S>>,
}

impl<S: Scalar> Tsp<S> {
    pub fn new(dist: Vec<Vec<S>>) -> Result<Self> {
        let n = dist.len();
        if n < 3 {
            return Err(invalid("a tour needs at least three cities"));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: row.len() });
            }
            if row[i] != S::zero() {
                return Err(invalid("distance matrix needs a zero diagonal"));
            }
            for (j, &d) in row.iter().enumerate() {
                if !(d >= S::zero()) || d != dist[j][i] {
                    return Err(invalid("distances must be symmetric and non-negative"));
                }
            }
        }
        Ok(Tsp { dist })
    }

    /// Euclidean instance from planar points.
    pub fn from_points(points: &[(S, S)]) -> Result<Self> {
        let dist = points
            .iter()
            .map(|&(x1, y1)| points.iter().map(|&(x2, y2)| (x1 - x2).hypot(y1 - y2)).collect())
            .collect();
        Tsp::new(dist)
    }

    pub fn tour_length(&self, tour: &[usize]) -> S {
        let n = tour.len();
        (0..n).map(|i| self.dist[tour[i]][tour[(i + 1) % n]]).sum()
    }
}

impl<S: Scalar> Problem<S> for Tsp<S> {
    type Phenotype = Vec<usize>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Permutation
    }

    fn dimension(&self) -> usize {
        self.dist.len()
    }

    fn decode(&self, g: &Genotype<S>) -> Vec<usize> {
        g.as_permutation().expect("permutation genotype").to_vec()
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        let len = self.tour_length(&self.decode(g));
        if len > S::zero() {
            S::one() / len
        } else {
            S::infinity()
        }
    }
}

/// Sphere over a box, maximised as `1 / (1 + ‖x‖²)`; initial points are
/// uniform in the box, mutants may leave it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere<S> {
    pub bounds: Vec<(S, S)>,
}

impl<S: Scalar> Sphere<S> {
    pub fn new(bounds: Vec<(S, S)>) -> Self {
        Sphere { bounds }
    }

    pub fn norm_sq(x: &[S]) -> S {
        x.iter().map(|&v| v * v).sum()
    }
}

impl<S: Scalar> Problem<S> for Sphere<S> {
    type Phenotype = Vec<S>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Real
    }

    fn dimension(&self) -> usize {
        self.bounds.len()
    }

    fn decode(&self, g: &Genotype<S>) -> Vec<S> {
        g.as_real().expect("real genotype").to_vec()
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        S::one() / (S::one() + Self::norm_sq(g.as_real().expect("real genotype")))
    }

    fn optimum_value(&self) -> Option<S> {
        Some(S::one())
    }

    fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Genotype<S> {
        Genotype::Real(
            self.bounds
                .iter()
                .map(|&(a, b)| a + (b - a) * S::lit(rng.random::<f64>()))
                .collect(),
        )
    }
}

/// Symbolic regression on sample points `(inputs, target)`; fitness
/// `1 / (1 + Σ squared error)`, and 0 when evaluation is not finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicRegression<S> {
    pub samples: Vec<(Vec<S>, S)>,
    pub cfg: GpConfig<S>,
}

impl<S: Scalar> SymbolicRegression<S> {
    pub fn new(samples: Vec<(Vec<S>, S)>, cfg: GpConfig<S>) -> Result<Self> {
        cfg.validate()?;
        if samples.is_empty() {
            return Err(invalid("symbolic regression needs sample points"));
        }
        if let Some((x, _)) = samples.iter().find(|(x, _)| x.len() < cfg.n_vars) {
            return Err(Error::LengthMismatch { expected: cfg.n_vars, found: x.len() });
        }
        Ok(SymbolicRegression { samples, cfg })
    }

    /// Samples of a target tree at the given inputs.
    pub fn from_target(target: &ExprTree<S>, inputs: Vec<Vec<S>>, cfg: GpConfig<S>) -> Result<Self> {
        let samples = inputs
            .into_iter()
            .map(|x| target.eval(&x).map(|y| (x, y)))
            .collect::<Result<Vec<_>>>()?;
        SymbolicRegression::new(samples, cfg)
    }

    pub fn sse(&self, t: &ExprTree<S>) -> Option<S> {
        let mut total = S::zero();
        for (x, y) in &self.samples {
            let e = t.eval(x).ok()? - *y;
            total = total + e * e;
        }
        total.is_finite().then_some(total)
    }
}

impl<S: Scalar> Problem<S> for SymbolicRegression<S> {
    type Phenotype = ExprTree<S>;

    fn kind(&self) -> GenotypeKind {
        GenotypeKind::Tree
    }

    fn dimension(&self) -> usize {
        self.cfg.n_vars
    }

    fn decode(&self, g: &Genotype<S>) -> ExprTree<S> {
        g.as_tree().expect("tree genotype").clone()
    }

    fn objective(&self, g: &Genotype<S>) -> S {
        self.sse(g.as_tree().expect("tree genotype")).map_or(S::zero(), |e| S::one() / (S::one() + e))
    }

    fn optimum_value(&self) -> Option<S> {
        Some(S::one())
    }

    fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Genotype<S> {
        Genotype::Tree(random_tree(&self.cfg, rng))
    }

    fn validate(&self, g: &Genotype<S>) -> Result<()> {
        let t = g.as_tree()?;
        if !t.is_valid(&self.cfg) {
            return Err(invalid("tree breaks the configured caps"));
        }
        Ok(())
    }
}

/// All binary strings of length `l`, most significant bit first.
pub fn all_bit_strings(l: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << l).map(move |v| (0..l).map(|j| v >> (l - 1 - j) & 1 == 1).collect())
}
