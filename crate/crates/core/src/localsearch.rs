//! Trajectory methods on binary strings: steepest-ascent local search over a
//! Hamming ball and (probabilistic) tabu search with a FIFO list of move masks.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{Genotype, GenotypeKind, Incumbent, Problem, RunRecord, Termination, TrajectoryPoint};
use crate::error::{invalid, Error, Result};
use crate::rng::seeded;
use crate::scalar::Scalar;

/// Flip sets of the Hamming ball of radius `d` around any string of length
/// `n`, excluding the centre: all subsets of `0..n` of size `1..=d`, by size
/// and then lexicographically.
pub fn hamming_moves(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in from..n {
            cur.push(j);
            go(n, k, j + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=d.min(n) {
        go(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

pub fn apply_move(x: &[bool], flips: &[usize]) -> Vec<bool> {
    let mut y = x.to_vec();
    for &j in flips {
        y[j] = !y[j];
    }
    y
}

/// All strings at Hamming distance `1..=d` from `x`.
pub fn hamming_ball(x: &[bool], d: usize) -> Vec<Vec<bool>> {
    hamming_moves(x.len(), d).iter().map(|m| apply_move(x, m)).collect()
}

fn check_binary<S: Scalar, P: Problem<S>>(problem: &P) -> Result<()> {
    if problem.kind() != GenotypeKind::Binary {
        return Err(Error::IncompatibleGenotype { expected: GenotypeKind::Binary.name(), found: problem.kind().name() });
    }
    Ok(())
}

fn value<S: Scalar, P: Problem<S>>(problem: &P, x: &[bool]) -> S {
    problem.objective(&Genotype::Binary(x.to_vec()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalOptimum<S> {
    pub point: Vec<bool>,
    pub value: S,
    /// Number of improving moves made.
    pub steps: usize,
    /// Points visited, starting with the start point.
    pub path: Vec<Vec<bool>>,
    /// Objective of each visited point.
    pub values: Vec<S>,
}

/// Steepest ascent: moves to the best strictly improving neighbor within
/// radius `d` (lexicographically smallest among equals) until none exists.
pub fn local_search<S: Scalar, P: Problem<S>>(problem: &P, start: &[bool], d: usize) -> Result<LocalOptimum<S>> {
    check_binary(problem)?;
    if start.len() != problem.dimension() {
        return Err(Error::LengthMismatch { expected: problem.dimension(), found: start.len() });
    }
    if d == 0 {
        return Err(invalid("neighborhood radius must be at least 1"));
    }
    let moves = hamming_moves(start.len(), d);
    let mut x = start.to_vec();
    let mut fx = value(problem, &x);
    let mut values = vec![fx];
    let mut path = vec![x.clone()];
    loop {
        let mut best: Option<(Vec<bool>, S)> = None;
        for m in &moves {
            let y = apply_move(&x, m);
            let fy = value(problem, &y);
            let better = match &best {
                None => fy > fx,
                Some((b, fb)) => fy > *fb || (fy == *fb && y < *b),
            };
            if better {
                best = Some((y, fy));
            }
        }
        match best {
            Some((y, fy)) => {
                x = y;
                fx = fy;
                values.push(fx);
                path.push(x.clone());
            }
            None => break,
        }
    }
    Ok(LocalOptimum { steps: values.len() - 1, point: x, value: fx, path, values })
}

/// True when no point within radius `d` is strictly better.
pub fn is_local_optimum<S: Scalar, P: Problem<S>>(problem: &P, x: &[bool], d: usize) -> bool {
    let fx = value(problem, x);
    hamming_ball(x, d).iter().all(|y| value(problem, y) <= fx)
}

/// Local search from a random start, recorded one move per iteration.
pub fn local_search_run<S: Scalar, P: Problem<S>>(problem: &P, d: usize, seed: u64) -> Result<RunRecord<S>> {
    check_binary(problem)?;
    let start = problem.random_genotype(&mut seeded(seed));
    let opt = local_search(problem, start.as_binary()?, d)?;
    let mut inc = Incumbent::new(problem.optimum_value());
    let mut trajectory = Vec::with_capacity(opt.values.len());
    for (t, (x, &v)) in opt.path.iter().zip(&opt.values).enumerate() {
        inc.observe(&Genotype::Binary(x.clone()), v, t);
        trajectory.push(TrajectoryPoint { t, best_fitness: inc.value(), mean_fitness: v, distinct_genotypes: 1 });
    }
    Ok(inc.into_record(trajectory, seed).expect("at least the start point"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TabuConfig {
    /// Length `L` of the list of forbidden move masks.
    pub tabu_len: usize,
    /// Probability that a neighbor enters the sampled sub-neighborhood.
    pub p: f64,
    /// Hamming radius `d` of the neighborhood.
    pub radius: usize,
    /// Leave the list unchanged on iterations without an admissible move
    /// instead of recording the null move.
    #[serde(default = "yes")]
    pub keep_list_on_empty: bool,
}

fn yes() -> bool {
    true
}

impl TabuConfig {
    pub fn new(tabu_len: usize, p: f64, radius: usize) -> Self {
        TabuConfig { tabu_len, p, radius, keep_list_on_empty: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tabu_len == 0 {
            return Err(invalid("tabu list length must be at least 1"));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(invalid(format!("p = {} outside (0, 1]", self.p)));
        }
        if self.radius == 0 {
            return Err(invalid("neighborhood radius must be at least 1"));
        }
        Ok(())
    }

    /// `0 < L < (n−1)n/4` with the list kept on empty iterations, the range
    /// under which the probabilistic variant converges almost surely.
    pub fn in_convergence_regime(&self, n: usize) -> bool {
        self.keep_list_on_empty && 4 * self.tabu_len < n * n.saturating_sub(1)
    }
}

/// FIFO of the last `L` move masks `|x^{k+1} − x^k|`, initially all zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabuList {
    masks: VecDeque<Vec<bool>>,
}

impl TabuList {
    pub fn new(n: usize, len: usize) -> Self {
        TabuList { masks: std::iter::repeat_n(vec![false; n], len).collect() }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Oldest first.
    pub fn masks(&self) -> impl Iterator<Item = &[bool]> {
        self.masks.iter().map(Vec::as_slice)
    }

    /// Drops the oldest mask and appends the move `from → to`.
    pub fn record(&mut self, from: &[bool], to: &[bool]) {
        self.masks.pop_front();
        self.masks.push_back(from.iter().zip(to).map(|(a, b)| a != b).collect());
    }
}

/// The move `x → y` flips exactly the positions of some stored mask.
pub fn is_tabu(x: &[bool], y: &[bool], list: &TabuList) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), found: y.len() });
    }
    for m in list.masks() {
        if m.len() != x.len() {
            return Err(Error::LengthMismatch { expected: x.len(), found: m.len() });
        }
        if m.iter().enumerate().all(|(i, &flip)| flip == (x[i] != y[i])) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Each neighbor within radius `cfg.radius` independently with probability
/// `cfg.p`; may be empty.
pub fn pts_subneighborhood<R: Rng + ?Sized>(x: &[bool], cfg: &TabuConfig, rng: &mut R) -> Vec<Vec<bool>> {
    let moves = hamming_moves(x.len(), cfg.radius);
    if cfg.p >= 1.0 {
        return moves.iter().map(|m| apply_move(x, m)).collect();
    }
    moves.iter().filter(|_| rng.random_bool(cfg.p)).map(|m| apply_move(x, m)).collect()
}

/// Probabilistic tabu search. Each iteration samples a sub-neighborhood of
/// the current point, discards tabu moves unless they beat the best value
/// found so far, and moves to the best remaining candidate even when it is
/// worse than the current point. With no admissible candidate the search
/// stays put. The trajectory's mean column holds the current value.
pub fn tabu_search<S: Scalar, P: Problem<S>>(
    problem: &P,
    cfg: &TabuConfig,
    term: &Termination<S>,
    seed: u64,
) -> Result<RunRecord<S>> {
    check_binary(problem)?;
    cfg.validate()?;
    let n = problem.dimension();
    let mut rng = seeded(seed);
    let mut y = problem.random_genotype(&mut rng).as_binary()?.to_vec();
    let mut fy = value(problem, &y);
    let mut list = TabuList::new(n, cfg.tabu_len);
    let mut inc = Incumbent::new(term.target_fitness.or(problem.optimum_value()));
    inc.observe(&Genotype::Binary(y.clone()), fy, 0);
    let mut trajectory = vec![TrajectoryPoint { t: 0, best_fitness: fy, mean_fitness: fy, distinct_genotypes: 1 }];
    let (mut t, mut stagnation) = (0, 0);
    while !term.should_stop(t, inc.value(), stagnation) {
        t += 1;
        let mut chosen: Option<(Vec<bool>, S)> = None;
        for c in pts_subneighborhood(&y, cfg, &mut rng) {
            let fc = value(problem, &c);
            if fc <= inc.value() && is_tabu(&y, &c, &list)? {
                continue;
            }
            let better = match &chosen {
                None => true,
                Some((b, fb)) => fc > *fb || (fc == *fb && c < *b),
            };
            if better {
                chosen = Some((c, fc));
            }
        }
        let improved = match chosen {
            Some((c, fc)) => {
                list.record(&y, &c);
                y = c;
                fy = fc;
                inc.observe(&Genotype::Binary(y.clone()), fy, t)
            }
            None => {
                if !cfg.keep_list_on_empty {
                    list.record(&y, &y);
                }
                false
            }
        };
        stagnation = if improved { 0 } else { stagnation + 1 };
        trajectory.push(TrajectoryPoint { t, best_fitness: inc.value(), mean_fitness: fy, distinct_genotypes: 1 });
    }
    Ok(inc.into_record(trajectory, seed).expect("start point observed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{all_bit_strings, OneMax, PseudoBoolean, TwoPeak};
    use crate::stats::{ProportionCheck, Summary};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(hamming_moves(5, 1).len(), 5);
        assert_eq!(hamming_moves(5, 2).len(), 15);
        assert_eq!(hamming_moves(3, 5).len(), 7);
        let ball = hamming_ball(&bits("000"), 1);
        assert_eq!(ball, vec![bits("100"), bits("010"), bits("001")]);
    }

    #[test]
    fn onemax_climb_counts_zeros() {
        let x = bits("0100110001");
        let opt = local_search::<f64, _>(&OneMax::new(10), &x, 1).unwrap();
        assert_eq!(opt.point, vec![true; 10]);
        assert_eq!(opt.steps, 6);
        let again = local_search::<f64, _>(&OneMax::new(10), &opt.point, 1).unwrap();
        assert_eq!(again.steps, 0);
    }

    #[test]
    fn climbs_end_at_local_optima() {
        let mut rng = seeded(12);
        for l in [4, 7, 10] {
            let table = PseudoBoolean::<f64>::random(l, 6, &mut rng).unwrap();
            let distinct: std::collections::BTreeSet<u64> =
                all_bit_strings(l).map(|x| value::<f64, _>(&table, &x).to_bits()).collect();
            for x in all_bit_strings(l).step_by(3) {
                for d in [1, 2] {
                    let opt = local_search(&table, &x, d).unwrap();
                    // brute neighbor scan
                    for y in all_bit_strings(l) {
                        let dist = x.len() - y.iter().zip(&opt.point).filter(|(a, b)| a == b).count();
                        if (1..=d).contains(&dist) {
                            assert!(value::<f64, _>(&table, &y) <= opt.value);
                        }
                    }
                    assert!(opt.steps < distinct.len());
                    assert!(opt.values.windows(2).all(|w| w[1] > w[0]));
                }
            }
        }
    }

    #[test]
    fn tabu_membership() {
        let n = 5;
        let mut list = TabuList::new(n, 3);
        let x = bits("00000");
        assert!(!is_tabu(&x, &bits("01000"), &list).unwrap());
        assert!(is_tabu(&x, &x, &list).unwrap());
        list.record(&bits("00000"), &bits("01000"));
        assert!(is_tabu(&bits("01000"), &bits("00000"), &list).unwrap());
        assert!(!is_tabu(&bits("01000"), &bits("01100"), &list).unwrap());
        assert!(is_tabu(&x, &bits("0"), &list).is_err());
    }

    #[test]
    fn tabu_list_is_fifo_of_fixed_length() {
        let mut list = TabuList::new(3, 2);
        let moves = [("000", "100"), ("100", "110"), ("110", "111")];
        for (a, b) in moves {
            list.record(&bits(a), &bits(b));
            assert_eq!(list.len(), 2);
        }
        let masks: Vec<Vec<bool>> = list.masks().map(<[bool]>::to_vec).collect();
        assert_eq!(masks, vec![bits("010"), bits("001")]);
    }

    #[test]
    fn tabu_verdict_matches_scan() {
        let mut rng = seeded(3);
        for _ in 0..300 {
            let n = rng.random_range(1..8);
            let mut list = TabuList::new(n, rng.random_range(1..5));
            let mut masks = vec![vec![false; n]; list.len()];
            for _ in 0..rng.random_range(0..6) {
                let a: Vec<bool> = (0..n).map(|_| rng.random()).collect();
                let b: Vec<bool> = (0..n).map(|_| rng.random()).collect();
                list.record(&a, &b);
                masks.remove(0);
                masks.push((0..n).map(|i| a[i] ^ b[i]).collect());
            }
            let x: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            let y: Vec<bool> = (0..n).map(|_| rng.random()).collect();
            let diff: Vec<bool> = (0..n).map(|i| x[i] ^ y[i]).collect();
            assert_eq!(is_tabu(&x, &y, &list).unwrap(), masks.contains(&diff));
        }
    }

    #[test]
    fn subneighborhood_sampling() {
        let x = vec![false; 10];
        let full = pts_subneighborhood(&x, &TabuConfig::new(1, 1.0, 2), &mut seeded(1));
        assert_eq!(full.len(), 55);
        let cfg = TabuConfig::new(1, 0.5, 1);
        let mut rng = seeded(2);
        let draws = 10_000;
        let sizes: Vec<f64> = (0..draws).map(|_| pts_subneighborhood(&x, &cfg, &mut rng).len() as f64).collect();
        let s = Summary::of(&sizes);
        assert!((s.mean - 5.0).abs() <= 3.0 * s.std_error);
        let empty = sizes.iter().filter(|&&k| k == 0.0).count();
        assert!(ProportionCheck::new(empty, draws, 0.5f64.powi(10)).within(3.0));
    }

    #[test]
    fn aspiration_admits_tabu_improvement() {
        // every move is tabu except the null move; the improving ones must still be taken
        let problem = OneMax::new(3);
        let cfg = TabuConfig::new(1, 1.0, 1);
        let rec = tabu_search::<f64, _>(&problem, &cfg, &Termination::iterations(10), 4).unwrap();
        assert_eq!(rec.incumbent_fitness, 3.0);
    }

    #[test]
    fn tabu_search_solves_onemax() {
        // full neighborhood within 10 n iterations, sampled one within a larger budget
        for (cfg, budget) in [(TabuConfig::new(5, 1.0, 1), 100), (TabuConfig::new(5, 0.5, 1), 10_000)] {
            for seed in 0..50 {
                let term = Termination::new(Some(budget), None, Some(10.0)).unwrap();
                let rec = tabu_search::<f64, _>(&OneMax::new(10), &cfg, &term, seed).unwrap();
                assert_eq!(rec.incumbent_fitness, 10.0);
                assert!(rec.is_monotone());
            }
        }
    }

    #[test]
    fn tabu_escapes_local_peak() {
        let problem = TwoPeak::new(bits("11111100"), bits("00000011")).unwrap();
        let cfg = TabuConfig::new(5, 0.5, 1);
        assert!(cfg.in_convergence_regime(8));
        for seed in 0..20 {
            let term = Termination::new(Some(10_000), None, None).unwrap();
            let rec = tabu_search::<f64, _>(&problem, &cfg, &term.with_target(9.0), seed).unwrap();
            assert_eq!(rec.incumbent_fitness, 9.0);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(TabuConfig::new(0, 0.5, 1).validate().is_err());
        assert!(TabuConfig::new(1, 0.0, 1).validate().is_err());
        assert!(TabuConfig::new(1, 0.5, 0).validate().is_err());
        assert!(local_search::<f64, _>(&OneMax::new(3), &[true], 1).is_err());
    }

    #[test]
    fn local_search_records_are_monotone() {
        for seed in 0..20 {
            let rec = local_search_run::<f64, _>(&OneMax::new(12), 1, seed).unwrap();
            assert!(rec.is_monotone());
            assert_eq!(rec.incumbent_fitness, 12.0);
        }
    }
}
