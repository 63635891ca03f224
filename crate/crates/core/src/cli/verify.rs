//! Statistical and exhaustive verification suites behind `evokit verify`.

use rand::Rng;

use crate::encoding::{check_rotation_property, BoxGridCode};
use crate::engine::{init_population, Termination};
use crate::error::Result;
use crate::graph::Graph;
use crate::localsearch::{tabu_search, TabuConfig};
use crate::optrec::{
    brute_force_mis, brute_force_vc, optimal_recombination_mis, optimal_recombination_vc, transmits_genes, DifferenceGraph,
};
use crate::problems::{OneMax, PseudoBoolean, TwoPeak};
use crate::rng::{seeded, stream};
use crate::selection::Selection;
use crate::stats::{ProportionCheck, Summary};
use crate::strategies::StrategyKind;
use crate::theory::{
    degeneration_monte_carlo, ea_convergence_audit, empirical_copy_stats, ga_ls_first_hit, ga_ls_parameters,
    verify_schema_theorem, verify_sus, verify_tournament_pmf, CopyStatsQuery, GaLsParams, Schema,
};
use crate::variation::{CrossoverKind, MutationKind, OperatorSuite};

/// One verdict line.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn proportion(name: impl Into<String>, c: &ProportionCheck, k: f64) -> Self {
        Check::new(
            name,
            c.within(k),
            format!("estimate {:.6e} expected {:.6e} se {:.3e} ({} / {})", c.estimate, c.expected, c.std_error, c.hits, c.trials),
        )
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Five schemata of orders 1 to 4 on OneMax with `l = 8`, `N = 16`, all
/// represented in a fixed random population.
pub fn schema(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let problem = OneMax::new(8);
    let pop = init_population::<f64, _, _>(&problem, 16, &mut seeded(seed))?;
    let suite = OperatorSuite::new(Selection::Roulette, CrossoverKind::OnePoint, 0.7, MutationKind::Bernoulli, 0.05);
    let x = pop.member(0).as_binary()?.to_vec();
    let positions: [&[usize]; 5] = [&[0], &[2, 3], &[0, 7], &[1, 4, 6], &[0, 2, 5, 7]];
    let mut checks = Vec::new();
    for (k, pos) in positions.iter().enumerate() {
        let h = Schema::new(8, pos.iter().map(|&j| (j, x[j])).collect())?;
        let rep = verify_schema_theorem(&problem, &pop, &h, &suite, trials, seed.wrapping_add(k as u64 + 1))?;
        checks.push(Check::new(
            format!("schema {h}"),
            rep.passed,
            format!("mean {:.4} se {:.4} bound {:.4}", rep.empirical_mean, rep.std_error, rep.bound),
        ));
    }
    Ok(checks)
}

/// Loss probabilities of an allele over the grid `a × P_m × N` at three
/// crossover probabilities.
pub fn degeneration(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut cell = 0u64;
    for a in [0.2, 0.5, 0.8] {
        for p_m in [0.01, 0.1, 0.5] {
            for n in [4, 8] {
                let mut runs = Vec::new();
                for p_c in [0.0, 0.5, 1.0] {
                    cell += 1;
                    let e = degeneration_monte_carlo(a, p_m, n, p_c, trials, seed.wrapping_add(cell))?;
                    let tag = format!("a={a} pm={p_m} N={n} pc={p_c}");
                    checks.push(Check::proportion(format!("all zero {tag}"), &e.all, 3.0));
                    checks.push(Check::proportion(format!("no zero {tag}"), &e.none, 3.0));
                    runs.push(e);
                }
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let ok = runs[i].all.agrees_with(&runs[j].all, 3.0) && runs[i].none.agrees_with(&runs[j].none, 3.0);
                    checks.push(Check::new(
                        format!("crossover independence a={a} pm={p_m} N={n} pc#{i} vs pc#{j}"),
                        ok,
                        format!(
                            "all {:.4e}/{:.4e} none {:.4e}/{:.4e}",
                            runs[i].all.estimate, runs[j].all.estimate, runs[i].none.estimate, runs[j].none.estimate
                        ),
                    ));
                }
            }
        }
    }
    Ok(checks)
}

/// SUS confinement and moments, tournament winner distribution, and copy
/// count moments of the four selection schemes.
pub fn selection(rounds: usize, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = seeded(seed);
    let fitness: Vec<f64> = (0..10).map(|_| rng.random_range(0.1..5.0)).collect();
    let sus = verify_sus(&fitness, rounds, seed.wrapping_add(1))?;
    checks.push(Check::new("sus counts in {floor(Np), ceil(Np)}", sus.confined, format!("{rounds} rounds")));
    for (i, c) in sus.ceil_checks.iter().enumerate() {
        checks.push(Check::proportion(format!("sus P(ceil) #{i}"), c, 3.0));
    }
    let worst = sus.variances.iter().map(|&(v, se)| v - 3.0 * se).fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::new("sus variance <= 1/4", sus.variances.iter().all(|&(v, se)| v <= 0.25 + 3.0 * se), format!("max(v - 3se) {worst:.4}")));
    for s in [1, 2, 4] {
        let per_rank = verify_tournament_pmf(8, s, rounds, seed.wrapping_add(10 + s as u64))?;
        for (r, c) in per_rank.iter().enumerate() {
            checks.push(Check::proportion(format!("tournament N=8 s={s} rank {}", r + 1), c, 3.0));
        }
    }
    let queries = [
        CopyStatsQuery::Roulette { n: 10, p: 0.15 },
        CopyStatsQuery::Sus { n: 10, np: 1.5 },
        CopyStatsQuery::Tournament2 { n: 10, r: 7 },
        CopyStatsQuery::RankRoulette { n: 10, r: 3 },
    ];
    for (k, q) in queries.into_iter().enumerate() {
        let rep = empirical_copy_stats(q, rounds, seed.wrapping_add(20 + k as u64))?;
        checks.push(Check::new(
            format!("copy stats {q:?}"),
            rep.passed(3.0),
            format!(
                "mean {:.4} (exp {:.4}, se {:.4}) var {:.4} (exp {:.4}, se {:.4})",
                rep.mean, rep.analytic_mean, rep.mean_se, rep.variance, rep.analytic_variance, rep.variance_se
            ),
        ));
    }
    Ok(checks)
}

/// Sized GA on OneMax `l = 16` as a local search: hit by iteration 16 with
/// frequency at least `1/e`, mean first hit at most `16 e`.
pub fn ga_ls(runs: usize, seed: u64) -> Result<Vec<Check>> {
    let l = 16;
    let (n, s) = ga_ls_parameters(GaLsParams { h: l as f64, l_min: 1.0 / l as f64, eps: 0.5, r: 0.5 })?;
    let budget = 100 * l;
    let mut hits = Vec::with_capacity(runs);
    for k in 0..runs {
        hits.push(ga_ls_first_hit(l, n, s, 0.5, budget, crate::rng::derive_seed(seed, k as u64))?);
    }
    let early = hits.iter().filter(|h| h.is_some_and(|t| t <= l)).count();
    let frac = ProportionCheck::new(early, runs, (-1f64).exp());
    let e = std::f64::consts::E;
    let times: Vec<f64> = hits.iter().map(|h| h.map_or(f64::INFINITY, |t| t as f64)).collect();
    let mean = Summary::of(&times).mean;
    Ok(vec![
        Check::new("ga-ls sizing", (n, s) == (382, 191), format!("N={n} s={s}")),
        Check::new(
            "ga-ls hit by iteration h",
            frac.estimate >= frac.expected - 3.0 * frac.std_error,
            format!("{early}/{runs} runs, need >= 1/e - 3se = {:.4}", frac.expected - 3.0 * frac.std_error),
        ),
        Check::new("ga-ls mean first hit <= e h", mean <= e * l as f64, format!("mean {mean:.3}, bound {:.3}", e * l as f64)),
    ])
}

fn random_independent<R: Rng>(g: &Graph, rng: &mut R) -> Vec<bool> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
    let mut x = vec![false; g.n()];
    for v in order {
        if rng.random_bool(0.7) {
            x[v] = true;
            if !g.is_independent(&x) {
                x[v] = false;
            }
        }
    }
    x
}

fn max_independent_size(g: &Graph) -> usize {
    (0..1u32 << g.n())
        .filter(|m| g.edges().iter().all(|&(u, v)| !(m >> u & 1 == 1 && m >> v & 1 == 1)))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Flow solvers against exhaustive search on random graphs.
pub fn optrec(trials: usize, max_n: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = seeded(seed);
    let (mut mis_ok, mut vc_ok, mut konig_ok) = (0, 0, 0);
    for _ in 0..trials {
        let n = rng.random_range(2..=max_n.max(2));
        let g = Graph::random(n, 0.3, &mut rng);
        let (s1, s2) = (random_independent(&g, &mut rng), random_independent(&g, &mut rng));
        let child = optimal_recombination_mis(&g, &s1, &s2)?;
        let oracle = brute_force_mis(&g, &s1, &s2)?;
        let count = |x: &[bool]| x.iter().filter(|&&b| b).count();
        if g.is_independent(&child) && transmits_genes(&child, &s1, &s2) && oracle.as_deref().map(count) == Some(count(&child)) {
            mis_ok += 1;
        }
        let (c1, c2): (Vec<bool>, Vec<bool>) = (s1.iter().map(|b| !b).collect(), s2.iter().map(|b| !b).collect());
        let cover = optimal_recombination_vc(&g, &c1, &c2)?;
        let oracle = brute_force_vc(&g, &c1, &c2)?;
        if g.is_vertex_cover(&cover) && transmits_genes(&cover, &c1, &c2) && oracle.as_deref().map(count) == Some(count(&cover)) {
            vc_ok += 1;
        }
        let diff = DifferenceGraph::new(&g, &s1, &s2)?;
        if diff.min_cover()?.cover.len() + max_independent_size(&diff.graph) == diff.vertices.len() {
            konig_ok += 1;
        }
    }
    Ok(vec![
        Check::new("independent set recombination", mis_ok == trials, format!("{mis_ok}/{trials} optimal, feasible, transmitting")),
        Check::new("vertex cover recombination", vc_ok == trials, format!("{vc_ok}/{trials} optimal, feasible, transmitting")),
        Check::new("cover + independent set = |V'|", konig_ok == trials, format!("{konig_ok}/{trials}")),
    ])
}

/// Coordinate-aligned crossovers on random grid codes.
pub fn rotation(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = seeded(seed);
    let (mut mid, mut dist, mut worst) = (0, 0, 0.0f64);
    for _ in 0..trials {
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=8);
        let bounds: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let lo = rng.random_range(-10.0..10.0);
                (lo, lo + rng.random_range(0.5..20.0))
            })
            .collect();
        let code = BoxGridCode::new(k, bounds)?;
        let x: Vec<bool> = (0..code.len()).map(|_| rng.random()).collect();
        let y: Vec<bool> = (0..code.len()).map(|_| rng.random()).collect();
        let chi = k * rng.random_range(1..n);
        let rep = check_rotation_property(&code, &x, &y, chi)?;
        mid += rep.midpoint_fixed as usize;
        dist += (rep.distance_preserved && rep.radius_preserved) as usize;
        worst = worst.max(rep.max_relative_error);
    }
    Ok(vec![
        Check::new("midpoint preserved exactly", mid == trials, format!("{mid}/{trials}")),
        Check::new("distances preserved", dist == trials, format!("{dist}/{trials}, max relative error {worst:.3e}")),
    ])
}

/// Probabilistic tabu search reaches the optimum of OneMax and of random
/// two-peak landscapes with `n = 12`.
pub fn pts(runs: usize, budget: usize, seed: u64) -> Result<Vec<Check>> {
    let cfg = TabuConfig::new(5, 0.5, 1);
    let n = 12;
    let (mut onemax, mut peaks) = (0, 0);
    let mut slowest = 0;
    for k in 0..runs {
        let s = crate::rng::derive_seed(seed, k as u64);
        let term = Termination::new(Some(budget), None, None)?;
        let rec = tabu_search::<f64, _>(&OneMax::new(n), &cfg, &term.clone().with_target(n as f64), s)?;
        if let Some(t) = rec.first_hit_iteration {
            onemax += 1;
            slowest = slowest.max(t);
        }
        let landscape = TwoPeak::random(n, &mut stream(seed, k as u64))?;
        let rec = tabu_search::<f64, _>(&landscape, &cfg, &term.with_target(n as f64 + 1.0), s)?;
        if let Some(t) = rec.first_hit_iteration {
            peaks += 1;
            slowest = slowest.max(t);
        }
    }
    Ok(vec![
        Check::new("pts onemax", onemax == runs, format!("{onemax}/{runs} within {budget}")),
        Check::new("pts two peaks", peaks == runs, format!("{peaks}/{runs} within {budget}, slowest hit {slowest}")),
    ])
}

/// Operator classes of the KGA at `l = 3`, `N = 2`.
pub fn convergence_audit(samples: usize, seed: u64) -> Result<Vec<Check>> {
    let problem = PseudoBoolean::new(3, (1..=8).map(f64::from).collect())?;
    let kga = |p_m| OperatorSuite::new(Selection::Roulette, CrossoverKind::OnePoint, 0.5, MutationKind::Bernoulli, p_m);
    let mutating = ea_convergence_audit(&problem, &kga(0.1), StrategyKind::FullReplacement, 2, samples, seed)?;
    let frozen = ea_convergence_audit(&problem, &kga(0.0), StrategyKind::FullReplacement, 2, samples, seed)?;
    let elitist = ea_convergence_audit(&problem, &kga(0.1), StrategyKind::Elitist, 2, samples, seed)?;
    Ok(vec![
        Check::new("KGA P_m=0.1 reproduction positive", mutating.reproduce_positive, format!("{mutating:?}")),
        Check::new("KGA P_m=0 reproduction not connecting", !frozen.reproduce_connecting, format!("{frozen:?}")),
        Check::new("KGA survival not conservative", !mutating.survival_conservative, String::new()),
        Check::new("elitist survival conservative", elitist.survival_conservative, format!("{elitist:?}")),
    ])
}
