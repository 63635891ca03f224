//! JSON run configuration and the `run` command.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Deserialize;

use super::CliError;
use crate::engine::{run_ea, Problem, RunRecord, Termination};
use crate::gp::{ExprTree, GpConfig, GpMutation};
use crate::graph::Graph;
use crate::localsearch::{local_search_run, tabu_search, TabuConfig};
use crate::problems::{IntFunction, Ilp, MaxCut, OneMax, PseudoBoolean, Sphere, Spl, SymbolicRegression, Tsp, TwoPeak};
use crate::rng::derive_seed;
use crate::selection::Selection;
use crate::strategies::{StrategyConfig, StrategyKind, VictimPolicy};
use crate::variation::{CrossoverKind, MutationKind, OperatorSuite};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub method: MethodSpec,
    #[serde(default)]
    pub operators: Option<OperatorSpec>,
    pub termination: TerminationSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub replications: usize,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Instance paths are resolved against the directory of the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    OneMax {
        l: usize,
    },
    TwoPeak {
        local: String,
        global: String,
    },
    PseudoBoolean {
        table: Vec<f64>,
    },
    /// `f` is a prefix expression in `x` (or `x0`), e.g. `(* x (- 31 x))`.
    IntFunction {
        a: i64,
        b: i64,
        f: String,
    },
    MaxCut {
        graph: PathBuf,
        #[serde(default)]
        bijective: bool,
    },
    Ilp {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: Vec<f64>,
        d: Vec<u64>,
        #[serde(default)]
        penalty: Option<f64>,
    },
    Spl {
        open_cost: Vec<f64>,
        service: Vec<Vec<f64>>,
    },
    /// City coordinates inline or from a file of `x y` lines.
    Tsp {
        #[serde(default)]
        points: Option<Vec<(f64, f64)>>,
        #[serde(default)]
        instance: Option<PathBuf>,
    },
    Sphere {
        bounds: Vec<(f64, f64)>,
    },
    SymbolicRegression {
        target: String,
        inputs: Vec<Vec<f64>>,
        #[serde(default)]
        constants: Option<Vec<f64>>,
        #[serde(default)]
        max_size: Option<usize>,
        #[serde(default)]
        max_depth: Option<usize>,
        #[serde(default)]
        terminal_mutation: bool,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodSpec {
    Ea {
        strategy: StrategyKind,
        size: usize,
        #[serde(default)]
        lambda: Option<usize>,
        #[serde(default)]
        victim: VictimPolicy,
        #[serde(default = "yes")]
        reject_duplicates: bool,
    },
    Tabu {
        tabu_len: usize,
        p: f64,
        #[serde(default = "one")]
        radius: usize,
        #[serde(default = "yes")]
        keep_list_on_empty: bool,
    },
    LocalSearch {
        #[serde(default = "one")]
        radius: usize,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub selection: Selection,
    pub crossover: CrossoverKind,
    pub p_c: f64,
    pub mutation: MutationKind,
    pub p_m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerminationSpec {
    #[serde(default)]
    pub max_iterations: Option<usize>,
    #[serde(default)]
    pub max_stagnation: Option<usize>,
    #[serde(default)]
    pub target_fitness: Option<f64>,
}

/// A problem instance ready to run.
#[derive(Debug)]
pub enum Built {
    OneMax(OneMax),
    TwoPeak(TwoPeak),
    PseudoBoolean(PseudoBoolean<f64>),
    IntFunction(IntFunction<f64>),
    MaxCut(MaxCut),
    Ilp(Ilp<f64>),
    Spl(Spl<f64>),
    Tsp(Tsp<f64>),
    Sphere(Sphere<f64>),
    SymbolicRegression(SymbolicRegression<f64>),
}

macro_rules! with_problem {
    ($built:expr, $p:ident => $body:expr) => {
        match $built {
            Built::OneMax($p) => $body,
            Built::TwoPeak($p) => $body,
            Built::PseudoBoolean($p) => $body,
            Built::IntFunction($p) => $body,
            Built::MaxCut($p) => $body,
            Built::Ilp($p) => $body,
            Built::Spl($p) => $body,
            Built::Tsp($p) => $body,
            Built::Sphere($p) => $body,
            Built::SymbolicRegression($p) => $body,
        }
    };
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::config(e.to_string())
}

fn read_instance(base: &Path, path: &Path) -> Result<String, CliError> {
    let full = base.join(path);
    fs::read_to_string(&full).map_err(|e| CliError::io(format!("{}: {e}", full.display())))
}

fn parse_bits(s: &str) -> Result<Vec<bool>, CliError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::config(format!("bit string {s:?} may contain only 0 and 1"))),
        })
        .collect()
}

fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut pts = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let v: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| CliError::io(format!("bad coordinate {t:?}"))))
            .collect::<Result<_, _>>()?;
        match v[..] {
            [x, y] => pts.push((x, y)),
            _ => return Err(CliError::io(format!("coordinate line {line:?} must be \"x y\""))),
        }
    }
    Ok(pts)
}

impl ProblemSpec {
    pub fn build(&self, base: &Path) -> Result<Built, CliError> {
        Ok(match self {
            ProblemSpec::OneMax { l } => {
                if *l == 0 {
                    return Err(CliError::config("l must be at least 1"));
                }
                Built::OneMax(OneMax::new(*l))
            }
            ProblemSpec::TwoPeak { local, global } => {
                Built::TwoPeak(TwoPeak::new(parse_bits(local)?, parse_bits(global)?).map_err(config_err)?)
            }
            ProblemSpec::PseudoBoolean { table } => {
                let l = table.len().trailing_zeros() as usize;
                if !table.len().is_power_of_two() {
                    return Err(CliError::config("table length must be a power of two"));
                }
                Built::PseudoBoolean(PseudoBoolean::new(l, table.clone()).map_err(config_err)?)
            }
            ProblemSpec::IntFunction { a, b, f } => {
                let expr: ExprTree<f64> = f.parse().map_err(config_err)?;
                expr.eval(&[0.0]).map_err(config_err)?;
                Built::IntFunction(IntFunction::new(*a, *b, move |x| expr.eval(&[x as f64]).unwrap_or(0.0).max(0.0)).map_err(config_err)?)
            }
            ProblemSpec::MaxCut { graph, bijective } => {
                let g = Graph::parse_edge_list(&read_instance(base, graph)?).map_err(|e| CliError::io(e.to_string()))?;
                Built::MaxCut(MaxCut::new(g, *bijective).map_err(config_err)?)
            }
            ProblemSpec::Ilp { a, b, c, d, penalty } => {
                Built::Ilp(Ilp::new(a.clone(), b.clone(), c.clone(), d.clone(), *penalty).map_err(config_err)?)
            }
            ProblemSpec::Spl { open_cost, service } => {
                Built::Spl(Spl::new(open_cost.clone(), service.clone()).map_err(config_err)?)
            }
            ProblemSpec::Tsp { points, instance } => {
                let pts = match (points, instance) {
                    (Some(p), None) => p.clone(),
                    (None, Some(path)) => parse_points(&read_instance(base, path)?)?,
                    _ => return Err(CliError::config("tsp needs exactly one of points and instance")),
                };
                Built::Tsp(Tsp::from_points(&pts).map_err(config_err)?)
            }
            ProblemSpec::Sphere { bounds } => {
                if bounds.is_empty() || bounds.iter().any(|(lo, hi)| !(lo < hi)) {
                    return Err(CliError::config("sphere bounds must be non-empty intervals lo < hi"));
                }
                Built::Sphere(Sphere::new(bounds.clone()))
            }
            ProblemSpec::SymbolicRegression { target, inputs, constants, max_size, max_depth, terminal_mutation } => {
                let target: ExprTree<f64> = target.parse().map_err(config_err)?;
                let n_vars = inputs.first().map_or(0, Vec::len);
                let mut cfg = GpConfig::default_for(n_vars);
                if let Some(c) = constants {
                    cfg.constants = c.clone();
                }
                cfg.max_size = max_size.unwrap_or(cfg.max_size);
                cfg.max_depth = max_depth.unwrap_or(cfg.max_depth);
                if *terminal_mutation {
                    cfg.mutation = GpMutation::Terminal;
                }
                Built::SymbolicRegression(SymbolicRegression::from_target(&target, inputs.clone(), cfg).map_err(config_err)?)
            }
        })
    }
}

impl TerminationSpec {
    pub fn build(&self) -> Result<Termination<f64>, CliError> {
        Termination::new(self.max_iterations, self.max_stagnation, self.target_fitness).map_err(config_err)
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::config(format!("config: {e}")))?;
        if cfg.replications == 0 {
            return Err(CliError::config("replications must be at least 1"));
        }
        Ok(cfg)
    }

    fn suite(&self, built: &Built) -> Result<OperatorSuite<f64>, CliError> {
        let ops = self.operators.as_ref().ok_or_else(|| CliError::config("an EA needs \"operators\""))?;
        let mut suite = OperatorSuite::new(ops.selection.clone(), ops.crossover, ops.p_c, ops.mutation, ops.p_m);
        if let Built::SymbolicRegression(p) = built {
            suite = suite.with_gp(p.cfg.clone());
        }
        Ok(suite)
    }
}

fn replicate<P: Problem<f64>>(
    problem: &P,
    method: &MethodSpec,
    suite: Option<&OperatorSuite<f64>>,
    term: &Termination<f64>,
    seed: u64,
) -> crate::error::Result<RunRecord<f64>> {
    match method {
        MethodSpec::Ea { strategy, size, lambda, victim, reject_duplicates } => {
            let mut cfg = StrategyConfig::new(*strategy, *size);
            cfg.lambda = lambda.unwrap_or(*size);
            cfg.victim = *victim;
            cfg.reject_duplicates = *reject_duplicates;
            run_ea(problem, &cfg, suite.expect("suite built for EA methods"), term, seed)
        }
        MethodSpec::Tabu { tabu_len, p, radius, keep_list_on_empty } => {
            let cfg = TabuConfig { tabu_len: *tabu_len, p: *p, radius: *radius, keep_list_on_empty: *keep_list_on_empty };
            tabu_search(problem, &cfg, term, seed)
        }
        MethodSpec::LocalSearch { radius } => local_search_run(problem, *radius, seed),
    }
}

/// Renders a trajectory as CSV.
pub fn trajectory_csv(rec: &RunRecord<f64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "best_fitness", "mean_fitness", "distinct_genotypes"]).expect("in-memory write");
    for p in &rec.trajectory {
        w.write_record([p.t.to_string(), p.best_fitness.to_string(), p.mean_fitness.to_string(), p.distinct_genotypes.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn summary_csv(records: &[RunRecord<f64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["seed", "first_hit_iteration", "final_best"]).expect("in-memory write");
    for r in records {
        let hit = r.first_hit_iteration.map(|t| t.to_string()).unwrap_or_default();
        w.write_record([r.seed.to_string(), hit, r.incumbent_fitness.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Runs every replication of a parsed config. Replication `r` uses seed
/// `derive_seed(seed, r)`; replications run on worker threads.
pub fn run_config(cfg: &RunConfig, base: &Path) -> Result<Vec<RunRecord<f64>>, CliError> {
    let built = cfg.problem.build(base)?;
    let term = cfg.termination.build()?;
    let suite = match cfg.method {
        MethodSpec::Ea { .. } => Some(cfg.suite(&built)?),
        _ => None,
    };
    let slots: Vec<Mutex<Option<crate::error::Result<RunRecord<f64>>>>> =
        (0..cfg.replications).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cfg.replications);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let r = next.fetch_add(1, Ordering::Relaxed);
                if r >= cfg.replications {
                    break;
                }
                let seed = derive_seed(cfg.seed, r as u64);
                let out = with_problem!(&built, p => replicate(p, &cfg.method, suite.as_ref(), &term, seed));
                *slots[r].lock().expect("slot lock") = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("slot lock").expect("every replication ran").map_err(config_err))
        .collect()
}

/// Writes `run_<r>.csv` (one-based) and `summary.csv` into `out`.
pub fn write_outputs(records: &[RunRecord<f64>], out: &Path) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::io(format!("{}: {e}", out.display()));
    fs::create_dir_all(out).map_err(io)?;
    for (r, rec) in records.iter().enumerate() {
        fs::write(out.join(format!("run_{}.csv", r + 1)), trajectory_csv(rec)).map_err(io)?;
    }
    fs::write(out.join("summary.csv"), summary_csv(records)).map_err(io)
}
