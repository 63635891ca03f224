//! Command-line front end: `run` experiments from JSON configs, `analyze`
//! closed forms, `verify` statistical properties.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad configuration
//! or parameters, 3 instance or output I/O failure.

pub mod config;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{Genotype, Population};
use crate::theory::{
    analytic_copy_stats, degeneration_probabilities, ga_ls_parameters, schema_count, schema_theorem_bound, tournament_pmf,
    CopyStatsQuery, GaLsParams, Schema,
};
pub use config::{run_config, write_outputs, RunConfig};
pub use verify::Check;

/// Error with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<crate::error::Error> for CliError {
    fn from(e: crate::error::Error) -> Self {
        CliError::config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "evokit", version, about = "Evolutionary algorithms, tabu search and their analytic checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a JSON config and write CSV trajectories.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config's `output`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate an analytic formula.
    Analyze {
        #[command(subcommand)]
        what: Analyze,
        /// Print a CSV header and row instead of text.
        #[arg(long, global = true)]
        csv: bool,
    },
    /// Run a verification suite; exits with 1 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Verify,
        #[arg(long, global = true, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Representatives, mean fitness and growth bound of a schema.
    Schema {
        /// Pattern over {0, 1, *}, e.g. 11**0.
        #[arg(long)]
        pattern: String,
        /// Comma-separated bit strings.
        #[arg(long)]
        population: String,
        /// Comma-separated fitness values; the number of ones when omitted.
        #[arg(long)]
        fitness: Option<String>,
        #[arg(long = "pc", default_value_t = 0.0)]
        p_c: f64,
        #[arg(long = "pm", default_value_t = 0.0)]
        p_m: f64,
    },
    /// Probabilities that an allele takes over or vanishes in one generation.
    Degeneration {
        #[arg(long)]
        a: f64,
        #[arg(long = "pm")]
        p_m: f64,
        #[arg(long = "N", alias = "n")]
        n: usize,
    },
    /// Mean and variance of the number of copies of one individual.
    CopyStats(CopyStatsArgs),
    /// Population and tournament size of the GA that works as a local search.
    GaLs {
        #[arg(long)]
        h: f64,
        #[arg(long = "L", alias = "l")]
        l_min: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        r: f64,
    },
    /// Probability that each rank wins a tournament.
    TournamentPmf {
        #[arg(long = "N", alias = "n")]
        n: usize,
        #[arg(long)]
        s: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CopyKind {
    Roulette,
    Sus,
    Tournament2,
    RankRoulette,
}

#[derive(Debug, Args)]
pub struct CopyStatsArgs {
    kind: CopyKind,
    /// Population size (SUS: defaults to max(2, ceil(Np))).
    #[arg(long = "N", alias = "n")]
    n: Option<usize>,
    /// Fitness share (roulette).
    #[arg(long)]
    p: Option<f64>,
    /// Expected count (SUS).
    #[arg(long = "Np", alias = "np")]
    np: Option<f64>,
    /// Rank, 1 = worst (tournament2, rank-roulette).
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    Schema {
        #[arg(long = "M", alias = "trials", default_value_t = 10_000)]
        trials: usize,
    },
    Degeneration {
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
    },
    Selection {
        #[arg(long, default_value_t = 100_000)]
        rounds: usize,
    },
    GaLs {
        #[arg(long, default_value_t = 100)]
        runs: usize,
    },
    Optrec {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 16)]
        max_n: usize,
    },
    Rotation {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    Pts {
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    ConvergenceAudit {
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
    },
}

/// Lines of an analysis: header/value pairs.
type Table = Vec<(String, String)>;

fn row(pairs: &[(&str, String)]) -> Table {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::config(format!("bad {what} entry {t:?}"))))
        .collect()
}

/// Evaluates one analysis; every value is the library result printed with
/// round-trip precision.
pub fn analyze(what: &Analyze) -> Result<Vec<Table>, CliError> {
    Ok(match what {
        Analyze::Schema { pattern, population, fitness, p_c, p_m } => {
            let schema: Schema = pattern.parse()?;
            let members: Vec<Genotype<f64>> = population
                .split(',')
                .map(|s| {
                    s.trim()
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(CliError::config(format!("bad bit string {s:?}"))),
                        })
                        .collect::<Result<Vec<bool>, _>>()
                        .map(Genotype::Binary)
                })
                .collect::<Result<_, _>>()?;
            let fitness: Vec<f64> = match fitness {
                Some(f) => parse_list(f, "fitness")?,
                None => members.iter().map(|g| g.as_binary().map(|x| x.iter().filter(|&&b| b).count() as f64)).collect::<Result<_, _>>()?,
            };
            let pop = Population::with_fitness(members, fitness)?;
            let stats = schema_count(&schema, &pop)?;
            let bound = schema_theorem_bound(&schema, &pop, *p_c, *p_m)?;
            vec![row(&[
                ("schema", schema.to_string()),
                ("order", schema.order().to_string()),
                ("defining_length", schema.defining_length().to_string()),
                ("count", stats.count.to_string()),
                ("mean_fitness", stats.mean_fitness.map(|m| m.to_string()).unwrap_or_default()),
                ("bound", bound.to_string()),
            ])]
        }
        Analyze::Degeneration { a, p_m, n } => {
            if !(0.0..=1.0).contains(a) || !(0.0..=1.0).contains(p_m) || *n == 0 {
                return Err(CliError::config("need a, pm in [0, 1] and N >= 1"));
            }
            let d = degeneration_probabilities(*a, *p_m, *n);
            vec![row(&[("p_all", d.p_all.to_string()), ("p_none", d.p_none.to_string()), ("p_total", d.p_total.to_string())])]
        }
        Analyze::CopyStats(args) => {
            let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| CliError::config(format!("--{flag} is required")));
            let needr = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::config(format!("--{flag} is required")));
            let q = match args.kind {
                CopyKind::Roulette => CopyStatsQuery::Roulette { n: needr(args.n, "N")?, p: need(args.p, "p")? },
                CopyKind::Sus => {
                    let np = need(args.np, "Np")?;
                    let n = args.n.unwrap_or_else(|| (np.ceil().max(2.0)) as usize);
                    CopyStatsQuery::Sus { n, np }
                }
                CopyKind::Tournament2 => CopyStatsQuery::Tournament2 { n: needr(args.n, "N")?, r: needr(args.r, "r")? },
                CopyKind::RankRoulette => CopyStatsQuery::RankRoulette { n: needr(args.n, "N")?, r: needr(args.r, "r")? },
            };
            let (mean, variance) = analytic_copy_stats(q)?;
            vec![row(&[("mean", mean.to_string()), ("variance", variance.to_string())])]
        }
        Analyze::GaLs { h, l_min, eps, r } => {
            let (n, s) = ga_ls_parameters(GaLsParams { h: *h, l_min: *l_min, eps: *eps, r: *r })?;
            vec![row(&[("N", n.to_string()), ("s", s.to_string())])]
        }
        Analyze::TournamentPmf { n, s } => {
            if *n == 0 || *s == 0 {
                return Err(CliError::config("need N >= 1 and s >= 1"));
            }
            tournament_pmf(*n, *s).iter().enumerate().map(|(r, p)| row(&[("rank", (r + 1).to_string()), ("p", p.to_string())])).collect()
        }
    })
}

fn render(tables: &[Table], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        if let Some(first) = tables.first() {
            out += &first.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",");
            out.push('\n');
        }
        for t in tables {
            out += &t.iter().map(|(_, v)| v.as_str()).collect::<Vec<_>>().join(",");
            out.push('\n');
        }
    } else {
        for t in tables {
            out += &t.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
            out.push('\n');
        }
    }
    out
}

pub fn run_verify(suite: &Verify, seed: u64) -> Result<Vec<Check>, CliError> {
    Ok(match *suite {
        Verify::Schema { trials } => verify::schema(trials, seed)?,
        Verify::Degeneration { trials } => verify::degeneration(trials, seed)?,
        Verify::Selection { rounds } => verify::selection(rounds, seed)?,
        Verify::GaLs { runs } => verify::ga_ls(runs, seed)?,
        Verify::Optrec { trials, max_n } => {
            if max_n > 20 {
                return Err(CliError::config("--max-n above 20 is too large for the exhaustive oracle"));
            }
            verify::optrec(trials, max_n, seed)?
        }
        Verify::Rotation { trials } => verify::rotation(trials, seed)?,
        Verify::Pts { runs, budget } => verify::pts(runs, budget, seed)?,
        Verify::ConvergenceAudit { samples } => verify::convergence_audit(samples, seed)?,
    })
}

/// Executes `run` with the seed override applied.
pub fn cmd_run(config: &Path, output: Option<&Path>, seed_override: Option<u64>) -> Result<PathBuf, CliError> {
    let text = std::fs::read_to_string(config).map_err(|e| CliError::config(format!("{}: {e}", config.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let base = config.parent().unwrap_or(Path::new("."));
    let records = run_config(&cfg, base)?;
    let out = output.map_or_else(|| base.join(&cfg.output), Path::to_path_buf);
    write_outputs(&records, &out)?;
    Ok(out)
}

fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var("EVOKIT_SEED") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::config(format!("EVOKIT_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| CliError::io(e.to_string());
    match cli.command {
        Command::Run { config, output } => {
            let out = cmd_run(&config, output.as_deref(), seed_from_env()?)?;
            writeln!(stdout, "wrote {}", out.display()).map_err(io)?;
            Ok(true)
        }
        Command::Analyze { what, csv } => {
            stdout.write_all(render(&analyze(&what)?, csv).as_bytes()).map_err(io)?;
            Ok(true)
        }
        Command::Verify { suite, seed } => {
            let checks = run_verify(&suite, seed)?;
            for c in &checks {
                writeln!(stdout, "{c}").map_err(io)?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(stdout, "{} checks, {failed} failed", checks.len()).map_err(io)?;
            Ok(failed == 0)
        }
    }
}

/// Parses arguments and runs; the binary's whole body.
pub fn main_from_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("evokit: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
