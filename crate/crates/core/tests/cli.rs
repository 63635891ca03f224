use std::path::Path;
use std::process::{Command, Output};

fn evokit(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_evokit"));
    cmd.args(args).env_remove("EVOKIT_SEED");
    if let Some(s) = env_seed {
        cmd.env("EVOKIT_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const ONEMAX: &str = r#"{
    "problem": {"kind": "one_max", "l": 20},
    "method": {"kind": "ea", "strategy": "elitist", "size": 16},
    "operators": {"selection": {"kind": "tournament", "size": 2}, "crossover": {"kind": "one_point"},
                  "p_c": 0.8, "mutation": {"kind": "bernoulli"}, "p_m": 0.05},
    "termination": {"max_iterations": 40},
    "seed": 12,
    "replications": 3,
    "output": "results"
}"#;

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn run_writes_trajectories_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("onemax.json");
    std::fs::write(&cfg, ONEMAX).unwrap();
    let out = evokit(&["run", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let files = read_all(&dir.path().join("results"));
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["run_1.csv", "run_2.csv", "run_3.csv", "summary.csv"]);
    let run = String::from_utf8(files[0].1.clone()).unwrap();
    assert!(run.starts_with("t,best_fitness,mean_fitness,distinct_genotypes\n"));
    assert_eq!(run.lines().count(), 42);
    assert!(run.ends_with('\n'));
    let summary = String::from_utf8(files[3].1.clone()).unwrap();
    assert!(summary.starts_with("seed,first_hit_iteration,final_best\n"));
    assert_eq!(summary.lines().count(), 4);

    // repeated invocation: byte-identical
    let again = dir.path().join("again");
    let out = evokit(&["run", cfg.to_str().unwrap(), "--output", again.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_all(&again), files);

    // the environment seed overrides the config seed
    let other = dir.path().join("other");
    let out = evokit(&["run", cfg.to_str().unwrap(), "--output", other.to_str().unwrap()], Some("99"));
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(read_all(&other)[3], files[3]);
}

#[test]
fn run_reads_graph_instances() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), "4 4\n1 2\n2 3 2\n3 4\n4 1\n").unwrap();
    let cfg = dir.path().join("cut.json");
    std::fs::write(
        &cfg,
        r#"{"problem": {"kind": "max_cut", "graph": "g.txt", "bijective": false},
            "method": {"kind": "ea", "strategy": "elitist", "size": 8},
            "operators": {"selection": {"kind": "roulette"}, "crossover": {"kind": "uniform"}, "p_c": 0.8,
                          "mutation": {"kind": "bernoulli"}, "p_m": 0.2},
            "termination": {"max_iterations": 30}}"#,
    )
    .unwrap();
    let out = evokit(&["run", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().ends_with(",5"), "{summary}");
}

#[test]
fn run_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = evokit(&["run", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, ONEMAX.replace("\"seed\"", "\"sead\"")).unwrap();
    assert_eq!(evokit(&["run", unknown.to_str().unwrap()], None).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    std::fs::write(
        &missing,
        r#"{"problem": {"kind": "tsp", "instance": "nowhere.txt"},
            "method": {"kind": "ea", "strategy": "elitist", "size": 4},
            "operators": {"selection": {"kind": "roulette"}, "crossover": {"kind": "pmx"}, "p_c": 0.8,
                          "mutation": {"kind": "exchange"}, "p_m": 0.2},
            "termination": {"max_iterations": 3}}"#,
    )
    .unwrap();
    let out = evokit(&["run", missing.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.txt"));

    assert_eq!(evokit(&["run", bad.to_str().unwrap()], Some("seven")).status.code(), Some(2));
}

#[test]
fn analyze_prints_library_values() {
    let out = evokit(&["analyze", "ga-ls", "--h", "16", "--L", "0.0625", "--eps", "0.5", "--r", "0.5"], None);
    assert_eq!(stdout(&out), "N=382 s=191\n");
    let out = evokit(&["analyze", "degeneration", "--a", "0.5", "--pm", "0.3", "--N", "8", "--csv"], None);
    let half = 0.5f64.powi(8);
    assert_eq!(stdout(&out), format!("p_all,p_none,p_total\n{half},{half},{}\n", 2.0 * half));
    let out = evokit(&["analyze", "copy-stats", "sus", "--Np", "2.5"], None);
    assert_eq!(stdout(&out), "mean=2.5 variance=0.25\n");
    let out = evokit(&["analyze", "tournament-pmf", "--N", "4", "--s", "2"], None);
    assert_eq!(stdout(&out), "rank=1 p=0.0625\nrank=2 p=0.1875\nrank=3 p=0.3125\nrank=4 p=0.4375\n");
    let out = evokit(&["analyze", "schema", "--pattern", "1*0", "--population", "100,110,011", "--fitness", "1,2,4"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("schema=1*0 order=2 defining_length=2 count=2 mean_fitness=1.5"));

    assert_eq!(evokit(&["analyze", "degeneration", "--a", "2", "--pm", "0.3", "--N", "8"], None).status.code(), Some(2));
    assert_eq!(evokit(&["analyze", "ga-ls", "--h", "16", "--L", "0.0625", "--eps", "1.5", "--r", "0.5"], None).status.code(), Some(2));
}

#[test]
fn verify_suites_and_exit_codes() {
    let out = evokit(&["verify", "rotation", "--trials", "100"], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS") || l.ends_with("0 failed")));
    let out = evokit(&["verify", "optrec", "--trials", "40", "--max-n", "12"], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = evokit(&["verify", "schema", "--M", "2000"], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(evokit(&["verify", "astrology"], None).status.code(), Some(2));
    assert_eq!(evokit(&["verify", "schema", "--M", "10"], None).status.code(), Some(2));
}
