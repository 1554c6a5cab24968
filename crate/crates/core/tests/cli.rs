use std::path::Path;

use dirac_ham::cli::run_command;
use dirac_ham::generators as gen;
use dirac_ham::graph::{verify_hamilton_cycle, Graph};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dirac-ham").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    assert_eq!(r.code, 0, "stderr: {}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> String {
    let p = dir.join(name);
    std::fs::write(&p, g.to_text()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn ham_on_a_five_cycle_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_graph(dir.path(), "c5.txt", &gen::cycle(5));
    let v = json(&run(&["ham", "--graph", &f, "--seed", "1"]));
    assert_eq!(v["found"], true);
    let seq: Vec<usize> = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(verify_hamilton_cycle(&gen::cycle(5), &seq));
    assert!(v["steps"].as_u64().is_some() && v["restarts"].as_u64().is_some());
}

#[test]
fn ham_path_and_oracle() {
    let v = json(&run(&["ham", "--graph", "K6", "--seed", "2", "--path", "0", "5"]));
    let seq: Vec<usize> = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert_eq!((seq.len(), seq[0], seq[5]), (6, 0, 5));
    let v = json(&run(&["ham", "--graph", "K5,4", "--oracle"]));
    assert_eq!(v["found"], false);
    let v = json(&run(&["oracle", "--graph", "K4,4"]));
    assert_eq!(v["hamiltonian"], true);
    let r = run(&["oracle", "--graph", "K21"]);
    assert_eq!(r.code, 1);
}

#[test]
fn classify_k12_exact_is_dense_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_graph(dir.path(), "k12.txt", &gen::complete(12));
    let v = json(&run(&[
        "classify", "--graph", &f, "--alpha", "0.003125", "--gamma", "0.1", "--mode", "exact",
    ]));
    assert_eq!(v["classification"]["case"], "DenseCrossing");
}

#[test]
fn sweep_writes_four_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_graph(dir.path(), "k100.txt", &gen::complete(100));
    let out = dir.path().join("results.csv");
    let args = [
        "sweep",
        "--graph",
        &f,
        "--pgrid",
        "1,2,4,8",
        "--pgrid-unit",
        "clogn",
        "--trials",
        "200",
        "--seed",
        "7",
        "--restarts",
        "2",
        "--budget",
        "20000",
        "--out",
        out.to_str().unwrap(),
    ];
    let r = run(&args);
    assert_eq!(r.code, 0, "{}", r.err);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "p",
            "trials",
            "successes",
            "phat",
            "wilson95_lo",
            "wilson95_hi",
            "mean_steps"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    let phat: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(phat[3] > 0.9 && phat[0] < 0.1, "{phat:?}");
}

#[test]
fn replay_determinism_of_output_bytes() {
    let cases: [&[&str]; 4] = [
        &[
            "classify", "--graph", "2K8M", "--alpha", "0.003125", "--gamma", "0.1", "--mode", "local", "--seed", "5",
        ],
        &["ham", "--graph", "2K7B", "--seed", "9"],
        &[
            "sweep",
            "--graph",
            "K20",
            "--pgrid",
            "0.2,0.4",
            "--trials",
            "30",
            "--seed",
            "4",
            "--restarts",
            "3",
            "--budget",
            "5000",
        ],
        &[
            "play",
            "--graph",
            "2K6M",
            "--bias",
            "1",
            "--breaker",
            "random",
            "--seed",
            "11",
        ],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.err);
        assert_eq!(a.out, b.out, "{args:?}");
    }
}

#[test]
fn missing_seed_is_generated_and_printed() {
    let r = run(&["ham", "--graph", "K7"]);
    assert_eq!(r.code, 0);
    let line = r.err.lines().find(|l| l.starts_with("seed: ")).expect("seed line");
    let seed: u64 = line["seed: ".len()..].parse().unwrap();
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["seed"], seed);
}

#[test]
fn play_writes_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let v = json(&run(&[
        "play",
        "--graph",
        "K8",
        "--bias",
        "1:2",
        "--maker",
        "dirac",
        "--breaker",
        "greedy-block",
        "--seed",
        "1",
        "--transcript",
        t.to_str().unwrap(),
    ]));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(doc["winner"], v["winner"]);
    let moves = doc["moves"].as_array().unwrap();
    assert_eq!(moves.len() as u64, v["moves"].as_u64().unwrap());
    assert_eq!(moves[0][0], "maker");
    assert_eq!(moves[1][0], "breaker");
    assert_eq!(moves[1][2], 1);
    assert!(doc["maker_claims"].as_array().is_some());
    if v["winner"] == "maker" {
        let seq: Vec<usize> = serde_json::from_value(v["certificate"].clone()).unwrap();
        assert!(verify_hamilton_cycle(&gen::complete(8), &seq));
    }

    // family-based strategies report the potential
    let t2 = dir.path().join("t2.json");
    let v = json(&run(&[
        "play",
        "--graph",
        "K6",
        "--bias",
        "1:1",
        "--maker",
        "random",
        "--breaker",
        "potential",
        "--seed",
        "2",
        "--transcript",
        t2.to_str().unwrap(),
    ]));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&t2).unwrap()).unwrap();
    assert_eq!(
        doc["potentials"].as_array().unwrap().len() as u64,
        v["moves"].as_u64().unwrap()
    );
}

#[test]
fn ham_bip_and_expcheck() {
    let dir = tempfile::tempdir().unwrap();
    // K_{5,4} plus the special edge 0-1 inside the larger side
    let g = gen::complete_bipartite(5, 4).with_edges(&[(0, 1)]);
    let f = write_graph(dir.path(), "g.txt", &g);
    let part = dir.path().join("v1.txt");
    std::fs::write(&part, "0 1 2 3 4\n").unwrap();
    let p = part.to_str().unwrap();
    let v = json(&run(&[
        "ham-bip",
        "--graph",
        &f,
        "--part",
        p,
        "--special",
        "0-1",
        "--seed",
        "3",
    ]));
    assert_eq!(v["found"], true);
    let seq: Vec<usize> = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(verify_hamilton_cycle(&g, &seq));

    // without the special edge the frame is unbalanced
    let r = run(&["ham-bip", "--graph", &f, "--part", p, "--seed", "3"]);
    assert_eq!(r.code, 1);

    let v = json(&run(&[
        "expcheck", "--graph", "K8", "--kind", "plain", "--eps", "0.5", "--r", "1", "--mode", "exact",
    ]));
    assert!(v["report"]["verdict"].is_string());
    let v = json(&run(&[
        "expcheck",
        "--graph",
        &f,
        "--kind",
        "bip",
        "--eps",
        "0.5",
        "--r",
        "1",
        "--part",
        p,
        "--special",
        "0-1",
    ]));
    assert_eq!(v["report"]["kind"], "bip");
    let v = json(&run(&[
        "expcheck",
        "--graph",
        "K30",
        "--kind",
        "half",
        "--eps",
        "0.5",
        "--r",
        "2",
        "--mode",
        "sampled",
        "--samples",
        "200",
        "--seed",
        "1",
    ]));
    assert_ne!(v["report"]["verdict"], "holds");
}

#[test]
fn hall_violation_reports_the_violator() {
    let dir = tempfile::tempdir().unwrap();
    // V2 = {3, 4, 5} hangs off vertex 0 only, so V1' cannot be matched
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    let f = write_graph(dir.path(), "g.txt", &g);
    let part = dir.path().join("v1.txt");
    std::fs::write(&part, "0,1,2").unwrap();
    let r = run(&["ham-bip", "--graph", &f, "--part", part.to_str().unwrap()]);
    assert_eq!(r.code, 1, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert!(!v["violator"].as_array().unwrap().is_empty());
    assert_eq!(v["code"], 9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["bogus"]).code, 2);
    assert_eq!(run(&["ham"]).code, 2);
    assert_eq!(run(&["ham", "--graph", "no-such-file"]).code, 2);
    assert_eq!(run(&["sweep", "--graph", "K5", "--pgrid", "a,b"]).code, 2);
    assert_eq!(run(&["play", "--graph", "K6", "--bias", "0"]).code, 2);
    assert_eq!(
        run(&["play", "--graph", "K6", "--bias", "1", "--maker", "greedy-block"]).code,
        2
    );
    assert_eq!(run(&["serve", "--addr", "0.0.0.0:9"]).code, 2);
    assert_eq!(run(&["classify", "--graph", "P5", "--seed", "1"]).code, 1);
    assert_eq!(run(&["classify", "--graph", "K12", "--alpha", "0.5"]).code, 1);
    assert_eq!(run(&["sweep", "--graph", "K5", "--pgrid", "1.5"]).code, 1);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("sweep"));
}
