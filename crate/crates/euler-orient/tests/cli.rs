//! End-to-end tests of the binary: exit codes, schema-valid JSON, CSV mode,
//! cap handling, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

use euler_orient::schema::{self, Kind};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_euler-orient"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n--- stdout ---\n{}\n--- stderr ---\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn gen_then_count_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k5.txt");
    let gen = run(&["gen", "--spec", "complete:5", "--out", out.to_str().unwrap()]);
    assert!(gen.status.success());
    let doc = stdout_json(&gen);
    schema::validate(Kind::Gen, &doc).unwrap();
    assert_eq!(doc["m"], 10);

    let count = run(&["count", "--in", out.to_str().unwrap()]);
    assert!(count.status.success());
    let doc = stdout_json(&count);
    schema::validate(Kind::Count, &doc).unwrap();
    assert_eq!(doc["eo_backtrack"], "24");
    assert_eq!(doc["eo_dp"], "24");
    assert_eq!(doc["agree"], true);
}

#[test]
fn estimate_json_is_schema_valid() {
    let dir = tempfile::tempdir().unwrap();
    let k7 = dir.path().join("k7.txt");
    assert!(run(&["gen", "--spec", "complete:7", "--out", k7.to_str().unwrap()])
        .status
        .success());
    let est = run(&[
        "estimate",
        "--in",
        k7.to_str().unwrap(),
        "--methods",
        "theta,mckay_kn,bounds",
    ]);
    assert!(est.status.success());
    let doc = stdout_json(&est);
    schema::validate(Kind::Estimate, &doc).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4); // theta, mckay, bounds_lower, bounds_upper
    let theta = &reports[0];
    let ratio = theta["ratio"].as_f64().unwrap();
    assert!((ratio - 0.79).abs() < 0.02, "theta ratio {ratio}");
}

#[test]
fn estimate_csv_has_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_graph(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n");
    let est = run(&["estimate", "--in", &c4, "--methods", "theta", "--format", "csv"]);
    assert!(est.status.success());
    let text = String::from_utf8(est.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("graph_id,"));
    let row = lines.next().unwrap();
    assert!(row.contains("theta"), "{row}");
    assert!(row.contains('≈'), "approx column should be marked: {row}");
}

#[test]
fn mc_output_validates_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write_graph(dir.path(), "k3.txt", "3 3\n0 1\n1 2\n0 2\n");
    let args = [
        "mc", "--in", &k3, "--method", "uniform_S", "--samples", "50000", "--seed", "9",
    ];
    let a = run(&args);
    assert!(a.status.success());
    let doc = stdout_json(&a);
    schema::validate(Kind::Mc, &doc).unwrap();
    assert_eq!(doc["result"]["method"], "uniform_S");
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout, "identical manifests must give identical bytes");
}

#[test]
fn thread_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write_graph(
        dir.path(),
        "k5.txt",
        "5 10\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n",
    );
    let base = [
        "mc", "--in", &k5, "--method", "gaussian_Int", "--samples", "60000", "--seed", "4",
        "--epsilon", "0.1",
    ];
    let one = bin().args(base).arg("--threads").arg("1").output().unwrap();
    let four = bin().args(base).arg("--threads").arg("4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    // the verify pipeline reduces per-instance reports in order too
    let v1 = run(&["verify", "--suite", "fiedler", "--corpus", "complete:6", "--threads", "1"]);
    let v4 = run(&["verify", "--suite", "fiedler", "--corpus", "complete:6", "--threads", "4"]);
    assert!(v1.status.success());
    assert_eq!(v1.stdout, v4.stdout);
}

#[test]
fn thread_env_var_is_honored_and_harmless() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write_graph(
        dir.path(),
        "k5.txt",
        "5 10\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n",
    );
    let plain = run(&["count", "--in", &k5]);
    let with_env = bin()
        .args(["count", "--in", &k5])
        .env("EULER_ORIENT_THREADS", "2")
        .output()
        .unwrap();
    assert!(with_env.status.success());
    assert_eq!(plain.stdout, with_env.stdout);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();

    // 1: malformed input
    let bad = write_graph(dir.path(), "bad.txt", "2 1\n0 0\n");
    let out = run(&["count", "--in", &bad]);
    assert_eq!(out.status.code(), Some(1));

    // 1: unknown flag / usage
    let out = run(&["count", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));

    // 3: resource cap (K10 has 45 > 40 edges)
    let k10 = dir.path().join("k10.txt");
    assert!(run(&["gen", "--spec", "complete:10", "--out", k10.to_str().unwrap()])
        .status
        .success());
    let out = run(&["count", "--in", k10.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // 0: help
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_cosbound_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("verify.json");
    let out = run(&[
        "verify",
        "--suite",
        "cosbound",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    schema::validate(Kind::Verify, &doc).unwrap();
    assert_eq!(doc["violations"], 0);
}

#[test]
fn verify_accepts_files_and_specs_as_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write_graph(dir.path(), "c6.txt", "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n");
    let out = run(&[
        "verify", "--suite", "fiedler", "--corpus", &c6, "--corpus", "complete:5",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["violations"], 0);
}

#[test]
fn gen_random_with_gamma_floor_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("r1.txt");
    let p2 = dir.path().join("r2.txt");
    for p in [&p1, &p2] {
        let out = run(&[
            "gen", "--spec", "random:9:40:0.3", "--seed", "7", "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let doc = stdout_json(&out);
        let gamma = doc["gamma"].as_f64().unwrap();
        assert!(gamma >= 0.3, "gamma {gamma}");
    }
    assert_eq!(
        std::fs::read(&p1).unwrap(),
        std::fs::read(&p2).unwrap(),
        "same seed must give the same file"
    );
}

#[test]
fn mc_rejects_method_epsilon_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write_graph(dir.path(), "k3.txt", "3 3\n0 1\n1 2\n0 2\n");
    let out = run(&[
        "mc", "--in", &k3, "--method", "uniform_S", "--samples", "10", "--epsilon", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
