//! Runs the `qap` binary end to end in a scratch directory.

use std::path::Path;
use std::process::Command;

fn qap(dir: &Path, args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qap")).current_dir(dir).args(args).output().unwrap();
    assert!(out.status.success(), "qap {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gen_show_formulate_gas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qap(d, &["gen", "--n", "4", "--seed", "5", "--out", "i.dat"]);
    let shown = qap(d, &["show", "i.dat"]);
    assert!(shown.contains("n 4") && shown.contains("optimum"));
    for kind in ["qubo-h", "qubo-d", "hubo-hw"] {
        qap(d, &["formulate", "--kind", kind, "--in", "i.dat", "--out", "form.json"]);
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("form.json")).unwrap()).unwrap();
        assert_eq!(json["kind"], kind);
        assert_eq!(json["n"], 4);
        assert!(json["terms"].as_array().unwrap().iter().all(|t| t["vars"].is_array() && t["coeff"].is_number()));
        assert_eq!(json["code_table"].is_array(), kind == "hubo-hw");

        qap(d, &["gas", "--kind", kind, "--in", "i.dat", "--runs", "10", "--seed", "3", "--csv", "runs.csv"]);
        let csv = std::fs::read_to_string(d.join("runs.csv")).unwrap();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("run_id,queries,iterations,found_value"));
        assert_eq!(lines.count(), 10);
    }
}

#[test]
fn gas_replays_with_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qap(d, &["gen", "--n", "3", "--seed", "1", "--out", "i.dat"]);
    let a = qap(d, &["gas", "--kind", "hubo-hw", "--in", "i.dat", "--runs", "20", "--seed", "9"]);
    let b = qap(d, &["gas", "--kind", "hubo-hw", "--in", "i.dat", "--runs", "20", "--seed", "9"]);
    assert_eq!(a, b);
}

#[test]
fn simulate_demo_reads_out_energies() {
    let dir = tempfile::tempdir().unwrap();
    let out = qap(dir.path(), &["simulate", "--demo"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r[2] == r[3] && r[4].starts_with("0.125")));
}

#[test]
fn gates_text_round_trips_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let csv = qap(d, &["gates", "--kind", "qubo-d", "--n", "2", "--model", "rz", "--text", "c.txt"]);
    for line in csv.lines().filter(|l| l.starts_with('c') || l.starts_with("phase_cnots,")) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[1], f[2], "{line}");
    }
    let sim = qap(d, &["simulate", "--circuit", "c.txt"]);
    let total: f64 = sim.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn metrics_csv_has_all_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qap(d, &["metrics", "--n-min", "2", "--n-max", "6", "--kinds", "all", "--csv", "m.csv", "--fig4-compat"]);
    let csv = std::fs::read_to_string(d.join("m.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 3);
    let only = qap(d, &["metrics", "--n-min", "3", "--n-max", "3", "--kinds", "hubo-hw,qubo-d"]);
    assert_eq!(only.lines().count(), 3);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qap"))
        .current_dir(dir.path())
        .args(["formulate", "--kind", "nope", "--in", "x", "--out", "y"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_qap")).args(["show", "/nonexistent/file"]).output().unwrap();
    assert!(!out.status.success());
}
