use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rigidity-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}

#[test]
fn certify_then_verify_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("dft.json");
    assert_eq!(code(&run(&["certify", "dft", "--N", "6", "-o", p(&cert)])), 0);
    let out = run(&["verify", p(&cert), "--json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(report["achieved_rank"].as_u64().unwrap() <= report["claimed_rank"].as_u64().unwrap());
}

#[test]
fn verify_against_a_separate_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let top = dir.path().join("top.txt");
    std::fs::write(&top, "1 2 3 4 5").unwrap();
    let cert = dir.path().join("c.json");
    assert_eq!(code(&run(&["certify", "circulant", "--top-row", p(&top), "-o", p(&cert)])), 0);
    // The descriptor inside the certificate is itself a matrix file.
    let text = std::fs::read_to_string(&cert).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let matrix = dir.path().join("m.json");
    std::fs::write(&matrix, serde_json::to_string(&v["matrix"]).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", p(&cert), "--matrix-file", p(&matrix)])), 0);
}

#[test]
fn exit_codes_separate_usage_from_infeasibility() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["certify", "gwh", "--d", "2", "--n", "3"])), 2);
    assert_eq!(code(&run(&["verify", "/nonexistent/cert.json"])), 2);
    assert_eq!(code(&run(&["numtheory", "scales", "--k", "3"])), 3);
    assert_eq!(code(&run(&["numtheory", "factorable", "--l", "5", "--lower", "10", "--upper", "12", "--max-pp", "10"])), 3);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn numtheory_reports_counts_and_primes() {
    let out = run(&["numtheory", "pi", "--a", "1", "--x", "50", "--y", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a,x,y,count\n1,50,5,11\n");
    let out = run(&["numtheory", "good-primes", "--lower", "10", "--upper", "50", "--max-pp", "10"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let qs: Vec<u64> = rows.iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, [11, 13, 19, 29, 31, 37, 41, 43]);
    let out = run(&["numtheory", "factorable", "--l", "2", "--lower", "10", "--upper", "50", "--max-pp", "10"]);
    assert_eq!(code(&out), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let n = rows[0]["n"].as_u64().unwrap();
    let primes: Vec<u64> = rows[0]["primes"].as_str().unwrap().split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!(primes.len(), 2);
    assert_eq!(primes.iter().product::<u64>(), n);
}

/// CSV rows with the timing column dropped.
fn sweep_rows(threads: &str) -> Vec<Vec<String>> {
    let out = bin()
        .args(["sweep", "--family", "circulant", "--range", "2..7"])
        .env("RIGIDITY_FORGE_THREADS", threads)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let wall = r.headers().unwrap().iter().position(|h| h == "wall_ms").unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().enumerate().filter(|&(i, _)| i != wall).map(|(_, c)| c.to_string()).collect())
        .collect()
}

#[test]
fn sweep_output_does_not_depend_on_worker_count() {
    let one = sweep_rows("1");
    assert_eq!(one.len(), 6);
    assert_eq!(one, sweep_rows("2"));
    assert!(one.iter().zip(2..).all(|(row, n)| row[1] == n.to_string()));
}

#[test]
fn sweep_rejects_a_bad_worker_count() {
    let out = bin().args(["sweep", "--family", "gwh", "--range", "1..2"]).env("RIGIDITY_FORGE_THREADS", "zero").output().unwrap();
    assert_eq!(code(&out), 2);
}
