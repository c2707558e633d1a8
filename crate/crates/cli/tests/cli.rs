use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixhecke"))
        .args(args)
        .env_remove("MIXHECKE_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn normalize_passage_example() {
    let o = run(&["normalize", "--n", "2", "g1 T1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "q^-1 * T2 g1 + (-1 + q^-1) * T2");
}

#[test]
fn normalize_json_and_trace() {
    let o = run(&["normalize", "--n", "2", "--format", "json", "g1 T1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["output"]["text"], "q^-1 * T2 g1 + (-1 + q^-1) * T2");
    let o = run(&["normalize", "--n", "2", "--trace", "g1 T1"]);
    assert!(stdout(&o).contains("passage.up"), "{}", stdout(&o));
}

#[test]
fn equal_and_distinct() {
    let o = run(&["equal", "--n", "2", "g1^-1", "q^-1 * g1 + (-1 + q^-1)"]);
    assert_eq!(stdout(&o).trim(), "equal");
    let o = run(&["equal", "--n", "2", "T1", "t1"]);
    assert_eq!(stdout(&o).trim(), "distinct");
}

#[test]
fn exit_codes() {
    let o = run(&["normalize", "--n", "3", "g5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = run(&["normalize", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.txt");
    let p = path.to_str().unwrap();
    let o = run(&["certify", "--n", "2", "--out", p, "g1 T1", "q^-1 * T2 g1 + (-1 + q^-1) * T2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["certify", "--n", "2", "--check", p]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("valid"), "{}", stdout(&o));

    let bad = std::fs::read_to_string(&path).unwrap().replace("RHS", "RHS T1 +");
    std::fs::write(&path, bad).unwrap();
    let o = run(&["certify", "--n", "2", "--check", p]);
    assert!(!o.status.success());
}

#[test]
fn validate_rules_small() {
    let o = run(&["validate-rules", "--n", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("SKIP") && l.contains("passage.far")), "{out}");
    assert!(out.lines().any(|l| l.contains("passage.up-inverse.printed") && l.starts_with("FAIL") && l.contains("as expected")), "{out}");
}

#[test]
fn enumerate_and_scan() {
    let o = run(&["enumerate", "--n", "2", "2", "1"]);
    assert_eq!(stdout(&o).lines().count(), 98);
    let o = run(&["scan-collisions", "--n", "2", "--format", "json", "2", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["words"], 98);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mixhecke.conf");
    std::fs::write(&cfg, "n = 3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mixhecke"))
        .args(["normalize", "g2 T2"])
        .env("MIXHECKE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("T3"));
}
