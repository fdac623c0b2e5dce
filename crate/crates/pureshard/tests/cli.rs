use pureshard::cli::{run, EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["pureshard"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn region_count() {
    let (code, out, _) = call(&["arr", "regions", "--builtin", "I2:4", "--count"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "8");
}

#[test]
fn rank2_suite_json() {
    let (code, out, _) = call(&["--json", "verify", "--suite", "rank2", "--m", "4"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    let get = |name: &str| checks.iter().find(|c| c["id"] == format!("rank2.I2(4).{name}")).unwrap()["observed"].clone();
    assert_eq!(get("rank-generating-function"), serde_json::json!([1, 6, 10, 6, 1]));
    assert_eq!(get("chains"), serde_json::json!("16"));
    assert_eq!(get("lattice"), serde_json::json!(true));
}

#[test]
fn reports_are_deterministic() {
    let a = call(&["--json", "verify", "--suite", "conj,nc", "--builtin", "I2:5"]);
    let b = call(&["--json", "verify", "--suite", "conj,nc", "--builtin", "I2:5"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
}

#[test]
fn usage_and_resource_errors() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["arr", "regions", "--builtin", "Q9"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["--budget", "10", "monoid", "interval", "--builtin", "A3"]).0, EXIT_RESOURCE);
    let (code, out, _) = call(&["--budget", "10", "verify", "--suite", "omega", "--builtin", "A3"]);
    assert_eq!(code, EXIT_RESOURCE);
    assert!(out.contains("ERROR"));
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn loop_equality_files() {
    let dir = tempdir();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let c = dir.join("c.json");
    std::fs::write(&a, "[2, 3]").unwrap();
    std::fs::write(&b, "[2, 3]").unwrap();
    std::fs::write(&c, "[3, 2]").unwrap();
    let (code, out, _) = call(&["loop", "eq", a.to_str().unwrap(), b.to_str().unwrap(), "--builtin", "I2:4"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "equal"));
    let (code, _, _) = call(&["loop", "eq", a.to_str().unwrap(), c.to_str().unwrap(), "--builtin", "I2:4"]);
    assert!(code == EXIT_OK || code == EXIT_FAIL);
}

#[test]
fn dot_outputs() {
    for args in [
        &["arr", "poset", "--builtin", "A3", "--dot"][..],
        &["shards", "order", "--builtin", "I2:4", "--dot"],
        &["salvetti", "skeleton", "--builtin", "I2:3", "--dot"],
        &["monoid", "interval", "--builtin", "I2:3", "--dot"],
    ] {
        let (code, out, _) = call(args);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("digraph"), "{args:?}");
        assert!(out.trim_end().ends_with('}'));
    }
}

#[test]
fn cox_commands() {
    let (code, out, _) = call(&["--json", "cox", "snap", "--type", "A3", "--elem", "s1s2s3s2"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["inv"], serde_json::json!(["(12)", "(13)", "(14)", "(34)", "(34)", "(14)", "(13)"]));
    assert_eq!(v["pop"], "s1");
    let (code, out, _) = call(&["cox", "verify", "--type", "I2:5", "--suite", "snap,inv,nc"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = call(&["--json", "cox", "sort", "--type", "A3", "--c", "s2s1s3"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sortable"].as_array().unwrap().len(), 14);
    assert_eq!(call(&["cox", "sort", "--type", "A3", "--c", "s1s1s2"]).0, EXIT_USAGE);
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("pureshard-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
