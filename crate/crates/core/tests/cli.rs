use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchy-dirichlet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn computed(v: &serde_json::Value, name: &str) -> f64 {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == name)
        .unwrap_or_else(|| panic!("no row {name}"))["computed"]
        .as_f64()
        .unwrap()
}

#[test]
fn constants_json() {
    let v = json(&["constants", "--p", "1.652702"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "constants");
    assert!((computed(&v, "bound_cauchy[1.652702]") - 1.0).abs() < 1e-4);
    assert!((computed(&v, "alpha0") - 2.404825557695773).abs() < 1e-14);
}

#[test]
fn norms_csv() {
    let out = run(&["norms", "--d", "0", "--nr", "64", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rd.headers().unwrap().get(2), Some("computed_re"));
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty());
    let norm: f64 = rows[0][2].parse().unwrap();
    assert!((norm - 0.8316611546312475).abs() < 1e-3);
}

#[test]
fn transform_complex_values() {
    let v = json(&["transform", "--g", "z*zbar", "--at", "0.5,0.2+0.1i"]);
    let first = &v["results"][0];
    assert!((first["computed"]["re"].as_f64().unwrap() - 0.0625).abs() < 1e-8);
    assert!(first["computed"]["im"].is_number());
    assert_eq!(v["pass"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["transform", "--g", "z*("]).status.code(), Some(2));
    assert_eq!(run(&["--nr", "0", "constants"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["constants", "--format", "xml"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let coarse = run(&[
        "transform",
        "--g",
        "z^2",
        "--at",
        "0.3",
        "--nr",
        "4",
        "--ntheta",
        "8",
    ]);
    assert_eq!(coarse.status.code(), Some(1));
}

#[test]
fn leading_minus_in_values() {
    let v = json(&["transform", "--g", "-z/|z|", "--at", "-0.5"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn deterministic_for_fixed_seed() {
    let args = [
        "verify", "--suite", "bounds", "--seed", "3", "--nr", "32", "--ntheta", "64", "--format",
        "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}
