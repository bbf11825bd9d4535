use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goppa-orbits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn census_headline_values() {
    let out = run(&["census", "--n", "5", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["s"], "4");
    let out = run(&["census", "--n", "5", "--r", "6"]);
    assert_eq!(json(&out)["s"], "1131");
}

#[test]
fn census_cubic_flags_and_strict_mode() {
    let out = run(&["census", "--n", "5", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["s0_printed"], "2/3");
    let failed: Vec<&Value> = v["consistency"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["ok"] == false)
        .collect();
    assert!(failed.iter().any(|f| f["name"] == "delta5_printed_matches"));
    assert_eq!(
        run(&["census", "--n", "5", "--r", "3", "--strict"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["census", "--n", "5", "--r", "4", "--strict"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn census_csv_sweep() {
    let out = run(&["census", "--n", "5,7", "--r", "3..6", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,r,q,n0,n1,n2"));
    // (5,5) and (7,7) are outside the hypotheses and skipped
    assert_eq!(lines.count(), 7);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("skipping n = 5, r = 5"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["census", "--n", "4", "--r", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["census", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        run(&["census", "--n", "5", "--r", "9..3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["goppa", "--n", "5", "--r", "3", "--g", "1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["census", "--n", "5", "--r", "4", "--workers", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn forced_hypotheses() {
    let out = run(&["census", "--n", "4", "--r", "3", "--force-hypotheses"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hypotheses"]["forced"], true);
}

#[test]
fn conjugacy_tables() {
    let v = json(&run(&["conjugacy", "--n", "5"]));
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 33);
    assert_eq!(
        classes
            .iter()
            .map(|c| c["size"].as_u64().unwrap())
            .sum::<u64>(),
        32736
    );
    let out = run(&["conjugacy", "--n", "2", "--exhaustive", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let sizes: u64 = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(sizes, 60);
}

#[test]
fn verify_sextic_without_heavy() {
    let out = run(&["verify", "--n", "5", "--r", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sigma_fixed"]["blocks"], 2);
    assert_eq!(v["verdict"], "pass");
    assert!(!v["skipped"].as_array().unwrap().is_empty());
}

#[test]
fn verify_quartic_passes() {
    let out = run(&["verify", "--n", "5", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pgammal_orbits"], 4);
    assert_eq!(v["census"]["s"], "4");
    assert_eq!(v["burnside"]["orbits"], 16);
}

#[test]
fn verify_capacity_exit_3() {
    let out = run(&["verify", "--n", "5", "--r", "41"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("capacity"));
    assert_eq!(
        run(&["oracle-orbits", "--n", "5", "--r", "6"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn orbit_export() {
    let out = run(&[
        "oracle-orbits",
        "--n",
        "5",
        "--r",
        "3",
        "--group",
        "pgl",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "representative,size,divisor_flag\n\"1,1,0,1\",10912,true\n"
    );
    let v = json(&run(&["oracle-orbits", "--n", "5", "--r", "4"]));
    assert_eq!(v["orbit_count"], 4);
    assert_eq!(v["total"], 261888);
}

#[test]
fn goppa_weights() {
    let v = json(&run(&["goppa", "--n", "5", "--r", "3", "--weights"]));
    let dim = v["dimension"].as_u64().unwrap();
    let mass: u64 = v["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[1].as_u64().unwrap())
        .sum();
    assert_eq!(mass, 1 << dim);
    assert_eq!(v["length"], 32);
    let v = json(&run(&[
        "goppa",
        "--n",
        "5",
        "--r",
        "3",
        "--extended",
        "--trials",
        "3",
    ]));
    assert_eq!(v["length"], 33);
    assert_eq!(v["invariance"]["trials"].as_array().unwrap().len(), 3);
}

#[test]
fn seeds_reproduce() {
    let a = run(&[
        "goppa", "--n", "5", "--r", "3", "--trials", "4", "--seed", "5",
    ]);
    let b = run(&[
        "goppa", "--n", "5", "--r", "3", "--trials", "4", "--seed", "5",
    ]);
    assert_eq!(a.stdout, b.stdout);
}
