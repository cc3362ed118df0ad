use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_periodpoly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn periods_over_f9() {
    let v = json(&["periods", "-p", "3", "-s", "2", "-e", "2"]);
    let ints: Vec<&str> = v["periods"].as_array().unwrap().iter().map(|z| z["integer"].as_str().unwrap()).collect();
    assert_eq!(ints, ["3", "-3"]);
    for row in v["counts"].as_array().unwrap() {
        let total: u64 = row.as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
        assert_eq!(total, 9);
    }
}

#[test]
fn periods_order16_carry_closed_form_spectrum() {
    let v = json(&["periods", "-p", "3", "-s", "4", "-m", "4"]);
    assert_eq!(v["periods"].as_array().unwrap().len(), 16);
    let total: u64 = v["spectrum"].as_array().unwrap().iter().map(|e| e["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 16);
}

#[test]
fn out_of_scope_prime_exits_2() {
    let o = run(&["periods", "-p", "7", "-s", "2", "-m", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid instance"));
}

#[test]
fn factor_prints_factored_and_expanded() {
    let o = run(&["factor", "-p", "3", "-s", "4", "-m", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("(X + 15)^6 (X - 33)^4"), "{text}");
    assert!(text.contains("expanded: X^16"), "{text}");
    let v = json(&["factor", "-p", "3", "-s", "4", "-m", "4"]);
    let expanded = v["expanded"].as_array().unwrap();
    assert_eq!(expanded.len(), 17);
    assert_eq!(expanded[16], "1");
}

#[test]
fn partitions_sum_of_squares() {
    let o = run(&["partitions", "-p", "5", "-k", "4", "--form", "sum-of-squares"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "C=7 D=24");
    let o = run(&["partitions", "-p", "3", "-k", "4", "--form", "two-b-squared"]);
    assert_eq!(stdout(&o).trim(), "A=7 B=4");
    let o = run(&["partitions", "-p", "5", "-k", "4", "--form", "two-b-squared"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn code_enumerator() {
    let o = run(&["code", "-p", "3", "-l", "1", "-s", "4", "-N", "16"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 + 20X^2 + 20X^3 + 30X^4 + 10X^5"));
    let v = json(&["code", "-p", "3", "-l", "1", "-s", "4", "-N", "16", "--budget", "10"]);
    assert_eq!(v["comparison"]["mode"], "representative");
    assert_eq!(v["comparison"]["agrees"], true);
    let o = run(&["code", "-p", "3", "-l", "1", "-s", "4", "-N", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counts_with_check() {
    let v = json(&["counts", "-p", "3", "-s", "4", "-m", "3", "-n", "4", "--check"]);
    for c in v["counts"].as_array().unwrap() {
        assert_eq!(c["count"], c["brute_force"]);
    }
}

#[test]
fn verify_single_instance_and_round_trip() {
    let dir = std::env::temp_dir().join(format!("periodpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = run(&["verify", "--instance", "p=3,s=4,m=4", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let first: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(first["passed"], true);
    assert_eq!(first["instances"][0]["case"], "three-order16");
    let text = serde_json::to_string(&first).unwrap();
    let second: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(first, second);
    assert_eq!(serde_json::to_string(&second).unwrap(), text);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["instances"][0]["key"], first["instances"][0]["key"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_text_lines() {
    let o = run(&["verify", "--instance", "p=3,l=1,s=4,N=16"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS code p=3,l=1,s=4,N=16"));
    let o = run(&["verify", "--instance", "p=3,s=4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_failure_exits_1() {
    // p = 7 is outside the supported family, so the instance fails its setup check
    let o = run(&["verify", "--instance", "p=7,s=2,m=3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["factor", "-p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["periods", "-p", "3", "-s", "2", "-e", "2", "-m", "2"]).status.code(), Some(2));
}
