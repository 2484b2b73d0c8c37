//! End-to-end checks of the binary: exit codes, determinism, and the
//! machine-readable formats.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2trace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn reduce_commutator_pretty() {
    let out = run(&["reduce", "[a,b]", "--gens", "2", "--format", "pretty"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "-t[1]*t[2]*t[1,2] + t[1]^2 + t[2]^2 + t[1,2]^2 - 2"
    );
}

#[test]
fn reduce_emits_valid_json() {
    let out = run(&["reduce", "a b a b", "--gens", "2", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(value.get("vars").is_some());
    assert!(value.get("terms").is_some());
}

#[test]
fn count_fiber_csv_single_row() {
    let out = run(&["count", "fiber", "--prime", "3", "--t", "2", "--method", "brute", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3,2,10,brute");
}

#[test]
fn count_all_has_csv_header_and_sums() {
    let out = run(&["count", "all", "--prime", "5", "--workers", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,t,n,method"));
    let total: u64 = lines
        .map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 125);
}

#[test]
fn verify_engine_reports_ok() {
    let out = run(&[
        "verify", "engine", "--words", "25", "--max-len", "8", "--gens", "3", "--prime", "10007",
        "--seed", "7",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "25/25 ok");
}

#[test]
fn identical_seeds_give_identical_output() {
    let args = &[
        "verify", "identity", "--name", "qp", "--count", "50", "--prime", "101", "--seed", "11",
        "--format", "json",
    ];
    assert_eq!(stdout(&run(args)), stdout(&run(args)));

    let jac = &["jacobian-rank", "--gens", "2", "--seed", "3", "--samples", "5", "--format", "json"];
    assert_eq!(stdout(&run(jac)), stdout(&run(jac)));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["count", "fiber", "--prime", "3", "--t", "2", "--method", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out2 = run(&["no-such-subcommand"]);
    assert_eq!(out2.status.code(), Some(2));
    let out3 = run(&["reduce", "a^0", "--gens", "1"]);
    // domain error in the word itself: verification-style failure
    assert_eq!(out3.status.code(), Some(1));
}

#[test]
fn domain_failures_exit_1() {
    let hessian = run(&["hessian", "--point", "1,1,1", "--t", "2"]);
    assert_eq!(hessian.status.code(), Some(1));

    let degenerate = run(&["eliminate-tcd", "--values", "2,2,2,2,2,2,2,2,2"]);
    assert_eq!(degenerate.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&degenerate.stderr).contains("degenerate"));
}

#[test]
fn epoly_check_passes() {
    let out = run(&["epoly", "check"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "ok");
    let json = run(&["epoly", "table", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(value["M_J-"], "q^2 + 3q");
}

#[test]
fn eliminate_tcd_over_prime_field() {
    // Traces of the tuple A=[[1,1],[0,1]], B=[[1,0],[1,1]], C=[[2,1],[1,1]],
    // D=[[3,2],[1,1]] in basis order t1,t2,t12,t3,t13,t23,t4,t14,t24;
    // tr(CD) = 10.
    let out = run(&[
        "eliminate-tcd",
        "--values", "2,2,3,3,4,4,4,5,6",
        "--prime", "101",
        "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let poly = sl2trace::poly::Poly::from_json(&value).unwrap();
    assert!(!poly.is_zero());
    let field = sl2trace::field::PrimeField::new(101).unwrap();
    let mut asg = std::collections::BTreeMap::new();
    asg.insert(sl2trace::poly::Var::pair(3, 4).unwrap(), 10u64);
    assert_eq!(poly.evaluate(&field, &asg).unwrap(), 0);
}

#[test]
fn genus2_relations_listing() {
    let out = run(&["genus2", "relations"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("R1:"));
}
