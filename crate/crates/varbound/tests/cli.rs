//! Black-box tests of the compiled binary: CSV/JSON layouts, exit codes,
//! determinism across runs and worker counts, and the documented examples.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varbound"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn fixture(name: &str) -> String {
    format!("{}/instances/{}", env!("CARGO_MANIFEST_DIR"), name)
}

#[test]
fn bounds_csv_layout_and_golden_value() {
    let out = run(&["bounds", "--instance", &fixture("half_third_rho1.json")]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tag,applicable,value,slack");
    assert_eq!(lines.len(), 8, "header plus one row per bound kind:\n{text}");

    let tags: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        tags,
        vec![
            "simplex_weighted",
            "simplex_squared",
            "subsimplex_weighted",
            "nonneg_total",
            "general_absolute",
            "abs_sum_chain",
            "uncorrelated_chain"
        ]
    );

    let sub = lines
        .iter()
        .find(|l| l.starts_with("subsimplex_weighted,"))
        .expect("sub-simplex row");
    let fields: Vec<&str> = sub.split(',').collect();
    assert_eq!(fields[1], "true");
    let value: f64 = fields[2].parse().expect("numeric bound");
    assert!((value - 5.0 / 6.0).abs() <= 1e-12);
    let slack: f64 = fields[3].parse().expect("numeric slack");
    // exact variance 25/36 leaves slack 5/6 - 25/36 = 5/36.
    assert!((slack - 5.0 / 36.0).abs() <= 1e-12);
}

#[test]
fn bounds_json_reports_exact_variance() {
    let out = run(&[
        "bounds",
        "--instance",
        &fixture("equal_weights_rho1.json"),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    let exact = doc["exact"].as_f64().expect("exact field");
    assert!((exact - 4.0).abs() <= 1e-12);
    assert_eq!(doc["weight_class"], "non-negative");
    assert_eq!(doc["entries"].as_array().expect("entries").len(), 7);
}

#[test]
fn missing_instance_file_is_invalid_input() {
    let out = run(&["bounds", "--instance", "/nonexistent/zzz.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_instance_is_invalid_input() {
    let dir = std::env::temp_dir().join("varbound-cli-test");
    std::fs::create_dir_all(&dir).expect("tempdir");
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").expect("write file");
    let out = run(&["bounds", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tails_from_instance_reports_bound_only() {
    let out = run(&[
        "tails",
        "--instance",
        &fixture("half_half_uncorrelated.json"),
        "--delta",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,bound,frequency,std_error,vacuous"));
    // abs-weight bound with unit variances: (1/2 + 1/2)(1/2 + 1/2)/2^2 = 1/4;
    // no empirical columns without --empirical.
    assert_eq!(lines.next(), Some("2.00000000000,0.250000000000,,,false"));
}

#[test]
fn tails_empirical_is_deterministic_and_within_range() {
    let args = [
        "tails",
        "--process",
        "telegraph",
        "--n",
        "50",
        "--delta",
        "0.5",
        "--empirical",
        "--reps",
        "2000",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let text = stdout_of(&a);
    let row = text.lines().nth(1).expect("data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 5);
    let freq: f64 = fields[2].parse().expect("frequency present");
    assert!((0.0..=1.0).contains(&freq));
}

#[test]
fn tails_requires_exactly_one_source() {
    let out = run(&["tails", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(2), "neither source given");
    let out = run(&[
        "tails",
        "--instance",
        &fixture("half_half_rho1.json"),
        "--process",
        "telegraph",
        "--n",
        "5",
        "--delta",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "both sources given");
}

#[test]
fn lln_emits_samples_then_verdict_line() {
    // The harmonic mean-of-variances crosses the 0.05 threshold around
    // n = 90, so a grid out to 200 certifies convergence.
    let out = run(&[
        "lln",
        "--process",
        "running-mean",
        "--condition",
        "28",
        "--n-max",
        "200",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,value");
    assert_eq!(*lines.last().unwrap(), "verdict,converging");
    // 200 grid points plus header plus verdict.
    assert_eq!(lines.len(), 202);

    let out = run(&[
        "lln",
        "--process",
        "telegraph",
        "--condition",
        "28",
        "--n-max",
        "64",
    ]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().last().unwrap(), "verdict,not-converging");

    let out = run(&[
        "lln",
        "--process",
        "telegraph",
        "--condition",
        "36",
        "--n-max",
        "128",
    ]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().last().unwrap(), "verdict,converging");
}

#[test]
fn lln_rejects_unknown_condition_code() {
    let out = run(&[
        "lln",
        "--process",
        "telegraph",
        "--condition",
        "31",
        "--n-max",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_single_telegraph_mean_lies_in_unit_interval() {
    let out = run(&[
        "simulate",
        "--process",
        "telegraph",
        "--n",
        "1",
        "--reps",
        "100",
        "--seed",
        "1",
        "--statistic",
        "mean_n",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let row = text.lines().nth(1).expect("data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "mean_n");
    let estimate: f64 = fields[1].parse().expect("estimate");
    assert!((0.0..=1.0).contains(&estimate));
}

#[test]
fn simulate_cov_requires_indices() {
    let out = run(&[
        "simulate",
        "--process",
        "running-mean",
        "--n",
        "10",
        "--statistic",
        "cov",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_is_worker_count_invariant() {
    let a = run(&["table1", "--n", "3"]);
    let b = run(&["--workers", "1", "table1", "--n", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "worker count must not change output");
    let text = stdout_of(&a);
    assert_eq!(text.lines().nth(1), Some("3,288000,29004,10.07"));
}

#[test]
fn census_json_carries_tie_count_and_note() {
    let out = run(&["table1", "--n", "2", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["total"], 3600);
    assert_eq!(doc["violations"], 518);
    assert_eq!(doc["ties"], 430);
    assert!(doc["note"].as_str().expect("note").contains("520"));
}

#[test]
fn output_flag_writes_file_instead_of_stdout() {
    let dir = std::env::temp_dir().join("varbound-cli-test");
    std::fs::create_dir_all(&dir).expect("tempdir");
    let path = dir.join("row.csv");
    let out = run(&["--output", path.to_str().unwrap(), "table1", "--n", "2"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("output file");
    assert!(text.starts_with("n,total,violations,ratio_percent\n"));
}

#[test]
fn verify_reports_the_two_known_red_checks() {
    // The named-check suite is expected to fail exactly twice: the two
    // published census tallies are floating-point artifacts that exact
    // integer arithmetic does not reproduce. `verify` therefore exits 3.
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout_of(&out);
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(fails.len(), 2, "unexpected failures:\n{text}");
    assert!(fails[0].contains("census-n2"));
    assert!(fails[1].contains("census-n3"));
    assert!(text.trim_end().ends_with("18 checks, 2 failed"));
}
