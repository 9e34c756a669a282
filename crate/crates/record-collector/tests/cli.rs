//! End-to-end tests of the command-line binary: spawn it, capture bytes.
//!
//! The text grid is pinned byte-for-byte, machine formats are parsed back
//! and compared against the library, and error paths are checked for exit
//! codes (2 for usage problems, 1 for domain failures) and messages.

use std::process::{Command, Output};

use record_collector::distribution::{MandelbrotParams, ProbabilityVector};
use record_collector::exact::{expected_draws_dp, expected_draws_uniform};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_record-collector"))
        .args(args)
        .output()
        .expect("binary starts")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_record-collector"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary starts")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn table_text_grid_is_pinned() {
    let want = "k   m=5             m=8             m=10\n\
                2   2.81 (1.97)     2.63 (2.00)     2.58 (2.01)\n\
                3   6.08 (2.87)     5.17 (2.95)     4.93 (2.97)\n\
                4   12.42 (3.76)    9.01 (3.89)     8.31 (3.92)\n\
                5   28.46 (4.59)    14.81 (4.84)    13.04 (4.88)\n\
                6   -               23.95 (5.77)    19.68 (5.84)\n\
                7   -               39.96 (6.69)    29.21 (6.79)\n\
                8   -               77.77 (7.55)    43.66 (7.74)\n";
    assert_eq!(stdout_of(&["table"]), want);
}

#[test]
fn table_csv_round_trips_through_the_library() {
    let out = stdout_of(&["table", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("m,k,value,records_at_mean"));
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        let m: usize = fields[0].parse().unwrap();
        let k: usize = fields[1].parse().unwrap();
        let value: f64 = fields[2].parse().unwrap();
        let params = MandelbrotParams::new(m, 1.75, 0.30).unwrap();
        let p = ProbabilityVector::mandelbrot(&params);
        let expect = expected_draws_dp(&p, k).unwrap().value_at(k).unwrap();
        assert_eq!(value.to_bits(), expect.to_bits(), "m={m} k={k}");
        rows += 1;
    }
    assert_eq!(rows, 4 + 7 + 7);
}

#[test]
fn exact_csv_matches_library_values() {
    let out = stdout_of(&[
        "exact", "--dist", "uniform", "--m", "6", "--k", "6", "--method", "uniform",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k,value,method"));
    for (line, k) in lines.zip(1..=6) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<usize>().unwrap(), k);
        let value: f64 = fields[1].parse().unwrap();
        let expect = expected_draws_uniform(6, k).unwrap();
        assert_eq!(value.to_bits(), expect.to_bits(), "k={k}");
        assert_eq!(fields[2], "uniform-closed-form");
    }
}

#[test]
fn json_output_round_trips() {
    let out = stdout_of(&[
        "curve",
        "--figure",
        "approx",
        "--m",
        "50",
        "--k",
        "2:6",
        "--replicates",
        "300",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&out).expect("valid json");
    let reserialized = serde_json::to_string(&parsed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(parsed, reparsed);

    assert_eq!(parsed["figure"], "approx");
    assert_eq!(parsed["m"], 50);
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 5);
    assert!(parsed["tau"].as_f64().unwrap() > 0.0);
    // Keys serialize in declaration order, stable across runs.
    let first = out.find("\"figure\"").unwrap();
    let second = out.find("\"distribution\"").unwrap();
    assert!(first < second);
}

#[test]
fn simulate_output_is_reproducible_bytes() {
    let args = [
        "simulate",
        "--m",
        "12",
        "--k",
        "8",
        "--replicates",
        "2000",
        "--seed",
        "9",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);
    assert!(first.starts_with("k,value,method,stderr,replicates,seed\n"));
    assert!(first.contains(",montecarlo,"));
}

#[test]
fn worker_count_does_not_change_output_bytes() {
    let args = [
        "curve",
        "--figure",
        "inverse",
        "--m",
        "20",
        "--k",
        "1:10",
        "--replicates",
        "500",
        "--seed",
        "4",
    ];
    let plain = stdout_of(&args);
    for threads in ["1", "3"] {
        let out = run_with_env(&args, "RECORD_COLLECTOR_THREADS", threads);
        assert!(out.status.success());
        assert_eq!(
            String::from_utf8(out.stdout).unwrap(),
            plain,
            "threads={threads}"
        );
    }
}

#[test]
fn invalid_worker_count_is_a_usage_error() {
    let out = run_with_env(&["table"], "RECORD_COLLECTOR_THREADS", "zero");
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("RECORD_COLLECTOR_THREADS"));
}

#[test]
fn too_few_replicates_fails_cleanly() {
    let out = run(&[
        "simulate",
        "--dist",
        "uniform",
        "--m",
        "3",
        "--k",
        "2",
        "--replicates",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("replicate"), "stderr: {stderr}");
}

#[test]
fn oversized_subset_sum_names_the_cap() {
    let out = run(&[
        "exact", "--dist", "uniform", "--m", "30", "--method", "maxmin",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("cap"), "stderr: {stderr}");
    assert!(stderr.contains("subset terms"), "stderr: {stderr}");
}

#[test]
fn uniform_method_on_decaying_distribution_is_usage_error() {
    let out = run(&["exact", "--m", "4", "--k", "2", "--method", "uniform"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected_by_the_parser() {
    let out = run(&["table", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pmf_file_input_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("die.pmf");
    std::fs::write(&path, "# comment\n0.5\n\n0.25\n0.25\n").unwrap();
    let path_str = path.to_str().unwrap();

    let out = stdout_of(&["exact", "--pmf-file", path_str, "--k", "3"]);
    let p = ProbabilityVector::from_file(&path).unwrap();
    let table = expected_draws_dp(&p, 3).unwrap();
    let last = out.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    let value: f64 = fields[1].parse().unwrap();
    assert_eq!(value.to_bits(), table.value_at(3).unwrap().to_bits());
}

#[test]
fn pmf_file_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.pmf");
    std::fs::write(&path, "0.5\n0.25\nnot-a-number\n0.25\n").unwrap();

    let out = run(&["exact", "--pmf-file", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.pmf:3:"), "stderr: {stderr}");
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let on_stdout = stdout_of(&["table", "--format", "csv"]);
    let out = run(&[
        "table",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), on_stdout);
}

#[test]
fn infeasible_range_reports_the_support() {
    let out = run(&[
        "curve", "--figure", "inverse", "--dist", "uniform", "--m", "4", "--k", "2:9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("support of size 4"), "stderr: {stderr}");
}

#[test]
fn help_lists_all_subcommands() {
    let out = stdout_of(&["--help"]);
    for sub in ["exact", "table", "curve", "simulate"] {
        assert!(out.contains(sub), "missing {sub} in help");
    }
}
