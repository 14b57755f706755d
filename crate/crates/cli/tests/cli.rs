//! End-to-end tests against the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

static DIR_SEQ: AtomicU32 = AtomicU32::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "kindiv-cli-test-{}-{}-{}",
        tag,
        std::process::id(),
        DIR_SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn kindiv(args: &[&str], cache_dir: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kindiv"))
        .args(args)
        .env("KINDIV_CACHE_DIR", cache_dir)
        .env_remove("KINDIV_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exact_examples() {
    let dir = scratch_dir("exact");
    let out = kindiv(
        &["exact", "--k", "2", "--t", "3", "--r", "1", "--n", "4"],
        &dir,
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5");
    let out = kindiv(
        &["exact", "--k", "2", "--t", "3", "--r", "1", "--n", "0"],
        &dir,
    );
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn exact_is_deterministic_cold_vs_cached() {
    let dir = scratch_dir("determinism");
    let args = ["exact", "--k", "3", "--t", "4", "--r", "1", "--n", "100"];
    let cold = kindiv(&args, &dir);
    assert!(cold.status.success());
    // Second run reads the cache written by the first.
    let cached = kindiv(&args, &dir);
    assert_eq!(stdout(&cold), stdout(&cached));
    // And a cache-less run still agrees.
    let mut no_cache = args.to_vec();
    no_cache.push("--no-cache");
    let fresh = kindiv(&no_cache, &dir);
    assert_eq!(stdout(&cold), stdout(&fresh));
    assert!(
        std::fs::read_dir(&dir).unwrap().next().is_some(),
        "cache file expected"
    );
}

#[test]
fn qtable_header_and_stability() {
    let dir = scratch_dir("qtable");
    let args = [
        "qtable", "--k", "3", "--t", "4", "--r", "1", "--n-list", "10,100",
    ];
    let a = kindiv(&args, &dir);
    assert!(a.status.success());
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,exact,estimate,Q");
    assert!(text.lines().nth(1).unwrap().starts_with("10,66,"));
    assert!(text.lines().nth(1).unwrap().ends_with("0.95865"));
    let b = kindiv(&args, &dir);
    assert_eq!(
        a.stdout, b.stdout,
        "CSV bytes must be identical across runs"
    );
}

#[test]
fn qtable_single_row_and_threads() {
    let dir = scratch_dir("qtable1");
    let out = kindiv(
        &[
            "--threads",
            "2",
            "qtable",
            "--k",
            "4",
            "--t",
            "5",
            "--r",
            "2",
            "--n-list",
            "10",
        ],
        &dir,
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().ends_with("0.93232"));
}

#[test]
fn ordering_rows() {
    let dir = scratch_dir("ordering");
    let out = kindiv(&["ordering", "--k", "12", "--t", "7"], &dir);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 2 3 4 6 5 7");
    let out = kindiv(&["ordering", "--k", "2", "--t", "7"], &dir);
    assert_eq!(stdout(&out).trim(), "1 3 5 7 2 4 6");
}

#[test]
fn orderings_grouped_table() {
    let dir = scratch_dir("orderings");
    let out = kindiv(&["orderings", "--t", "7"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().count(),
        7,
        "seven distinct orderings for t = 7"
    );
    assert!(text.contains("k = 6,10,13,20: 1 2 3 4 5 7 6"));
    assert!(text.contains("k = 12: 1 2 3 4 6 5 7"));
}

#[test]
fn ocount_ratios_stay_above_half() {
    let dir = scratch_dir("ocount");
    let out = kindiv(&["ocount", "--t-min", "3", "--t-max", "10"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,orderings,phi,ratio");
    for line in lines {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ratio >= 0.5, "ratio below the proven bound: {line}");
    }
}

#[test]
fn verify_suites_and_exit_codes() {
    let dir = scratch_dir("verify");
    let out = kindiv(&["verify", "--suite", "figure-3", "--t", "7"], &dir);
    assert!(out.status.success(), "figure-3 suite must pass");
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    for field in ["suite_name", "grid", "cases_run", "failures", "stats"] {
        assert!(report.get(field).is_some(), "missing report field {field}");
    }
    assert_eq!(report["suite_name"], "figure-3");
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);

    let out = kindiv(
        &["verify", "--suite", "exact-oracle", "--n-max", "10"],
        &dir,
    );
    assert!(out.status.success());

    let out = kindiv(&["verify", "--suite", "no-such-suite"], &dir);
    assert_eq!(out.status.code(), Some(2), "unknown suite is a usage error");
}

#[test]
fn usage_and_capacity_exit_codes() {
    let dir = scratch_dir("codes");
    // Missing required arguments.
    let out = kindiv(&["exact", "--k", "2"], &dir);
    assert_eq!(out.status.code(), Some(2));
    // Residue out of range.
    let out = kindiv(
        &["exact", "--k", "2", "--t", "3", "--r", "5", "--n", "4"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    // Non-coprime ordering request.
    let out = kindiv(&["ordering", "--k", "6", "--t", "4"], &dir);
    assert_eq!(out.status.code(), Some(2));
    // Capacity cap.
    let out = kindiv(
        &[
            "--n-cap", "50", "exact", "--k", "2", "--t", "3", "--r", "1", "--n", "100",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(3));
    // Precision outside the allowed window.
    let out = kindiv(
        &["--precision-bits", "32", "ordering", "--k", "2", "--t", "7"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_env_var_is_honored() {
    let dir = scratch_dir("env");
    let out = Command::new(env!("CARGO_BIN_EXE_kindiv"))
        .args(["ordering", "--k", "2", "--t", "7"])
        .env("KINDIV_CACHE_DIR", &dir)
        .env("KINDIV_PRECISION_BITS", "64")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 3 5 7 2 4 6");
    // Flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_kindiv"))
        .args([
            "--precision-bits",
            "128",
            "ordering",
            "--k",
            "2",
            "--t",
            "7",
        ])
        .env("KINDIV_CACHE_DIR", &dir)
        .env("KINDIV_PRECISION_BITS", "31")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "flag should override the bad env value"
    );
}
