//! End-to-end tests of the compiled `predpac` binary: flag surface,
//! stdout/stderr contracts, exit codes, and on-disk outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use predpac::bounds::{BoundFormula, BoundSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_predpac"))
}

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("configs")
        .join(name)
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

/// A fast mixture config whose governed sample size is not on the grid,
/// so the run always passes and stays cheap.
const SMOKE_CONFIG: &str = r#"{
    "kind": "predictive_pac",
    "process": {
        "type": "finite_definetti",
        "grid": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        "weights": [0.5, 0.5],
        "components": [
            [0.4, 0.3, 0.1, 0.1, 0.05, 0.05],
            [0.05, 0.05, 0.1, 0.1, 0.3, 0.4]
        ]
    },
    "class": {"family": "thresholds"},
    "learner": {"rule": "erm", "tie_break": "lex_min"},
    "target": {"kind": "threshold", "t": 4.0},
    "n_grid": [5, 20],
    "trials": 50,
    "epsilon": 0.2,
    "delta": 0.1,
    "master_seed": 7,
    "output": "smoke"
}"#;

/// Same process, but judged at its governed n with far too few trials:
/// even zero observed failures leave the exact upper interval above
/// delta, so the verdict must fail.
const UNDERPOWERED_CONFIG: &str = r#"{
    "kind": "predictive_pac",
    "process": {
        "type": "finite_definetti",
        "grid": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        "weights": [0.5, 0.5],
        "components": [
            [0.4, 0.3, 0.1, 0.1, 0.05, 0.05],
            [0.05, 0.05, 0.1, 0.1, 0.3, 0.4]
        ]
    },
    "class": {"family": "thresholds"},
    "learner": {"rule": "erm", "tie_break": "lex_min"},
    "target": {"kind": "threshold", "t": 4.0},
    "n_grid": [271],
    "trials": 50,
    "epsilon": 0.4,
    "delta": 0.05,
    "master_seed": 7,
    "output": "underpowered"
}"#;

const GC_SMOKE_CONFIG: &str = r#"{
    "kind": "gc_curve",
    "process": {"type": "beta_bernoulli", "a": 1.0, "b": 1.0},
    "n_grid": [5, 20],
    "trials": 40,
    "master_seed": 5,
    "output": "gc_smoke"
}"#;

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code_of(&out), 0);
    assert!(stdout_of(&out).contains("predpac"));
}

#[test]
fn unknown_subcommand_exits_one() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(code_of(&out), 1);
}

#[test]
fn bounds_table_has_expected_rows() {
    let out = bin()
        .args(["bounds", "--d", "1", "--delta", "0.1", "--epsilon", "0.1,0.2"])
        .args(["--formula", "vidyasagar78"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,delta,epsilon,n_pac,n_predictive");
    assert_eq!(lines.len(), 3);

    let spec = BoundSpec::new(1, BoundFormula::Vidyasagar78).unwrap();
    let row_01: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row_01[0], "1");
    assert_eq!(row_01[3], "622");
    assert_eq!(
        row_01[4],
        spec.evaluate_predictive(0.1, 0.1).unwrap().to_string()
    );
    let row_02: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(row_02[3], "271");
    assert_eq!(row_02[4], "622");
}

#[test]
fn bounds_with_empty_range_prints_header_then_fails() {
    let out = bin()
        .args(["bounds", "--d", "1", "--formula", "corollary_predictive"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert_eq!(stdout_of(&out), "d,delta,epsilon,n_pac,n_predictive\n");
    assert!(stderr_of(&out).contains("empty delta or epsilon range"));
}

#[test]
fn bounds_rejects_unknown_formula() {
    let out = bin()
        .args(["bounds", "--d", "1", "--delta", "0.1", "--epsilon", "0.1"])
        .args(["--formula", "nope"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).starts_with("error:"));
}

#[test]
fn vcdim_certifies_each_family() {
    let cases = [
        ("thresholds", "1,2,3,4,5,6,7,8"),
        ("intervals", "1,2,3,4,5,6,7,8"),
        ("unions:2", "1,2,3,4,5,6,7,8,9,10"),
    ];
    for (class, grid) in cases {
        let out = bin()
            .args(["vcdim", "--class", class, "--grid", grid])
            .output()
            .unwrap();
        assert_eq!(code_of(&out), 0, "{class}: stderr {}", stderr_of(&out));
        assert!(
            stdout_of(&out).contains("verdict=match"),
            "{class}: {}",
            stdout_of(&out)
        );
    }
}

#[test]
fn vcdim_flags_mis_declared_dimension() {
    let out = bin()
        .args(["vcdim", "--class", "thresholds:declared=2"])
        .args(["--grid", "1,2,3,4,5,6,7,8"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 2);
    let text = stdout_of(&out);
    assert!(text.contains("declared=2"), "{text}");
    assert!(text.contains("brute_force=1"), "{text}");
    assert!(text.contains("verdict=mismatch"), "{text}");
}

#[test]
fn vcdim_rejects_uncertifiable_declared_dimension() {
    // unions of 4 intervals declare VC 8, past the brute-force cap
    let out = bin()
        .args(["vcdim", "--class", "unions:4", "--grid", "1,2,3,4,5,6,7,8"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("brute-force cap"));
}

#[test]
fn vcdim_rejects_oversized_grid() {
    let out = bin()
        .args(["vcdim", "--class", "thresholds"])
        .args(["--grid", "1,2,3,4,5,6,7,8,9,10,11"])
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("limited to 10 points"));
}

#[test]
fn validate_prints_plan_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["validate", "--config"])
        .arg(repo_config("pac_mixture.json"))
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("ok: kind=predictive_pac trials=2000"), "{text}");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn validate_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("broken.json");
    fs::write(&config, "{ this is not json").unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["validate", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).starts_with("error:"));
}

#[test]
fn run_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("smoke.json");
    fs::write(&config, SMOKE_CONFIG).unwrap();

    let run = |extra: &[&str], out_name: &str| -> (i32, String, Vec<u8>, Vec<u8>) {
        let out_dir = dir.path().join(out_name);
        fs::create_dir(&out_dir).unwrap();
        let out = bin()
            .args(["run", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out_dir)
            .args(extra)
            .output()
            .unwrap();
        let csv = fs::read(out_dir.join("smoke.csv")).expect("CSV written");
        let summary = fs::read(out_dir.join("smoke_summary.json")).expect("summary written");
        (code_of(&out), stdout_of(&out), csv, summary)
    };

    let (code, text, csv_a, summary_a) = run(&[], "a");
    assert_eq!(code, 0, "{text}");
    assert_eq!(text.matches("wrote ").count(), 2, "{text}");
    assert!(text.trim_end().ends_with("verdict: pass"), "{text}");

    let (_, _, csv_b, summary_b) = run(&[], "b");
    assert_eq!(csv_a, csv_b, "rerun changed the CSV");
    assert_eq!(summary_a, summary_b, "rerun changed the summary");

    let (_, _, csv_w1, _) = run(&["--workers", "1"], "w1");
    let (_, _, csv_w8, _) = run(&["--workers", "8"], "w8");
    assert_eq!(csv_w1, csv_w8, "worker count changed the CSV");
    assert_eq!(csv_a, csv_w1, "explicit workers changed the CSV");

    let (code, _, csv_s1, _) = run(&["--seed", "999"], "s1");
    assert_eq!(code, 0);
    assert_ne!(csv_a, csv_s1, "seed override had no effect");
    let (_, _, csv_s2, _) = run(&["--seed", "999"], "s2");
    assert_eq!(csv_s1, csv_s2, "seed override not deterministic");
}

#[test]
fn run_underpowered_verdict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("underpowered.json");
    fs::write(&config, UNDERPOWERED_CONFIG).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 2, "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).trim_end().ends_with("verdict: fail"));
    // outputs are still written so the failure can be inspected
    assert!(dir.path().join("underpowered.csv").exists());
    assert!(dir.path().join("underpowered_summary.json").exists());
}

#[test]
fn run_rejects_zero_workers() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("smoke.json");
    fs::write(&config, SMOKE_CONFIG).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .args(["--workers", "0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).starts_with("error:"));
}

#[test]
fn gc_streams_rows_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gc.json");
    fs::write(&config, GC_SMOKE_CONFIG).unwrap();
    let out = bin().args(["gc", "--config"]).arg(&config).output().unwrap();
    assert_eq!(code_of(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,trial,dev_predictive,dev_classical");
    assert_eq!(lines.len(), 1 + 2 * 40);
    assert!(lines[1..=40].iter().all(|l| l.starts_with("5,")));
    assert!(lines[41..].iter().all(|l| l.starts_with("20,")));
}

#[test]
fn gc_rejects_other_experiment_kinds() {
    let out = bin()
        .args(["gc", "--config"])
        .arg(repo_config("pac_mixture.json"))
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 1);
    assert!(stderr_of(&out).contains("gc_curve"));
}
