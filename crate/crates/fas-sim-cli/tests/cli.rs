//! End-to-end checks of the binary: exit codes, diagnostics, and the
//! files a run leaves behind.

use std::path::Path;
use std::process::{Command, Output};

use fas_sim::{Metric, ResultTable};

const SMOKE_CONFIG: &str = r#"
label = "smoke"
users = 3
scheme = "rsma"
ports = 4
trials = 1024

[snr_db]
min = 0.0
max = 20.0
steps = 3
"#;

fn fas_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fas-sim")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_schemes_reports_the_registry() {
    let out = fas_sim(&["list-schemes"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    for needle in ["rsma", "noma", "max_gain", "fixed:<i>"] {
        assert!(stdout.contains(needle), "missing {needle} in: {stdout}");
    }
}

#[test]
fn validate_accepts_a_minimal_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "smoke.toml", SMOKE_CONFIG);
    let out = fas_sim(&["validate", "--config", &config]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("ok: 1 scenario(s)"), "stdout: {stdout}");
    assert!(stdout.contains("smoke"), "stdout: {stdout}");
}

#[test]
fn validate_reports_every_problem_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "broken.toml",
        "scheme = \"cdma\"\nports = 8\ntrials = 100\n",
    );
    let out = fas_sim(&["validate", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    for needle in ["users", "scheme"] {
        assert!(stderr.contains(needle), "missing {needle} in: {stderr}");
    }
}

#[test]
fn missing_config_file_is_a_hard_error() {
    let out = fas_sim(&["validate", "--config", "/nonexistent/nope.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error"));
}

#[test]
fn run_writes_a_csv_table_and_plot_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "smoke.toml", SMOKE_CONFIG);
    let out_dir = dir.path().join("out");
    let out = fas_sim(&[
        "run",
        "--config",
        &config,
        "--workers",
        "1",
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--emit-plots",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let table = ResultTable::parse_csv(&out_dir.join("smoke.csv")).unwrap();
    // 3 SNR points x (network outage + 3 per-user outages + sum rate).
    assert_eq!(table.rows.len(), 15);
    assert!(table.find("smoke", Metric::NetworkOutage, 10.0).is_some());
    assert!(table.find("smoke", Metric::AvgSumRate, 20.0).is_some());

    let op_script = std::fs::read_to_string(out_dir.join("smoke-op.gp")).unwrap();
    assert!(op_script.contains("set logscale y"));
    let rate_script = std::fs::read_to_string(out_dir.join("smoke-rate.gp")).unwrap();
    assert!(!rate_script.contains("set logscale y"));
}

#[test]
fn seed_override_is_deterministic_and_effective() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "smoke.toml", SMOKE_CONFIG);
    let csv_for = |seed: &str, sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = fas_sim(&[
            "run",
            "--config",
            &config,
            "--workers",
            "1",
            "--seed",
            seed,
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(out_dir.join("smoke.csv")).unwrap()
    };
    let first = csv_for("41", "a");
    let repeat = csv_for("41", "b");
    let other = csv_for("42", "c");
    assert_eq!(first, repeat, "same seed must reproduce the same table");
    assert_ne!(first, other, "different seeds must change the table");
}
