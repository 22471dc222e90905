//! End-to-end checks of the `mblvqe` binary: flags, config files, exit
//! codes, and worker-count-independent output.

use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mblvqe"))
}

#[test]
fn variance_subcommand_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = binary()
        .args([
            "variance-vs-n",
            "--qubits",
            "3,4",
            "--regimes",
            "pm,hea",
            "--instances",
            "4",
            "--seed",
            "7",
            "--no-plot",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("variance-vs-n.csv").exists());
    assert!(out.join("manifest.json").exists());
    assert!(!out.join("variance-vs-n.svg").exists());
}

#[test]
fn empty_qubit_list_in_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "qubits = []\nregimes = [\"pm\"]\nseed = 1\n").unwrap();
    let output = binary()
        .args(["otoc", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("qubits: empty list"), "stderr: {stderr}");
}

#[test]
fn missing_seed_exits_2() {
    let output = binary()
        .args(["otoc", "--qubits", "4"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("seed: missing"));
}

#[test]
fn resource_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let output = binary()
        .args([
            "entropy",
            "--qubits",
            "22",
            "--regimes",
            "thermal",
            "--instances",
            "2",
            "--max-depth",
            "1",
            "--seed",
            "1",
            "--no-plot",
            "--out",
        ])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&output.stderr));
}

#[test]
fn invalid_figure_id_exits_2() {
    let output = binary()
        .args(["reproduce-fig", "--figure", "7x", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        "qubits = [3]\nregimes = [\"pm\"]\ninstances = 4\nseed = 1\nno_plot = true\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    let status = binary()
        .args(["variance-vs-n", "--config"])
        .arg(&config)
        .args(["--seed", "99", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("variance-vs-n.csv")).unwrap();
    let last_field = csv.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    assert_eq!(last_field, "99");
}

#[test]
fn cli_output_is_worker_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for workers in ["1", "2"] {
        let out = dir.path().join(format!("w{workers}"));
        let status = binary()
            .args([
                "otoc",
                "--qubits",
                "4",
                "--regimes",
                "dtc",
                "--instances",
                "4",
                "--max-depth",
                "3",
                "--seed",
                "5",
                "--no-plot",
                "--workers",
                workers,
                "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        csvs.push(std::fs::read(out.join("otoc.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn worker_env_var_is_honored_when_no_flag_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env");
    let status = binary()
        .env("MBLVQE_WORKERS", "2")
        .args([
            "variance-vs-n",
            "--qubits",
            "3",
            "--regimes",
            "pm",
            "--instances",
            "4",
            "--seed",
            "3",
            "--no-plot",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("variance-vs-n.csv").exists());
}
