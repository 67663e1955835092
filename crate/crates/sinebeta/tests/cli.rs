//! End-to-end checks of the command-line surface.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sinebeta"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sinebeta-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn traces_subcommand_writes_csv_and_sidecar() {
    let dir = temp_dir("traces");
    let out = dir.join("traces.csv");
    let status = bin()
        .args([
            "traces", "--n", "8", "--beta", "2", "--k", "1,2", "--replicas", "200", "--seed",
            "3", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("k,estimate,std_error,replicas,within_lemma_range\n"));
    assert_eq!(csv.lines().count(), 3);
    let meta = std::fs::read_to_string(dir.join("traces.csv.meta")).unwrap();
    assert!(meta.contains("experiment = traces"));
    assert!(meta.contains("wall_seconds"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn recovery_subcommand_emits_summary_and_plot() {
    let dir = temp_dir("recovery");
    let out = dir.join("rec.csv");
    let status = bin()
        .args([
            "recovery", "--n", "64", "--beta", "1", "--radius", "2", "--set", "0:1", "--p-max",
            "1", "--replicas", "6", "--seed", "2", "--plot", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.join("rec_summary.csv").exists());
    assert!(dir.join("rec.gp").exists());
    let rows = std::fs::read_to_string(&out).unwrap();
    // 6 replicas x 2 depths + header.
    assert_eq!(rows.lines().count(), 13);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_drives_multiple_experiments() {
    let dir = temp_dir("config");
    let conf = dir.join("batch.conf");
    std::fs::write(
        &conf,
        format!(
            "[oracle]\nn = 2\nbeta = 2\nk = 1\nout = {}\n\n[testfn]\nradius = 2\np-max = 1\nout = {}\n",
            dir.join("o.csv").display(),
            dir.join("t.csv").display()
        ),
    )
    .unwrap();
    let status = bin().arg("--config").arg(&conf).status().unwrap();
    assert!(status.success());
    assert!(dir.join("o.csv").exists());
    assert!(dir.join("t.csv").exists());
    assert!(dir.join("t_p0.mixture").exists());
    assert!(dir.join("t_p1.mixture").exists());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn invalid_flags_fail_with_field_message() {
    let output = bin()
        .args(["traces", "--n", "4", "--beta", "0", "--replicas", "200"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("beta > 0"), "stderr: {stderr}");

    let output = bin().args(["bogus-subcommand"]).output().unwrap();
    assert!(!output.status.success());
}
