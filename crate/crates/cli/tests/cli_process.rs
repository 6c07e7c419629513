//! End-to-end checks of the installed binary: exit codes, deterministic
//! trajectory files, scenario-file ingestion.

use std::path::PathBuf;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_suddenlab"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("suddenlab-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn reproduce_writes_byte_identical_csv_across_runs() {
    let dir_a = temp_dir("repro-a");
    let dir_b = temp_dir("repro-b");
    for dir in [&dir_a, &dir_b] {
        let status = binary()
            .args(["reproduce", "diosi", "--out"])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(dir_a.join("diosi_negativity_pt0.csv")).unwrap();
    let b = std::fs::read(dir_b.join("diosi_negativity_pt0.csv")).unwrap();
    assert_eq!(a, b, "trajectory files differ between identical runs");
    assert!(a.starts_with(b"t,value\n"));
    let _ = std::fs::remove_dir_all(dir_a);
    let _ = std::fs::remove_dir_all(dir_b);
}

#[test]
fn worker_count_does_not_change_output() {
    let dir_a = temp_dir("workers-1");
    let dir_b = temp_dir("workers-4");
    for (dir, workers) in [(&dir_a, "1"), (&dir_b, "4")] {
        let status = binary()
            .args(["reproduce", "ye04", "--workers", workers, "--out"])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(dir_a.join("ye04_concurrence.csv")).unwrap();
    let b = std::fs::read(dir_b.join("ye04_concurrence.csv")).unwrap();
    assert_eq!(a, b, "worker count changed the trajectory bytes");
    let _ = std::fs::remove_dir_all(dir_a);
    let _ = std::fs::remove_dir_all(dir_b);
}

#[test]
fn scenario_errors_exit_with_code_1() {
    let dir = temp_dir("bad-scn");
    let path = dir.join("bad.scn");
    std::fs::write(&path, "[state]\nkind = bell\nwhich = psi_minus\n[noise]\nkind = nonsense\n")
        .unwrap();
    let output = binary().arg("deathtime").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("nonsense"), "stderr: {stderr}");

    let missing = dir.join("missing.scn");
    let output = binary().arg("deathtime").arg(&missing).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn deathtime_runs_a_scenario_file() {
    let dir = temp_dir("run-scn");
    let path = dir.join("dephasing-bell.scn");
    std::fs::write(
        &path,
        "name = dephasing-bell\n\n[state]\nkind = bell\nwhich = phi_plus\n\n\
         [noise]\nkind = dephasing_multilocal\nrate = 1.0\n\n\
         [sweep]\nt_max = 5.0\npoints = 128\n\n\
         [detect]\nmeasures = concurrence\ntolerance = 1e-8\n",
    )
    .unwrap();
    let output = binary().arg("deathtime").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8_lossy(&output.stdout);
    // Bell-pair dephasing concurrence e^{−2Γt} decays but never dies
    assert!(stdout.contains("asymptotic"), "stdout: {stdout}");
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn unknown_preset_exits_with_code_1() {
    let output = binary().args(["reproduce", "not-a-preset"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn env_var_sets_output_directory() {
    let dir = temp_dir("env-out");
    let status = binary()
        .args(["reproduce", "lcd07"])
        .env("SUDDENLAB_OUT", &dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.join("lcd07_concurrence.csv").exists());
    let _ = std::fs::remove_dir_all(dir);
}
