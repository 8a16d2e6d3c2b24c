use std::process::Command;

fn qsqg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsqg"))
}

#[test]
fn regularity_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsqg()
        .args(["regularity", "--grid", "32", "--seed", "3", "--out"])
        .arg(dir.path())
        .env("QSQG_THREADS", "2")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("regularity: PASS"), "{stdout}");
    for f in [
        "config.toml",
        "regularity.csv",
        "summary.txt",
        "plot_x_k.csv",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let cfg = std::fs::read_to_string(dir.path().join("config.toml")).unwrap();
    assert!(cfg.contains("seed = 3"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.toml");
    std::fs::write(&file, "seed = 11\n[knobs]\namplitudes = [0.0]\n").unwrap();
    let out = qsqg()
        .args(["wellposed", "--grid", "32", "--seed", "3", "--config"])
        .arg(&file)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let cfg = std::fs::read_to_string(dir.path().join("o/config.toml")).unwrap();
    assert!(cfg.contains("seed = 11"));
}

#[test]
fn invalid_parameters_exit_with_error() {
    let out = qsqg()
        .args(["riesz", "--alpha", "0.9", "--beta", "0.8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = qsqg().args(["bogus"]).output().unwrap();
    assert!(!out.status.success());
}
