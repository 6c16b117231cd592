use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_patchasym"))
}

#[test]
fn empty_sweep_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["--scenario", "kernels2d", "--eps-list", "", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("kernels2d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "scenario = capacity2d\neps_list = 0.1, 0.05\nseed = 1\n").unwrap();
    let out = bin()
        .arg("--config")
        .arg(&cfg)
        .args(["--eps-list", "2^-3,2^-4,2^-5", "--threads", "2", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("capacity2d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(dir.path().join("capacity2d.svg").exists());
    assert!(dir.path().join("capacity2d.md").exists());
}

#[test]
fn configuration_errors_exit_with_2() {
    for args in [
        vec!["--scenario", "nope"],
        vec!["--scenario", "dirichlet2d", "--eps-list", "0.1,0.2"],
        vec!["--scenario", "dirichlet2d", "--mesh-h", "zero"],
        vec![],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = bin().arg("--config").arg("/nonexistent/run.cfg").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
