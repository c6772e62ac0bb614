use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn clvof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clvof"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn run_writes_artifacts_and_resolved_config_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let o = clvof(&["run", "--n", "32", "--out", p(&first), "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "timeseries.csv",
        "audit.log",
        "final_alpha.txt",
        "resolved.toml",
    ] {
        assert!(first.join(f).is_file(), "missing {f}");
    }
    let header = fs::read_to_string(first.join("timeseries.csv")).unwrap();
    assert!(header.starts_with("t,x_cl_num,theta_num_deg,x_cl_ref,theta_ref_deg,cell_i,regular\n"));

    let second = dir.path().join("b");
    let resolved = first.join("resolved.toml");
    let o = clvof(&["run", "--config", p(&resolved), "--out", p(&second)]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read(first.join("final_alpha.txt")).unwrap(),
        fs::read(second.join("final_alpha.txt")).unwrap()
    );
    assert_eq!(
        fs::read(first.join("timeseries.csv")).unwrap(),
        fs::read(second.join("timeseries.csv")).unwrap()
    );
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&clvof(&["run", "--n", "30"])), 1);
    assert_eq!(code(&clvof(&["run", "--cfl", "1.5"])), 1);
    assert_eq!(
        code(&clvof(&["run", "--config", "/definitely/not/here.toml"])),
        1
    );

    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        "[case]\nn = 64\nbogus = 1\n[field]\nkind = \"linear\"\nv0 = 0.0\nc1 = 0.0\nc2 = 0.0\n",
    )
    .unwrap();
    let o = clvof(&["run", "--config", p(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("configuration error"));

    let single = clvof(&["sweep", "--ns", "32", "--out", p(dir.path())]);
    assert_eq!(code(&single), 1, "a sweep with one size is rejected");
}

#[test]
fn unknown_method_is_a_usage_error() {
    let o = clvof(&["run", "--method", "magic"]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("magic"));
}

#[test]
fn translate_test_reports_all_schemes_and_passes_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = clvof(&[
        "translate-test",
        "--out",
        p(dir.path()),
        "--seed",
        "3",
        "--lines",
        "200",
        "--check",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for s in ["youngs", "elvira", "boundary-youngs", "boundary-elvira"] {
        let csv = dir.path().join(format!("translation_{s}.csv"));
        let body = fs::read_to_string(&csv).unwrap();
        assert!(body.starts_with("offset,angle_deg,error_deg\n"));
        assert_eq!(body.lines().count(), 201);
        assert!(text.contains(s));
    }
}

#[test]
fn translate_check_passes_at_wall_normal_angle() {
    // at 90 degrees every scheme is exact, so the check passes
    let dir = tempfile::tempdir().unwrap();
    let o = clvof(&[
        "translate-test",
        "--angle",
        "90",
        "--out",
        p(dir.path()),
        "--lines",
        "10",
        "--check",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn sweep_writes_summary_and_passes_check_for_youngs() {
    let dir = tempfile::tempdir().unwrap();
    let o = clvof(&[
        "sweep",
        "--ns",
        "32,64",
        "--method",
        "youngs",
        "--out",
        p(dir.path()),
        "--check",
    ]);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("N,dx_over_R0,E_theta_deg,E_cl,E1,order_theta,order_cl\n"));
    assert_eq!(summary.lines().count(), 3);
    assert!(dir.path().join("n32").join("timeseries.csv").is_file());
    // the angle order is not checked for Youngs; the contact point converges
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn vortex_check_on_coarse_meshes_is_a_regression() {
    // 32 and 64 cells give odd step counts, so the volume check fails
    let dir = tempfile::tempdir().unwrap();
    let o = clvof(&[
        "vortex-test",
        "--ns",
        "32,64",
        "--method",
        "elvira",
        "--out",
        p(dir.path()),
        "--check",
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("relative volume error"));
}

#[test]
fn vortex_test_rejects_non_vortex_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lin.toml");
    fs::write(
        &cfg,
        "[field]\nkind = \"linear\"\nv0 = 0.0\nc1 = 0.0\nc2 = 0.0\n",
    )
    .unwrap();
    let o = clvof(&["vortex-test", "--config", p(&cfg), "--ns", "32,64"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn vortex_test_runs_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let o = clvof(&["vortex-test", "--ns", "32,64", "--out", p(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for m in ["youngs", "elvira"] {
        assert!(dir.path().join(m).join("summary.csv").is_file());
    }
    assert!(stdout(&o).contains("boundary-elvira"));
}

#[test]
fn cfl_study_writes_one_table_per_courant_number() {
    let dir = tempfile::tempdir().unwrap();
    let o = clvof(&[
        "cfl-study",
        "--ns",
        "32,64",
        "--cfls",
        "0.3,0.9",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(dir.path().join("cfl_summary.csv")).unwrap();
    assert!(table.starts_with("cfl,order_theta,order_cl,order_e1\n"));
    assert_eq!(table.lines().count(), 3);
    assert!(dir.path().join("cfl_0.3").join("summary.csv").is_file());
    assert!(dir.path().join("cfl_0.9").join("summary.csv").is_file());
}
