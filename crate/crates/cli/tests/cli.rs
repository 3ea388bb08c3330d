//! End-to-end runs of the `lab` and `refdist` binaries.

use std::fs;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lab")).args(args).output().expect("lab runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_names_every_experiment() {
    let out = lab(&["list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for id in ["step-gue", "critical-shock-lpp", "density-profile", "fkg-floor", "localshift"] {
        assert!(text.contains(id), "{id} missing from:\n{text}");
    }
}

#[test]
fn refdist_eval_prints_the_distribution_value() {
    let out = Command::new(env!("CARGO_BIN_EXE_refdist"))
        .args(["eval", "--ensemble", "goe", "--s", "-1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.583_789_895_519_749).abs() < 1e-8, "{v}");
}

#[test]
fn refdist_table_writes_csv_and_rejects_out_of_range_grids() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gue.csv");
    let out = lab(&["refdist", "table", "--grid", "-2:2:5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,cdf,quad_order");
    assert_eq!(lines.len(), 6);
    assert!(lines[3].starts_with("0,0.9693728"));

    let bad = lab(&["refdist", "table", "--grid", "-20:0:3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn run_writes_reports_and_identical_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(&config, r#"{"experiment":"transversal","t":40,"replicas":30,"seed":5}"#).unwrap();
    let run = |name: &str, threads: &str| {
        let out_dir = dir.path().join(name);
        let o = lab(&[
            "run", "transversal", "--config", config.to_str().unwrap(), "--out", out_dir.to_str().unwrap(),
            "--threads", threads,
        ]);
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("transversal"));
        out_dir
    };
    let a = run("a", "1");
    let b = run("b", "2");
    let report = fs::read(a.join("report.json")).unwrap();
    assert_eq!(report, fs::read(b.join("report.json")).unwrap());
    assert!(a.join("run_meta.json").exists());
    assert!(a.join("exceedance_max.csv").exists());
    assert!(String::from_utf8(report).unwrap().contains(r#""experiment": "transversal""#));
}

#[test]
fn run_failures_exit_with_code_two() {
    let unknown = lab(&["run", "no-such-experiment"]);
    assert_eq!(unknown.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(&config, r#"{"experiment":"step-gue","t":40,"beta":0.5}"#).unwrap();
    let unused = lab(&["run", "step-gue", "--config", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(unused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unused.stderr).contains("beta"));

    let mismatch = lab(&["run", "transversal", "--config", config.to_str().unwrap()]);
    assert_eq!(mismatch.status.code(), Some(2));
}
