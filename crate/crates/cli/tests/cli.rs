use std::path::Path;
use std::process::{Command, Output};

fn bousq(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bousq"))
        .args(args)
        .current_dir(cwd)
        .env("BOUSQ_NO_COLOR", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_solutions_and_claims() {
    let dir = tempfile::tempdir().unwrap();
    let o = bousq(&["catalog", "--json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["solutions"].as_array().unwrap().len() >= 12);
    let claims = v["claims"].as_array().unwrap();
    assert!(claims.len() >= 12);
    assert!(claims
        .iter()
        .all(|c| !c["source"].as_str().unwrap().is_empty()));
    let text = stdout(&bousq(&["catalog"], dir.path()));
    assert!(text.contains("kink") && text.contains("claims"));
}

#[test]
fn kink_vanishes_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kink.csv");
    let o = bousq(
        &[
            "eval",
            "--solution",
            "kink",
            "--x",
            "-10:10:0.1",
            "--t",
            "0",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,t,u"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 200);
    let origin = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert_eq!(origin[2], 0.0);
    assert!(dir.path().join("kink.csv.meta.json").exists());
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "eval",
        "--solution",
        "gg_u3",
        "--x",
        "-2:2:0.5",
        "--t",
        "0:1:0.5",
    ];
    let a = bousq(&args, dir.path());
    let b = bousq(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines().skip(1) {
        for field in line.split(',') {
            let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(
                mantissa.chars().filter(|c| c.is_ascii_digit()).count(),
                17,
                "{field}"
            );
        }
    }
}

#[test]
fn verify_writes_report_and_passes_derived_claims() {
    let dir = tempfile::tempdir().unwrap();
    let o = bousq(
        &["verify", "--grid", "default", "--out", "report.json"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    let claims = report["claims"].as_array().unwrap();
    assert!(claims.len() >= 12);
    for c in claims.iter().filter(|c| c["kind"] == "derived") {
        assert_eq!(c["status"], "PASS", "{}", c["id"]);
    }
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("id,status,sup_residual,l2_residual\n"));
    let first = std::fs::read(dir.path().join("report.json")).unwrap();
    bousq(&["verify", "--out", "report.json"], dir.path());
    assert_eq!(
        first,
        std::fs::read(dir.path().join("report.json")).unwrap()
    );
}

#[test]
fn impossible_tolerance_is_a_derived_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = bousq(
        &["verify", "--derived-tol", "1e-300", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_supplies_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"solution": "soliton_sech2", "x": "0", "t": "0", "param": ["c=1"]}"#,
    )
    .unwrap();
    let o = bousq(&["eval", "--config", "cfg.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .parse::<f64>()
            .unwrap(),
        1.0
    );
    let o = bousq(
        &["eval", "--config", "cfg.json", "--solution", "kink"],
        dir.path(),
    );
    assert_eq!(
        stdout(&o)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .parse::<f64>()
            .unwrap(),
        0.0
    );
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"solution": "kink", "colour": 1}"#,
    )
    .unwrap();
    assert_eq!(
        bousq(&["eval", "--config", "bad.json", "--x", "0"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["eval", "--solution", "kink"],
        vec!["eval", "--solution", "kink", "--x", "0:1:0"],
        vec!["eval", "--solution", "breather", "--x", "0"],
        vec!["eval", "--solution", "kink", "--x", "0", "--param", "k=2"],
        vec!["elliptic", "--z", "0", "--m", "1.5"],
        vec!["simulate", "--n", "100"],
        vec!["frobnicate"],
    ] {
        assert_eq!(bousq(&args, dir.path()).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn elliptic_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = bousq(
        &["elliptic", "--z", "0:2:1", "--m", "0:1.5:0.5"],
        dir.path(),
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("z,m,sn,cn,dn"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert!((r[2] * r[2] + r[3] * r[3] - 1.0).abs() < 1e-14);
    }
}

#[test]
fn simulation_blowup_exit_code_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "simulate",
        "--initial",
        "noise",
        "--n",
        "32",
        "--length",
        "43.982297150257104",
        "--dt",
        "0.01",
        "--t-end",
        "10",
        "--k-cut",
        "nyquist",
        "--out-dir",
        "run",
    ];
    let o = bousq(&base, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let mut strict = base.to_vec();
    strict.push("--fail-on-blowup");
    let o = bousq(&strict, dir.path());
    assert_eq!(o.status.code(), Some(3));
    let run = dir.path().join("run");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "BLOWUP");
    assert!(summary["final_t"].as_f64().unwrap() < 10.0);
    assert!(std::fs::read_to_string(run.join("frames.csv"))
        .unwrap()
        .starts_with("t,x,u\n"));
    assert!(std::fs::read_to_string(run.join("diagnostics.csv"))
        .unwrap()
        .starts_with("t,mass,sup_norm,tail_energy\n"));
}

#[test]
fn filtered_soliton_run_completes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bousq(
        &[
            "simulate",
            "--initial",
            "soliton",
            "--n",
            "256",
            "--length",
            "100",
            "--t-end",
            "2",
            "--fail-on-blowup",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["status"], "COMPLETED");
    assert_eq!(summary["config"]["k_cut"], 1.0);
}
