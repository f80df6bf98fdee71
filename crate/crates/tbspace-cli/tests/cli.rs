use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tbspace"))
}

#[test]
fn verify_orders_suite_passes() {
    let out = bin().args(["verify", "--suite", "orders"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(text.contains("PASS: order SERPENT linear layer"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = bin().args(["verify", "--suite", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn distinguish_runs_from_config_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "# reduced cipher smoke run\n\
         cipher = reduced-m2b2r3\n\
         embedding = eps\n\
         matrices = 8\n\
         rows = 3\n\
         policy = uniform-admissible\n\
         baseline_trials = 200\n\
         validation_sets = 2\n\
         seed = 42\n",
    )
    .unwrap();
    let report_path = dir.path().join("report.txt");
    let out = bin()
        .args([
            "distinguish",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            &format!("output={}", report_path.display()),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict:"), "missing verdict in: {text}");
    assert!(report_path.exists());

    // same seed must reproduce the report except for the volatile lines
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.starts_with("timestamp:") && !l.starts_with("wall_time_ms:"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let again = bin()
        .args(["distinguish", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(strip(&text), strip(&String::from_utf8(again.stdout).unwrap()));
}

#[test]
fn distinguish_requires_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noseed.cfg");
    std::fs::write(&cfg, "cipher = reduced-m2b2r3\n").unwrap();
    let out = bin()
        .args(["distinguish", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_matrix_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.tbmx");
    let out = bin()
        .args([
            "export-matrix",
            "--rows",
            "6",
            "--seed",
            "7",
            "--path",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let inspect = bin()
        .args(["export-matrix", "--inspect", "--path", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(inspect.status.success());
    let text = String::from_utf8(inspect.stdout).unwrap();
    assert!(text.contains("rows: 6"));
    assert!(text.contains("cols: 8"));
}

#[test]
fn rank_dist_prints_table() {
    let out = bin()
        .args(["rank-dist", "--rows", "3", "--trials", "200", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rank  observed"));
    assert!(text.contains("rho_estimate"));
}
