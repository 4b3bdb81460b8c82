use std::process::{Command, Output};

fn pwkrein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwkrein"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mu_example_table() {
    let o = pwkrein(&[
        "mu",
        "--nu",
        "0",
        "--n",
        "1",
        "--a",
        "0.5",
        "--rep",
        "bordered,wronskian",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("a,b,bordered-gram,wronskian,max_rel_disagreement")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        &row[..4],
        [
            "5.0000000000000000e-1",
            "2.5000000000000000e-1",
            "1.3333333333333333e+0",
            "1.3333333333333333e+0"
        ]
    );
    assert!(row[4].parse::<f64>().unwrap() < 1e-40);
    assert!(lines.next().is_none());
}

#[test]
fn range_grid_and_json() {
    let o = pwkrein(&[
        "mu",
        "--nu",
        "1",
        "--n",
        "2",
        "--a-start",
        "0.2",
        "--a-stop",
        "0.8",
        "--a-count",
        "4",
        "--format",
        "json",
        "--sig-digits",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["a"].to_string(), "2.00000e-1");
    assert_eq!(rows[3]["a"].to_string(), "8.00000e-1");
    for r in rows {
        assert!(r["max_rel_disagreement"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["mu", "--nu", "0", "--n", "1", "--a", ""][..],
        &["mu", "--nu", "0", "--n", "1", "--a", "1.5"],
        &["mu", "--nu", "0", "--n", "1", "--a", "abc"],
        &["mu", "--nu", "0", "--n", "1"],
        &[
            "mu",
            "--nu",
            "0",
            "--n",
            "1",
            "--a",
            "0.5",
            "--a-start",
            "0.1",
            "--a-stop",
            "0.2",
        ],
        &[
            "mu", "--nu", "0", "--n", "1", "--a", "0.5", "--rep", "nonsense",
        ],
        &["pvi", "--nu", "0", "--n", "0", "--a", "0.5"],
        &["verify", "--suite", "everything"],
        &["frobnicate"],
    ] {
        let o = pwkrein(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn computation_failure_exits_1() {
    let o = pwkrein(&[
        "mu",
        "--nu",
        "0",
        "--n",
        "3",
        "--a",
        "0.5,0.9999",
        "--digits",
        "15",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(
        rows[2].contains(",,"),
        "failed cells are left empty: {}",
        rows[2]
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("ill-conditioned"));
}

#[test]
fn pvi_lowest_case() {
    let o = pwkrein(&["pvi", "--nu", "0", "--n", "1", "--a", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(
        row.starts_with("5.0000000000000000e-1,2.5000000000000000e-1,"),
        "{row}"
    );
    let q: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(q, 0.4);
    assert!(row.ends_with(",5.0000000000000000e-1,-2.0000000000000000e+0,5.0000000000000000e-1,0.0000000000000000e+0,ok"));
}

#[test]
fn verify_is_deterministic_and_seeded() {
    let run = |seed: &str| pwkrein(&["verify", "--suite", "detid", "--seed", seed]);
    let (a, b, c) = (run("3"), run("3"), run("4"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["meta"]["total"], 225);
    assert_eq!(v["meta"]["failed"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 225);
}

#[test]
fn verify_restricted_envelope_csv() {
    let o = pwkrein(&[
        "verify", "--suite", "krein", "--nu", "0.5", "--n", "2", "--a", "0.4", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("suite,id,inputs,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,tolerance,mode,pass,note")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|r| r.starts_with("krein,") && r.contains(",true,")));
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "nu = 0\nn = 1\na = [0.5]\nrep = \"bordered,wronskian\"\nsig_digits = 5\n",
    )
    .unwrap();
    let out = dir.path().join("mu.csv");
    let o = pwkrein(&[
        "--config",
        cfg.to_str().unwrap(),
        "mu",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("a,b,bordered-gram,wronskian,max_rel_disagreement\n5.0000e-1,2.5000e-1,1.3333e+0,1.3333e+0,"), "{text}");

    // Command-line flags win over the file.
    let o = pwkrein(&["--config", cfg.to_str().unwrap(), "mu", "--sig-digits", "3"]);
    assert!(stdout(&o).contains("\n5.00e-1,2.50e-1,1.33e+0,"));

    std::fs::write(&cfg, "[table]\nx = 1\n").unwrap();
    assert_eq!(
        pwkrein(&["--config", cfg.to_str().unwrap(), "mu"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("absent.toml");
    assert_eq!(
        pwkrein(&["--config", missing.to_str().unwrap(), "mu"])
            .status
            .code(),
        Some(2)
    );
}
