use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf-chern"))
        .args(args)
        .env("LOG_LEVEL", "off")
        .output()
        .expect("spawn hopf-chern")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn chern_family1_text() {
    let o = run(&["chern", "--family", "heegaard", "--mu", "-2..2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    for mu in -2..=2 {
        assert!(out.contains(&format!("chern={mu} ")), "{out}");
    }
}

#[test]
fn chern_json_shape() {
    let o = run(&[
        "chern", "--family", "podles", "--mu", "-1..1", "--s", "1/2", "--format", "json",
        "--verify",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["config"]["family"], "podles");
    assert_eq!(v["meta"]["config"]["s"], "1/2");
    let recs = v["records"].as_array().unwrap();
    let mus: Vec<i64> = recs.iter().map(|r| r["mu"].as_i64().unwrap()).collect();
    assert_eq!(mus, vec![-1, 0, 1]);
    for r in recs {
        assert_eq!(r["chern"], r["mu"]);
        assert_eq!(r["rank"], "1");
        assert_eq!(r["verification"]["connection"], true);
        assert_eq!(r["verification"]["idempotent"], true);
    }
}

#[test]
fn csv_is_reproducible_and_order_stable() {
    let args = [
        "chern", "--family", "podles", "--mu", "-2..2", "--s", "1/3", "--format", "csv", "--jobs",
        "3",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(
        lines.next(),
        Some("family,mu,s,rank,chern,exact_expr,verified,elapsed_ms")
    );
    let mus: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(mus, ["-2", "-1", "0", "1", "2"]);
}

#[test]
fn numeric_mode_agrees() {
    let o = run(&[
        "chern", "--family", "heegaard", "--mu", "-1..1", "--mode", "both", "--p", "1/3", "--q",
        "1/2", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in v["records"].as_array().unwrap() {
        assert_eq!(r["numeric"]["agrees"], true);
        let est = r["numeric"]["estimate"].as_f64().unwrap();
        assert!((est - r["mu"].as_f64().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn numeric_mode_needs_parameters() {
    let o = run(&[
        "chern", "--mode", "numeric", "--family", "podles", "--q", "1/2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--s"));
    let o = run(&[
        "chern", "--mode", "numeric", "--family", "heegaard", "--q", "1/2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["chern", "--family", "torus"]).status.code(), Some(2));
    assert_eq!(run(&["chern", "--mu", "a..b"]).status.code(), Some(2));
    assert_eq!(
        run(&["table", "--mode", "numeric", "--q", "1/2", "--p", "1/2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table_rows() {
    let o = run(&["table", "--family", "heegaard", "--mu", "0..2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(1, 0)\n(1, 1)\n(1, 2)\n");
}

#[test]
fn verify_suites() {
    let o = run(&[
        "verify",
        "--family",
        "heegaard",
        "--mu",
        "-1..1",
        "--confluence",
        "--representations",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"]["confluence"], true);
    assert_eq!(v["suites"]["representations"], true);
    assert!(v["suites"].get("quotient").is_none());
}

#[test]
fn verify_quotient_at_s_one_reports_non_alpha_representatives() {
    let o = run(&[
        "verify",
        "--family",
        "podles",
        "--s",
        "1",
        "--quotient",
        "--degree",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not alpha powers"));
}

#[test]
fn out_writes_file() {
    let dir = std::env::temp_dir().join(format!("hopf-chern-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = run(&[
        "chern",
        "--family",
        "heegaard",
        "--mu",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["records"][0]["chern"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn zero_budget_falls_back_to_sampled_s() {
    let o = run(&[
        "chern",
        "--family",
        "podles",
        "--mu",
        "1",
        "--s",
        "symbolic",
        "--time-budget-secs",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["records"][0];
    assert_eq!(r["s"], "sampled:0;1/3;1/2;1");
    assert_eq!(r["chern"], 1);
    assert_eq!(r["exact_expr"], "1;1;1;1");
}
