use std::fs;
use std::process::{Command, Output};

fn ssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssp")).args(args).output().expect("run ssp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_one_line_failure(o: &Output) {
    assert_eq!(o.status.code(), Some(2), "stderr: {}", stderr(o));
    assert_eq!(stderr(o).lines().count(), 1, "stderr: {}", stderr(o));
    assert!(o.stdout.is_empty());
}

#[test]
fn census_csv_happy_path() {
    let o = ssp(&["census", "--curve", "0,0,0,-1,1", "--x", "2000", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,n1,n2,a1,a2,delta,class"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("7,7,"));
    assert!(!text.contains("\n19,"));
    assert!(!text.contains("\n151,"));
    assert_eq!(text.lines().count(), 1 + 303 - 3 - 2);
}

#[test]
fn census_is_byte_identical_across_runs() {
    let args = ["census", "--curve", "1,0,0,0,0,1", "--x", "400", "--format", "json"];
    let a = ssp(&args);
    let b = ssp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["parameters"]["x"], 400.0);
    assert_eq!(v["parameters"]["discriminant"], "3125");
}

#[test]
fn curve_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.txt");
    fs::write(&path, "# y^2 = x^5 - x + 1\nf: 1,0,0,0,-1,1\n").unwrap();
    let from_file = ssp(&["census", "--curve", path.to_str().unwrap(), "--x", "100"]);
    let inline = ssp(&["census", "--curve", "0,0,0,-1,1", "--x", "100"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, inline.stdout);
}

#[test]
fn trace_only_census() {
    let o = ssp(&["census", "--curve", "0,0,0,0,1", "--x", "50", "--trace-only"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("p,n1,a1,ss_candidate\n7,"));
}

#[test]
fn classify_examples() {
    let o = ssp(&["classify", "--a1", "0", "--a2", "14", "--p", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ss_split\n");
    let o = ssp(&["classify", "--a1", "0", "--a2", "0", "--p", "5"]);
    assert_one_line_failure(&o);
    assert!(stderr(&o).contains("p >= 7"));
    let o = ssp(&["classify", "--a1", "0", "--a2", "-7", "--p", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "ss_simple_mp");
    assert_eq!(v["p_rank"], 0);
}

#[test]
fn rm_factor_example() {
    // b = (2 + 2 sqrt 2)/2 = 1 + sqrt 2: a1 = 2, a2 = -1 + 2q
    let o = ssp(&["rm-factor", "--a1", "2", "--a2", "13", "--p", "7", "--d", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "(2 + 2*sqrt(2))/2\n");
    assert_one_line_failure(&ssp(&["rm-factor", "--a1", "2", "--a2", "13", "--p", "7", "--d", "4"]));
}

#[test]
fn failures_print_one_line() {
    assert_one_line_failure(&ssp(&["frobnicate"]));
    assert_one_line_failure(&ssp(&["census", "--curve", "/nonexistent/curve.txt", "--x", "100"]));
    assert_one_line_failure(&ssp(&["census", "--curve", "0,0,0,0,0", "--x", "100"]));
    assert_one_line_failure(&ssp(&["bounds", "--x", "15"]));
    assert_one_line_failure(&ssp(&["classify", "--a1", "100", "--a2", "0", "--p", "7"]));
    assert_one_line_failure(&ssp(&["verify-splitting", "--ell", "9"]));
    assert_one_line_failure(&ssp(&["census", "--x", "100"]));
}

#[test]
fn failed_run_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = ssp(&["bounds", "--x", "2", "--out", out.to_str().unwrap()]);
    assert_one_line_failure(&o);
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    let o = ssp(&["bounds", "--x", "1e6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let rm = v["theorem_bound"]["rm_or_qm"].as_f64().unwrap();
    assert!((rm - 36130.0).abs() < 20.0);
}

#[test]
fn verify_splitting_agrees() {
    let o = ssp(&["verify-splitting"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("i,ell,p,legendre_side,factor_side,agree\n"));
    assert_eq!(text.lines().count(), 1 + 19 * 95);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn sieve_demo_from_census() {
    let dir = tempfile::tempdir().unwrap();
    let census = dir.path().join("census.csv");
    let o = ssp(&["census", "--curve", "0,0,0,0,1", "--x", "2000", "--out", census.to_str().unwrap()]);
    assert!(o.status.success());
    let config = dir.path().join("sieve.json");
    fs::write(&config, r#"{"x": 2000, "t": 2, "primes": [5, 13], "case": 5}"#).unwrap();
    let o = ssp(&["sieve-demo", "--census", census.to_str().unwrap(), "--config", config.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["partition_exact"], true);
    assert_eq!(v["parameters"]["class"], "ss_split");
    let inline = ssp(&[
        "sieve-demo", "--census", census.to_str().unwrap(), "--x", "2000", "--case", "5", "--primes", "5,13",
    ]);
    let w: serde_json::Value = serde_json::from_slice(&inline.stdout).unwrap();
    assert_eq!(v["report"], w["report"]);
    // P_t >= x is a configuration error
    let o = ssp(&["sieve-demo", "--census", census.to_str().unwrap(), "--x", "60", "--case", "5", "--primes", "5,13"]);
    assert_one_line_failure(&o);
}

#[test]
fn verify_groups_reports_only_literal_closure_failures() {
    let o = ssp(&["verify-groups", "--ell", "30"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 100);
    for c in checks {
        if c["status"] == "fail" {
            assert_eq!(c["check"], "unipotent_prime_closure", "{c}");
        }
    }
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
    assert_eq!(v["parameters"]["max_ell"], 30);
}
