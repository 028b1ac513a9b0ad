use std::path::Path;
use std::process::{Command, Output};

fn binsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binsum"))
        .args(args)
        .env_remove("BINSUM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn bigint_ops(out: &Output) -> u64 {
    stderr(out)
        .lines()
        .find_map(|l| l.strip_prefix("bigint_ops="))
        .expect("stats line")
        .parse()
        .unwrap()
}

#[test]
fn compute_single_value() {
    let out = binsum(&["compute", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"kind\":\"s_n\",\"n\":2,\"value\":\"696\"}\n"
    );
}

#[test]
fn compute_range_rows() {
    let out = binsum(&["compute", "--n-min", "0", "--n-max", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "kind,n,k,value\ns_n,0,,-1\ns_n,1,,40\ns_n,2,,696\ns_n,3,,23408\n"
    );
}

#[test]
fn compute_other_kinds() {
    let out = binsum(&["compute", "--n", "2", "--kind", "summand", "--k", "0"]);
    assert_eq!(
        stdout(&out),
        "{\"k\":0,\"kind\":\"summand\",\"n\":2,\"value\":\"13860\"}\n"
    );
    let out = binsum(&["compute", "--n", "2", "--kind", "t", "--k", "1"]);
    assert_eq!(
        stdout(&out),
        "{\"k\":1,\"kind\":\"t\",\"n\":2,\"value\":\"80\"}\n"
    );
    let out = binsum(&["compute", "--n", "2", "--kind", "t"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_quotient() {
    let out = binsum(&["certify", "--n", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["quotient"], "80");
    assert_eq!(v["cnk_divides"], true);
    assert_eq!(v["margins"][0]["p"], 2);
}

#[test]
fn scan_row_format() {
    let out = binsum(&[
        "scan-floor",
        "--m-max",
        "3",
        "--n-max",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "m,n,k\n3,2,0\n3,2,2\n");

    let out = binsum(&["scan-floor", "--m-max", "3", "--n-max", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["violations"][0],
        serde_json::json!({"m": 3, "n": 2, "k": 0})
    );
    assert_eq!(v["all_in_exception_set"], true);
}

#[test]
fn empty_results() {
    let out = binsum(&["congruence", "--claim", "mod-p2", "--max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "[]\n");
    let out = binsum(&[
        "congruence",
        "--claim",
        "mod-p2",
        "--max",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&out),
        "claim,parameter,lhs_residue,expected_residue,holds\n"
    );
    let out = binsum(&[
        "scan-floor",
        "--m-max",
        "2",
        "--n-max",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&out), "m,n,k\n");
}

#[test]
fn exit_codes() {
    assert_eq!(binsum(&["--help"]).status.code(), Some(0));
    assert_eq!(binsum(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(binsum(&["compute"]).status.code(), Some(1));
    assert_eq!(
        binsum(&["compute", "--n", "2", "--parallelism", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        binsum(&["congruence", "--claim", "mod8", "--max", "20"])
            .status
            .code(),
        Some(0)
    );
    let out = binsum(&["congruence", "--claim", "fermat", "--max", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("\"operation\":\"fermat_quotient\""));
}

#[test]
fn ceilings_need_override() {
    let out = binsum(&["compute", "--n", "5001"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--unsafe-large"));
    assert_eq!(
        binsum(&["verify-all", "--n-max", "1001"]).status.code(),
        Some(1)
    );
    assert_eq!(
        binsum(&[
            "compute",
            "--n",
            "5001",
            "--unsafe-large",
            "--kind",
            "summand",
            "--k",
            "0"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn injected_fault_is_reported() {
    let out = binsum(&[
        "compute",
        "--n-min",
        "1",
        "--n-max",
        "10",
        "--inject-fault",
        "--parallelism",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kind"], "counterexample");
    assert_eq!(v["operation"], "s");
    assert_eq!(v["parameters"], serde_json::json!({"n": 1}));
    assert!(stderr(&out).contains("falsified: s(n=1)"));
}

#[test]
fn reports_independent_of_parallelism() {
    for args in [
        &["certify", "--n-max", "25"][..],
        &["compute", "--n-max", "60", "--format", "csv"],
        &["asymptote", "--n-max", "200", "--stride", "40"],
        &["verify-all", "--n-max", "30"],
    ] {
        let one = binsum(&[args, &["--parallelism", "1"]].concat());
        let four = binsum(&[args, &["--parallelism", "4"]].concat());
        assert_eq!(one.status.code(), four.status.code(), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert!(!one.stdout.is_empty());
    }
}

#[test]
fn verify_all_records_each_check() {
    let out = binsum(&["verify-all", "--n-max", "12"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| r["holds"] == false)
        .map(|r| r["check"].as_str().unwrap())
        .collect();
    // s_{p-1} mod p is (p+1)/6 for p = 5 mod 6, not floor((p-1)/6).
    assert_eq!(failed, ["fermat_quotient"]);
    assert_eq!(out.status.code(), Some(2));
    let fermat = rows
        .iter()
        .find(|r| r["check"] == "fermat_quotient")
        .unwrap();
    assert_eq!(fermat["counterexample"]["parameters"]["p"], 5);

    let out = binsum(&["verify-all", "--n-max", "12", "--inject-fault"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let integrality = &v[0];
    assert_eq!(integrality["check"], "integrality");
    assert_eq!(integrality["holds"], false);
    assert_eq!(integrality["counterexample"]["operation"], "s");
}

fn cached_run(cache: &Path, args: &[&str]) -> Output {
    let cache = cache.to_str().unwrap();
    binsum(&[args, &["--cache", cache, "--stats"]].concat())
}

#[test]
fn warm_cache_is_identical_and_cheaper() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let args = ["bounds", "--n-max", "40"];
    let cold = cached_run(&cache, &args);
    let warm = cached_run(&cache, &args);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert!(bigint_ops(&warm) < bigint_ops(&cold));
    assert_eq!(bigint_ops(&warm), 0);

    // A different format is a different entry.
    let csv = cached_run(&cache, &["bounds", "--n-max", "40", "--format", "csv"]);
    assert!(bigint_ops(&csv) > 0);
}

#[test]
fn stale_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    std::fs::write(&cache, r#"{"version":"binsum-cache/0","entries":{}}"#).unwrap();
    let out = cached_run(&cache, &["compute", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("does not match"));
    assert!(bigint_ops(&out) > 0);
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.contains("binsum-cache/1"));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_binsum"))
        .args(["compute", "--n", "4"])
        .env("BINSUM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("binsum-cache.json").exists());
}

#[test]
fn failures_are_not_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let out = cached_run(&cache, &["congruence", "--claim", "fermat", "--max", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!cache.exists());
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = binsum(&["compute", "--n", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "{\"kind\":\"s_n\",\"n\":1,\"value\":\"40\"}\n"
    );

    let bad = dir.path().join("missing").join("s.json");
    let out = binsum(&["compute", "--n", "1", "--output", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pi_series_report() {
    let out = binsum(&["pi-series", "--terms", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["numerator"], "5");
    assert_eq!(v["denominator"], "36");
    let out = binsum(&["pi-series", "--terms", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["brackets_reference"], true);
}

#[test]
fn bounds_tight_at_one() {
    let out = binsum(&["bounds", "--n", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lower"], "40/1");
    assert_eq!(v["upper"], "40/1");
    assert_eq!(v["lower_tight"], true);
    let out = binsum(&["bounds", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        (v["lower"].as_str(), v["s"].as_str(), v["upper"].as_str()),
        (Some("616/1"), Some("696"), Some("924/1"))
    );
}

#[test]
fn bench_agrees() {
    let out = binsum(&["bench", "--n", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["agree"], true);
    assert!(v["naive_peak_bits"].as_u64().unwrap() > v["factored_peak_bits"].as_u64().unwrap());
}
