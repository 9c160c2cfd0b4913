//! End-to-end checks of the binary: output determinism across worker
//! counts (the last acceptance criterion), the exit-code contract, cache
//! behavior, and the spec'd product examples.

use std::process::{Command, Output};

fn klim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klim"))
        .args(args)
        .env_remove("KLIM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn criterion_11_payloads_are_byte_identical_across_jobs() {
    for args in [
        vec!["betti", "--k", "2", "--l", "4", "--format", "json"],
        vec!["limit", "--q", "1", "--stage-k", "3", "--format", "json"],
        vec![
            "verify", "bicomplex", "--n", "5", "--m", "2", "--format", "json",
        ],
        vec![
            "verify", "leibniz", "--trials", "40", "--seed", "7", "--n", "9", "--format", "json",
        ],
    ] {
        let mut with_one = args.clone();
        with_one.extend(["--jobs", "1"]);
        let mut with_four = args.clone();
        with_four.extend(["--jobs", "4"]);

        let first = klim(&with_one);
        let second = klim(&with_one);
        let wide = klim(&with_four);
        assert!(first.status.success(), "{args:?} failed");
        assert_eq!(
            first.stdout, second.stdout,
            "repeated run differs for {args:?}"
        );
        assert_eq!(
            first.stdout, wide.stdout,
            "worker count changes output for {args:?}"
        );
    }
    println!("criterion 11: PASS - identical payloads across runs and --jobs values");
}

#[test]
fn exit_code_contract() {
    // 0: a passing verification.
    let ok = klim(&["verify", "d2", "--k", "2", "--l", "3"]);
    assert_eq!(ok.status.code(), Some(0));

    // 2: resource guard on oversize input.
    let guarded = klim(&["betti", "--k", "2", "--l", "12"]);
    assert_eq!(guarded.status.code(), Some(2));

    // 2: regime violation.
    let regime = klim(&["limit", "--q", "3", "--stage-k", "3"]);
    assert_eq!(regime.status.code(), Some(2));

    // 2: unknown check name.
    let unknown = klim(&["verify", "nosuchcheck"]);
    assert_eq!(unknown.status.code(), Some(2));

    // 2: unparsable product literal.
    let bad = klim(&["product", "--op", "graded", "--lhs", "[[1,2]", "--rhs", "[[3]]"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn betti_examples_from_the_table() {
    let out = klim(&["betti", "--k", "2", "--l", "4", "--format", "json"]);
    let envelope: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(envelope["verdict"], "pass");
    assert_eq!(
        envelope["payload"]["betti_by_degree"],
        serde_json::json!({"0": 1, "1": 6, "2": 11, "3": 6})
    );

    let out = klim(&["betti", "--k", "3", "--l", "3", "--format", "json"]);
    let envelope: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        envelope["payload"]["betti_by_degree"],
        serde_json::json!({"0": 1, "3": 1})
    );
}

#[test]
fn product_examples_from_the_paper() {
    let out = klim(&[
        "product", "--op", "graded", "--lhs", "[[1,2],[1,3]]", "--rhs", "[[2,4],[2,5]]",
        "--format", "json",
    ]);
    let envelope: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(envelope["payload"]["reason"], "union-overlap");
    assert_eq!(envelope["payload"]["result"]["display"], "0");

    let out = klim(&[
        "product", "--op", "graded", "--lhs", "[[1,2],[3,4]]", "--rhs", "[[6],[7]]",
        "--format", "json",
    ]);
    let envelope: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        envelope["payload"]["result"]["display"],
        "{{1,2,6},{3,4,7}}"
    );

    let out = klim(&[
        "product", "--op", "cup", "--k", "2", "--l", "4", "--lhs", "[[1,2]]", "--rhs",
        "[[3,4]]", "--format", "json",
    ]);
    let envelope: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        envelope["payload"]["result"]["display"],
        "{{1,2},{3,4}}"
    );

    let out = klim(&[
        "product", "--op", "monoid", "--lhs", "[1,2]", "--rhs", "[1,3]", "--l", "3", "--m",
        "4", "--format", "json",
    ]);
    let envelope: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(envelope["payload"]["result"], serde_json::json!([1, 2, 4, 6]));
}

#[test]
fn cache_round_trip_and_tamper_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let cache_arg = dir.path().to_str().unwrap();
    let args = [
        "betti", "--k", "2", "--l", "5", "--format", "json", "--cache", cache_arg,
    ];

    let first = klim(&args);
    assert!(first.status.success());
    let second = klim(&args);
    assert_eq!(first.stdout, second.stdout, "cache hit changed the payload");
    let stderr = String::from_utf8(second.stderr.clone()).unwrap();
    assert!(
        stderr.contains("served from cache"),
        "second run did not hit the cache: {stderr}"
    );

    // The matrices artifact exists alongside the envelope.
    let files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(files.iter().any(|f| f.ends_with(".matrices.txt")));
    assert!(files.iter().any(|f| f.ends_with(".json")));

    // Tampering is detected; the run warns, recomputes, and still matches.
    let envelope_file = dir
        .path()
        .read_dir()
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "json"))
        .unwrap();
    std::fs::write(&envelope_file, "{ not json").unwrap();
    let third = klim(&args);
    assert_eq!(first.stdout, third.stdout);
    let stderr = String::from_utf8(third.stderr.clone()).unwrap();
    assert!(
        stderr.contains("corrupt cache entry"),
        "tamper went unnoticed: {stderr}"
    );

    // A schema version bump misses the cache and recomputes.
    let fourth = klim(&args);
    assert!(String::from_utf8(fourth.stderr.clone())
        .unwrap()
        .contains("served from cache"));
    let mut entry: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&envelope_file).unwrap()).unwrap();
    entry["schema_version"] = serde_json::json!("0");
    std::fs::write(&envelope_file, serde_json::to_string(&entry).unwrap()).unwrap();
    let fifth = klim(&args);
    assert_eq!(first.stdout, fifth.stdout);
    let stderr = String::from_utf8(fifth.stderr.clone()).unwrap();
    assert!(
        stderr.contains("stale cache entry"),
        "schema bump went unnoticed: {stderr}"
    );
}

#[test]
fn verify_checks_all_pass_at_desk_scale() {
    for args in [
        vec!["verify", "delta2", "--n", "5", "--m", "2"],
        vec!["verify", "decomp", "--n", "5", "--m", "2"],
        vec!["verify", "exactness", "--n", "5", "--m", "2"],
        vec!["verify", "assoc", "--trials", "100", "--seed", "0", "--n", "8"],
        vec!["verify", "signlemmas", "--n", "5"],
        vec!["verify", "cup-leibniz", "--k", "2", "--l", "4", "--trials", "60", "--seed", "0"],
        vec!["verify", "stabilization", "--k", "3", "--l", "5", "--trials", "60", "--seed", "0"],
        vec!["verify", "vanishing", "--k", "2", "--l", "4"],
    ] {
        let out = klim(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn csv_format_emits_header_and_rows() {
    let out = klim(&["betti", "--k", "2", "--l", "3", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("payload.betti_by_degree.0,1"));
    assert!(text.contains("verdict,pass"));
}
