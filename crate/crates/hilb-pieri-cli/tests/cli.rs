//! End-to-end tests of the binary: golden output, exit codes, cache
//! behavior, and determinism across worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hilb-pieri"));
    // keep the host environment from steering cache lookups
    cmd.env_remove("HILB_PIERI_CACHE");
    cmd
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn worked_row_in_every_format() {
    let out = bin()
        .args(["product", "--n", "6", "--a", "", "--b", "", "--c", "3,2,1"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(
        stdout_of(&out),
        concat!(
            r#"{"n":6,"input":{"a":[],"b":[],"c":[3,2,1]},"terms":["#,
            r#"{"a":[],"b":[1],"c":[3,2],"coef":1},"#,
            r#"{"a":[],"b":[2],"c":[3,1],"coef":2},"#,
            r#"{"a":[],"b":[3],"c":[2,1],"coef":3},"#,
            r#"{"a":[1],"b":[],"c":[2,2,1],"coef":2},"#,
            r#"{"a":[1],"b":[],"c":[3,1,1],"coef":2},"#,
            r#"{"a":[1],"b":[1],"c":[2,1,1],"coef":-2},"#,
            r#"{"a":[2],"b":[],"c":[2,1,1],"coef":2}]}"#,
            "\n"
        )
    );

    let out = bin()
        .args(["product", "--c", "3,2,1", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out),
        "H * (0,0,(3,2,1)) = (0,(1),(3,2)) + 2*(0,(2),(3,1)) + 3*(0,(3),(2,1)) \
         + 2*((1),0,(2,2,1)) + 2*((1),0,(3,1,1)) - 2*((1),(1),(2,1,1)) + 2*((2),0,(2,1,1))\n"
    );

    let out = bin()
        .args(["product", "--c", "3,2,1", "--format", "latex"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let latex = stdout_of(&out);
    assert!(latex.starts_with("H \\cdot \\sigma_{(0,0,(3,2,1))} = \\sigma_{(0,(1),(3,2))}"));
    assert!(latex.contains("- 2\\sigma_{((1),(1),(2,1,1))}"));
}

#[test]
fn divisor_square_at_two_points() {
    let out = bin()
        .args([
            "product", "--n", "2", "--b", "1", "--c", "1", "--format", "text",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out),
        "H * (0,(1),(1)) = (0,(1,1),0) + ((1),0,(1))\n"
    );
}

#[test]
fn zero_rows_print_as_zero() {
    let out = bin()
        .args(["product", "--a", "1", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "H * ((1),0,0) = 0\n");
}

#[test]
fn bad_input_is_a_usage_error() {
    let cases: &[&[&str]] = &[
        &["product", "--c", "2,3"],               // not weakly decreasing
        &["product", "--c", "0"],                 // zero entry
        &["product", "--c", "x"],                 // not a number
        &["product", "--n", "5", "--c", "3,2,1"], // inconsistent count
    ];
    for args in cases {
        let out = bin().args(*args).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?} gave stderr: {}",
            stderr_of(&out)
        );
    }
}

#[test]
fn matrix_writes_then_reuses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let arg = dir.path().to_str().unwrap();

    let out = bin()
        .args(["matrix", "--n", "2", "--out-dir", arg])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("wrote 9 rows"));

    let path = dir.path().join("pieri_N2.json");
    let first = std::fs::read(&path).unwrap();
    let table: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(table["n"], 2);
    assert_eq!(table["rows"].as_array().unwrap().len(), 9);

    let out = bin()
        .args(["matrix", "--n", "2", "--out-dir", arg])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("cache hit"));
    assert_eq!(
        std::fs::read(&path).unwrap(),
        first,
        "cache hit must not rewrite"
    );

    let out = bin()
        .args(["matrix", "--n", "2", "--force", "--out-dir", arg])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("wrote 9 rows"));
    assert_eq!(
        std::fs::read(&path).unwrap(),
        first,
        "recomputation must agree"
    );
}

/// Corrupting a cached coefficient and asking for that row proves the cache
/// is returned verbatim rather than recomputed.
#[test]
fn product_returns_cached_rows_verbatim() {
    let dir = tempfile::tempdir().unwrap();
    let arg = dir.path().to_str().unwrap();
    let out = bin()
        .args(["matrix", "--n", "2", "--out-dir", arg])
        .output()
        .unwrap();
    assert!(out.status.success());

    let path = dir.path().join("pieri_N2.json");
    let mut table: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let rows = table["rows"].as_array_mut().unwrap();
    let unit = rows
        .iter_mut()
        .find(|row| row["input"]["c"] == serde_json::json!([1, 1]))
        .expect("the unit row is in the table");
    unit["terms"][0]["coef"] = serde_json::json!(777);
    std::fs::write(&path, serde_json::to_vec(&table).unwrap()).unwrap();

    let out = bin()
        .args(["product", "--c", "1,1", "--out-dir", arg])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(
        stdout_of(&out).contains("\"coef\":777"),
        "cached row was not used: {}",
        stdout_of(&out)
    );

    // without the cache directory the same product is computed honestly
    let out = bin().args(["product", "--c", "1,1"]).output().unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("\"coef\":1"));
}

#[test]
fn cache_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["matrix", "--n", "2"])
        .env("HILB_PIERI_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(dir.path().join("pieri_N2.json").exists());
}

#[test]
fn conjecture_sweep_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let arg = dir.path().to_str().unwrap();
    let out = bin()
        .args(["conjecture", "--max-weight", "3", "--out-dir", arg])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("conjecture_w3.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["max_weight"], 3);
    assert!(report["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn verify_passes_and_prints_one_line_per_check() {
    let out = bin().args(["verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("all 16 checks passed"), "got: {text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("ok   ")).count(), 16);
    assert!(!text.contains("FAIL"));

    let strict = bin()
        .args(["verify", "--check-invariants"])
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(0));
    assert!(stdout_of(&strict).contains("all 16 checks passed"));
}

#[test]
fn tables_are_identical_across_worker_counts() {
    let one = tempfile::tempdir().unwrap();
    let four = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&one, "1"), (&four, "4")] {
        let out = bin()
            .args([
                "matrix",
                "--n",
                "3",
                "--out-dir",
                dir.path().to_str().unwrap(),
            ])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    }
    let bytes = |dir: &Path| std::fs::read(dir.join("pieri_N3.json")).unwrap();
    assert_eq!(bytes(one.path()), bytes(four.path()));
}
