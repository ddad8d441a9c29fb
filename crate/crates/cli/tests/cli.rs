//! End-to-end CLI tests: exit-code contract, report shapes, and the
//! determinism criterion — byte-identical machine reports across two runs on
//! the full fixture corpus.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> PathBuf {
    let mut path = PathBuf::from(env!("CARGO_BIN_EXE_dgda"));
    if !path.exists() {
        path = PathBuf::from("target/debug/dgda");
    }
    path
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// The corpus: every fixture with the command it is meant for and the
/// expected exit code.
fn corpus() -> Vec<(Vec<String>, i32)> {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    vec![
        (
            vec![
                "factorize".into(),
                "--mode".into(),
                "trivcof-fib".into(),
                f("exterior_line.json"),
            ],
            0,
        ),
        (
            vec![
                "factorize".into(),
                "--mode".into(),
                "cof-trivfib".into(),
                f("exterior_line.json"),
            ],
            0,
        ),
        (
            vec![
                "factorize".into(),
                "--mode".into(),
                "minimal".into(),
                f("exterior_line.json"),
            ],
            0,
        ),
        (
            vec![
                "factorize".into(),
                "--mode".into(),
                "cof-trivfib".into(),
                "--allow-flags".into(),
                f("point_algebra.json"),
            ],
            0,
        ),
        (
            vec![
                "homology".into(),
                "--object".into(),
                "D".into(),
                f("disc_algebra.json"),
            ],
            0,
        ),
        (
            vec![
                "homology".into(),
                "--object".into(),
                "S".into(),
                f("sphere_algebra.json"),
            ],
            0,
        ),
        (
            vec!["resolve".into(), "--kind".into(), "koszul".into(), f("koszul_xy.json")],
            0,
        ),
        (
            vec![
                "resolve".into(),
                "--kind".into(),
                "koszul-tate".into(),
                f("koszul_tate_phi2.json"),
            ],
            0,
        ),
        (
            vec![
                "resolve".into(),
                "--kind".into(),
                "koszul-tate".into(),
                f("noether_pair.json"),
            ],
            0,
        ),
        (
            vec![
                "resolve".into(),
                "--kind".into(),
                "cofibrant".into(),
                "--object".into(),
                "B".into(),
                "--allow-flags".into(),
                f("point_algebra.json"),
            ],
            0,
        ),
        (
            vec![
                "verify".into(),
                "--check".into(),
                "pushout".into(),
                f("pushout_sphere.json"),
            ],
            0,
        ),
        (
            vec![
                "verify".into(),
                "--check".into(),
                "square".into(),
                f("square_identity.json"),
            ],
            0,
        ),
        (
            vec![
                "verify".into(),
                "--check".into(),
                "rsda".into(),
                "--morphism".into(),
                "iota".into(),
                f("rsda_inclusion.json"),
            ],
            0,
        ),
        (
            vec![
                "verify".into(),
                "--check".into(),
                "d-squared".into(),
                "--object".into(),
                "X".into(),
                f("corrupted_differential.json"),
            ],
            1,
        ),
    ]
}

#[test]
fn exit_code_contract() {
    for (args, expected) in corpus() {
        let argrefs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let out = run(&argrefs);
        assert_eq!(
            code(&out),
            expected,
            "args {:?}\nstdout: {}\nstderr: {}",
            args,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn malformed_json_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = run(&[
        "homology",
        "--object",
        "D",
        bad.to_string_lossy().as_ref(),
    ]);
    assert_eq!(code(&out), 2);
    // unknown fields are rejected too
    let unknown = dir.path().join("unknown.json");
    std::fs::write(
        &unknown,
        r#"{"config":{"base_dim":0},"truncation":{"degree":1,"poly_degree":0,"order":0,"word_length":1},"mystery":1}"#,
    )
    .unwrap();
    let out = run(&[
        "homology",
        "--object",
        "D",
        unknown.to_string_lossy().as_ref(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn failing_noether_check_exits_three_with_residue() {
    let out = run(&[
        "resolve",
        "--kind",
        "koszul-tate",
        fixture("noether_bad.json").to_string_lossy().as_ref(),
    ]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("residue"), "stderr: {}", stderr);
    assert!(stderr.contains("phi1"), "stderr: {}", stderr);
}

#[test]
fn precondition_failures_exit_three() {
    // a cycle budget element that is not a cycle
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad_budget.json");
    std::fs::write(
        &spec,
        r#"{
  "config": { "base_dim": 0 },
  "truncation": { "degree": 2, "poly_degree": 0, "order": 0, "word_length": 2 },
  "objects": {
    "A": { "type": "initial" },
    "B": { "type": "free-disc", "degree": 1 }
  },
  "morphisms": { "phi": { "source": "A", "target": "B" } },
  "budget": { "cycles": { "1": ["top"] }, "stages": 0 }
}"#,
    )
    .unwrap();
    let out = run(&[
        "factorize",
        "--mode",
        "cof-trivfib",
        spec.to_string_lossy().as_ref(),
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn empty_budget_fibration_fails_check() {
    // trivcof-fib with an empty budget on a positive-degree target: the
    // fibration check fails, exit 1
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("empty_budget.json");
    std::fs::write(
        &spec,
        r#"{
  "config": { "base_dim": 0 },
  "truncation": { "degree": 2, "poly_degree": 0, "order": 0, "word_length": 2 },
  "objects": {
    "A": { "type": "initial" },
    "B": { "type": "dga", "generators": [ { "name": "w", "degree": 1 } ] }
  },
  "morphisms": { "phi": { "source": "A", "target": "B" } }
}"#,
    )
    .unwrap();
    let out = run(&[
        "factorize",
        "--mode",
        "trivcof-fib",
        spec.to_string_lossy().as_ref(),
    ]);
    assert_eq!(code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("right-is-fibration: FAIL"));
}

#[test]
fn flagged_homology_renders_question_marks() {
    // an ungraded Koszul-style window leaks; flagged degrees print as "?"
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("flagged.json");
    std::fs::write(
        &spec,
        r#"{
  "config": { "base_dim": 1 },
  "truncation": { "degree": 1, "poly_degree": 2, "order": 0, "word_length": 1 },
  "objects": {
    "K": {
      "type": "dga",
      "generators": [
        { "name": "phistar", "degree": 1, "differential": "x1", "deco_cap": 0 }
      ]
    }
  }
}"#,
    )
    .unwrap();
    let out = run(&[
        "homology",
        "--object",
        "K",
        "--allow-flags",
        spec.to_string_lossy().as_ref(),
    ]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains('?'), "stdout: {}", stdout);
}

/// Acceptance criterion: byte-identical machine reports across two runs on
/// the full fixture corpus.
#[test]
fn acceptance_11_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (args, _)) in corpus().into_iter().enumerate() {
        let mut reports = Vec::new();
        for round in 0..2 {
            let path = dir.path().join(format!("report_{}_{}.json", i, round));
            let mut full: Vec<String> = args.clone();
            full.push("--json".into());
            full.push(path.to_string_lossy().into_owned());
            let argrefs: Vec<&str> = full.iter().map(|s| s.as_str()).collect();
            run(&argrefs);
            reports.push(std::fs::read(&path).expect("report written"));
        }
        assert_eq!(
            reports[0], reports[1],
            "fixture {} produced differing machine reports",
            i
        );
        assert!(!reports[0].is_empty());
    }
    println!("acceptance 11 (CLI determinism: byte-identical reports on the corpus): PASS");
}
