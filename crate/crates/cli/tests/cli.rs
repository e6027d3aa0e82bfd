use std::path::PathBuf;

use rigidkit_cli::report::Status;
use rigidkit_cli::{run, run_report};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("rigidkit").chain(args.iter().copied()).map(String::from).collect()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv(args), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, _) = exec(&a);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(exec(&["--help"]).0, 0);
    assert_eq!(exec(&["ring", "--help"]).0, 0);
    assert_eq!(exec(&["--version"]).0, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(exec(&["frobnicate"]).0, 2);
    assert_eq!(exec(&[]).0, 2);
    let a = data("a.cplx");
    // No action flag.
    assert_eq!(exec(&["complex", &a]).0, 2);
    assert_eq!(exec(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(exec(&["toric", &data("cp2.poly"), "--ball", "x", "1/2"]).0, 2);
}

#[test]
fn missing_or_mistyped_file_exits_two() {
    let (code, _, err) = exec(&["ring", "/nonexistent/x.ring", "--check-axioms"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    let (code, v) = json(&["ring", &data("a.cplx"), "--check-axioms"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
}

#[test]
fn product_formula_on_bundled_pair() {
    let (code, v) = json(&["complex", &data("a.cplx"), "--tensor", &data("b.cplx"), "--verify-product", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let classes = v["results"]["product_formula"]["classes"].as_array().unwrap();
    assert!(!classes.is_empty());
    for row in classes {
        assert_eq!(row["lhs"], row["rhs"]);
        assert_eq!(row["holds"], true);
    }
}

#[test]
fn report_keys_are_sorted_and_complete() {
    let (_, out, _) = exec(&["index", &data("rotation.path"), "--maslov", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["digest", "results", "status", "subcommand", "timing"]);
    assert_eq!(v["subcommand"], "index");
    assert_eq!(v["results"]["maslov"]["value"], 2);
    assert!(out.ends_with('\n'));
}

#[test]
fn violation_exits_one() {
    let (code, v) = json(&["ring", &data("quadric.ring"), "--idempotent", "p"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "violation");
    assert_eq!(v["results"]["idempotent"]["holds"], false);
}

#[test]
fn validate_reports_broken_complex_as_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cplx");
    std::fs::write(
        &path,
        r#"{"gamma_generator": "1",
 "basis": [{"label": "u", "parity": 1, "filter": "0"}, {"label": "w", "parity": 0, "filter": "1"}],
 "differential": [{"from": "u", "to": "w", "scalar": "1"}]}"#,
    )
    .unwrap();
    let p = path.display().to_string();
    let (code, v) = json(&["complex", &p, "--validate"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["validate"]["holds"], false);
    // Any computation on it refuses to load.
    let (code, _) = json(&["complex", &p, "--spectral-basis"]);
    assert_eq!(code, 2);
}

#[test]
fn identical_runs_have_identical_deterministic_parts() {
    let cases: Vec<Vec<String>> = vec![
        argv(&["complex", &data("a.cplx"), "--tensor", &data("b.cplx"), "--verify-product", "--seed", "7"]),
        argv(&["index", &data("p1.path"), "--sample-defect", "--trials", "10", "--seed", "3"]),
        argv(&["qstate", &data("cp2.poly"), "--axioms", "--trials", "3", "--seed", "5"]),
        argv(&["toric", &data("s2xs2.poly"), "--pspec", "--fiber", "0,0"]),
    ];
    for a in cases {
        let r1 = run_report(&a).unwrap();
        let r2 = run_report(&a).unwrap();
        assert_eq!(
            serde_json::to_string(&r1.deterministic_part()).unwrap(),
            serde_json::to_string(&r2.deterministic_part()).unwrap()
        );
        assert_ne!(r1.status, Status::Error, "{:?}", r1.results);
    }
}

#[test]
fn seed_changes_randomized_results() {
    let base = ["index", &data("p1.path"), "--sample-defect", "--trials", "10"];
    let mut a = base.to_vec();
    a.extend(["--seed", "1"]);
    let mut b = base.to_vec();
    b.extend(["--seed", "2"]);
    let ra = run_report(&argv(&a)).unwrap();
    let rb = run_report(&argv(&b)).unwrap();
    assert_eq!(ra.results["seed"], 1);
    assert_eq!(rb.results["seed"], 2);
    assert_ne!(ra.digest, rb.digest);
}

#[test]
fn every_subcommand_runs_on_bundled_data() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["ring", "cp2.ring", "--check-axioms", "--semisimple"],
        vec!["ring", "cp3_f2.ring", "--check-axioms", "--semisimple"],
        vec!["ring", "s2.ring", "--kunneth", "s2.ring"],
        vec!["complex", "b.cplx", "--validate", "--spectral-basis"],
        vec!["complex", "a.cplx", "--c", "x1"],
        vec!["index", "rotation.path", "--cz", "--maslov", "--rs", "q.frame"],
        vec!["index", "p1.path", "--leray", "p2.path", "--qm-defect", "p2.path"],
        vec!["toric", "cp2.poly", "--normalize", "--delzant", "--pspec", "--ball", "2", "1/2"],
        vec!["toric", "blowup.poly", "--pspec", "--fiber", "0,0"],
        vec!["toric", "cp2.poly", "--displaceable", "corner.body"],
        vec!["qstate", "cp2.poly", "--zeta", "f.pl", "--heavy", "corner.body"],
    ];
    for case in cases {
        let owned: Vec<String> = case
            .iter()
            .map(|s| if s.contains('.') && !s.contains('/') { data(s) } else { s.to_string() })
            .collect();
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        let (code, out, err) = exec(&refs);
        assert_eq!(code, 0, "{case:?}\n{out}\n{err}");
    }
}

#[test]
fn verify_quick_suites_exit_by_outcome() {
    let (code, v) = json(&["verify", "--suite", "ring-cpn"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["suite"]["passed"], true);
    let (code, v) = json(&["verify", "--suite", "quadric"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["budget_s"], 5);
    // The boundary-radius check of the toric suite fails (see README).
    let (code, v) = json(&["verify", "--suite", "toric"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "violation");
}
