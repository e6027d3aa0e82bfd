use std::path::PathBuf;

use rigidkit_cli::report::Status;
use rigidkit_cli::run_report;

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("rigidkit").chain(args.iter().copied()).map(String::from).collect()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

// Kept in its own binary: the variable is process-wide.
#[test]
fn environment_seed_is_the_fallback() {
    let a = argv(&["toric", &data("cp2.poly"), "--pspec"]);
    std::env::set_var("RIGIDKIT_SEED", "99");
    let from_env = run_report(&a).unwrap();
    let mut with_flag = a.clone();
    with_flag.extend(["--seed".to_string(), "5".to_string()]);
    let flagged = run_report(&with_flag).unwrap();
    std::env::set_var("RIGIDKIT_SEED", "not-a-number");
    let bad = run_report(&a).unwrap();
    std::env::remove_var("RIGIDKIT_SEED");
    let default = run_report(&a).unwrap();
    assert_eq!(from_env.results["seed"], 99);
    assert_eq!(flagged.results["seed"], 5);
    assert_eq!(bad.status, Status::Error);
    assert_eq!(default.results["seed"], rigidkit_cli::DEFAULT_SEED);
}
