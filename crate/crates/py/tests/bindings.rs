use std::path::PathBuf;

use rigidkit_py::{canonical, cz_of, run_args, zeta_of};

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn run_returns_code_and_report() {
    let (code, text) = run_args(&["verify".into(), "--suite".into(), "quadric".into()]);
    assert_eq!(code, 0);
    assert!(text.contains("\"status\": \"ok\""));
    let (code, _) = run_args(&["nope".into()]);
    assert_eq!(code, 2);
}

#[test]
fn canonical_text_is_stable() {
    let t = data("cp2.ring");
    assert_eq!(canonical("ring", &t).unwrap(), t);
    assert!(canonical("ring", "{").is_err());
    assert!(canonical("sheaf", &t).is_err());
}

#[test]
fn direct_calls() {
    assert_eq!(cz_of(&data("rotation.path")).unwrap(), 2.0);
    let z = zeta_of(&data("cp2.poly"), &data("f.pl")).unwrap();
    assert!(!z.is_empty());
}
