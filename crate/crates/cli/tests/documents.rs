use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidkit::decorated_complex::random::{random_complex, RandomSpec};
use rigidkit::novikov::BaseField;
use rigidkit::symplectic_index::random::random_path;
use rigidkit_cli::docs::{parse_document, parse_structure, read_text, serialize_document, DocError, DocKind, Document};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

const BUNDLED: [(&str, DocKind); 15] = [
    ("cp2.ring", DocKind::Ring),
    ("cp3_f2.ring", DocKind::Ring),
    ("s2.ring", DocKind::Ring),
    ("quadric.ring", DocKind::Ring),
    ("a.cplx", DocKind::Complex),
    ("b.cplx", DocKind::Complex),
    ("rotation.path", DocKind::Path),
    ("p1.path", DocKind::Path),
    ("p2.path", DocKind::Path),
    ("q.frame", DocKind::Frame),
    ("cp2.poly", DocKind::MomentData),
    ("s2xs2.poly", DocKind::MomentData),
    ("blowup.poly", DocKind::MomentData),
    ("corner.body", DocKind::Body),
    ("f.pl", DocKind::PlFunction),
];

const KINDS: [DocKind; 8] = [
    DocKind::Ring,
    DocKind::Complex,
    DocKind::Path,
    DocKind::Frame,
    DocKind::Polytope,
    DocKind::Body,
    DocKind::PlFunction,
    DocKind::MomentData,
];

#[test]
fn bundled_documents_round_trip_byte_exact() {
    for (name, kind) in BUNDLED {
        let text = read_text(&data(name)).unwrap();
        let doc = parse_document(&text, kind).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = serialize_document(&doc);
        assert_eq!(again, text, "{name} is not canonical");
        let reparsed = parse_document(&again, kind).unwrap();
        assert_eq!(serialize_document(&reparsed), again);
    }
}

#[test]
fn complex_with_non_decreasing_filter_names_the_vector() {
    let text = r#"{
  "field": "Qmodel",
  "gamma_generator": "1",
  "basis": [
    { "label": "u", "parity": 1, "filter": "0" },
    { "label": "w", "parity": 0, "filter": "1" }
  ],
  "differential": [
    { "from": "u", "to": "w", "scalar": "1" }
  ]
}
"#;
    match parse_document(text, DocKind::Complex) {
        Err(DocError::Invariant { invariant, detail, .. }) => {
            assert_eq!(invariant, "strict filter decrease");
            assert!(detail.contains('u'), "{detail}");
        }
        other => panic!("expected an invariant error, got {other:?}"),
    }
    // The structural loader accepts it so that `--validate` can report.
    assert!(parse_structure(text, DocKind::Complex).is_ok());
}

#[test]
fn syntax_error_reports_line_and_field() {
    let text = "{\n  \"dimension\": 2,\n  \"generators\": [[\"1\", 2]]\n}\n";
    match parse_document(text, DocKind::Body) {
        Err(DocError::Syntax { line, field, .. }) => {
            assert_eq!(line, 3);
            assert!(field.starts_with("generators"), "{field}");
        }
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn bad_rational_names_the_field() {
    let text = "{\n  \"dimension\": 2,\n  \"generators\": [[\"1/0\", \"2\"]]\n}\n";
    match parse_document(text, DocKind::Body) {
        Err(DocError::Field { field, .. }) => assert!(field.contains("generators"), "{field}"),
        other => panic!("expected a field error, got {other:?}"),
    }
}

#[test]
fn ring_axiom_failure_is_named() {
    let text = read_text(&data("s2.ring")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // Break commutativity: change a single off-diagonal structure constant.
    let table = v["table"].as_array_mut().unwrap();
    let entry = table
        .iter_mut()
        .find(|e| e["i"] != e["j"])
        .expect("an off-diagonal entry");
    entry["terms"][0]["scalar"] = serde_json::json!("3");
    let broken = serde_json::to_string_pretty(&v).unwrap();
    match parse_document(&broken, DocKind::Ring) {
        Err(DocError::Invariant { invariant, .. }) => assert!(!invariant.is_empty()),
        other => panic!("expected an invariant error, got {other:?}"),
    }
    assert!(parse_structure(&broken, DocKind::Ring).is_ok());
}

#[test]
fn non_monotone_moment_data_is_rejected() {
    let text = "{\n  \"dimension\": 1,\n  \"vertices\": [[\"0\"], [\"1\"]],\n  \"kappa\": \"1/2\"\n}\n";
    assert!(matches!(
        parse_document(text, DocKind::MomentData),
        Err(DocError::Invariant { .. })
    ));
    assert!(parse_document(text, DocKind::Polytope).is_ok());
}

fn parse_all_kinds(text: &str) {
    for kind in KINDS {
        let r = catch_unwind(AssertUnwindSafe(|| {
            let _ = parse_document(text, kind);
        }));
        assert!(r.is_ok(), "panic parsing {:?} as {}", text, kind.name());
    }
}

#[test]
fn truncated_documents_never_panic() {
    for (name, _) in BUNDLED {
        let text = read_text(&data(name)).unwrap();
        let cuts: Vec<usize> = text.char_indices().map(|(i, _)| i).step_by(7).collect();
        for i in cuts {
            parse_all_kinds(&text[..i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_complexes_round_trip(seed in any::<u64>(), dim in 1usize..=6, d in 1i64..=6, f2 in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = if f2 { BaseField::F2 } else { BaseField::Qmodel };
        let rc = random_complex(&mut rng, &RandomSpec::new(dim, field, d));
        let text = serialize_document(&Document::Complex(rc.complex));
        let back = parse_document(&text, DocKind::Complex).unwrap();
        prop_assert_eq!(serialize_document(&back), text);
    }

    #[test]
    fn generated_paths_round_trip(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = serialize_document(&Document::Path(random_path(&mut rng, k, 4, 1.0)));
        let back = parse_document(&text, DocKind::Path).unwrap();
        prop_assert_eq!(serialize_document(&back), text);
    }

    #[test]
    fn arbitrary_text_never_panics(s in "\\PC{0,200}") {
        parse_all_kinds(&s);
    }

    #[test]
    fn mutated_documents_never_panic(idx in 0usize..15, pos in any::<prop::sample::Index>(), repl in "[-0-9a-z/\\[\\]{}\":,. ]{0,4}") {
        let text = read_text(&data(BUNDLED[idx].0)).unwrap();
        let bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
        let at = bounds[pos.index(bounds.len())];
        let end = bounds.iter().copied().find(|&b| b > at).unwrap_or(text.len());
        let mutated = format!("{}{}{}", &text[..at], repl, &text[end..]);
        parse_all_kinds(&mutated);
    }
}
