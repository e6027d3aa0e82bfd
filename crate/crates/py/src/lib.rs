//! Python bindings: the command-line entry point plus a few direct calls.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rigidkit::symplectic_index::{cz_matr, Tolerances};
use rigidkit::model_quasi_state::ModelState;
use rigidkit_cli::docs::{parse_document, serialize_document, DocKind, Document};

fn kind_from_name(name: &str) -> Option<DocKind> {
    Some(match name {
        "ring" => DocKind::Ring,
        "complex" => DocKind::Complex,
        "path" => DocKind::Path,
        "frame" => DocKind::Frame,
        "polytope" => DocKind::Polytope,
        "body" => DocKind::Body,
        "pl-function" => DocKind::PlFunction,
        "moment-data" => DocKind::MomentData,
        _ => return None,
    })
}

/// Runs `rigidkit <args…>` and returns the exit code with the JSON report.
pub fn run_args(args: &[String]) -> (i32, String) {
    let mut argv = vec!["rigidkit".to_string()];
    argv.extend(args.iter().cloned());
    argv.push("--json".into());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = rigidkit_cli::run(&argv, &mut out, &mut err);
    let text = if out.is_empty() { err } else { out };
    (code, String::from_utf8_lossy(&text).into_owned())
}

/// Validates a document and returns its canonical text.
pub fn canonical(kind: &str, text: &str) -> Result<String, String> {
    let k = kind_from_name(kind).ok_or_else(|| format!("unknown document kind '{kind}'"))?;
    let doc = parse_document(text, k).map_err(|e| e.to_string())?;
    Ok(serialize_document(&doc))
}

/// Conley-Zehnder index of a path document.
pub fn cz_of(path_text: &str) -> Result<f64, String> {
    let Document::Path(p) = parse_document(path_text, DocKind::Path).map_err(|e| e.to_string())? else {
        unreachable!("path loader returns paths")
    };
    cz_matr(&p.to_path(), &Tolerances::default())
        .map(|v| v.value())
        .map_err(|e| e.to_string())
}

/// `ζ(f)` of the toric model, as an exact rational string.
pub fn zeta_of(moment_text: &str, pl_text: &str) -> Result<String, String> {
    let Document::Moment(m) = parse_document(moment_text, DocKind::MomentData).map_err(|e| e.to_string())? else {
        unreachable!("moment loader returns moment data")
    };
    let Document::PlFunction(f) = parse_document(pl_text, DocKind::PlFunction).map_err(|e| e.to_string())? else {
        unreachable!("PL loader returns PL functions")
    };
    let state = ModelState::new(m).map_err(|e| e.to_string())?;
    state.zeta(&f).map(|z| z.to_string()).map_err(|e| e.to_string())
}

#[pyfunction]
fn run(args: Vec<String>) -> (i32, String) {
    run_args(&args)
}

#[pyfunction]
fn canonicalize(kind: &str, text: &str) -> PyResult<String> {
    canonical(kind, text).map_err(PyValueError::new_err)
}

#[pyfunction]
fn cz(path_text: &str) -> PyResult<f64> {
    cz_of(path_text).map_err(PyValueError::new_err)
}

#[pyfunction]
fn zeta(moment_text: &str, pl_text: &str) -> PyResult<String> {
    zeta_of(moment_text, pl_text).map_err(PyValueError::new_err)
}

#[pymodule]
fn rigidkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(cz, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
