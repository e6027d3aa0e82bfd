//! One PASS/FAIL line per acceptance criterion, each backed by a `verify`
//! suite. Suites run one after another so their wall-clock budgets are
//! measured without contention.

use rigidkit_cli::suites::{run_suite, Suite, SuiteReport};
use rigidkit_cli::DEFAULT_SEED;

/// Check that cannot pass: the certificate disappears exactly at the
/// boundary radius, where the origin lies on a facet of `Δ_r`.
const KNOWN_BOUNDARY_FAILURE: &str = "Δ_r certificate exists at r = n/(n+1), n = 1..4";

fn criterion(suite: Suite) -> (&'static str, &'static str) {
    match suite {
        Suite::RingCpn => ("1", "CP^n rings over F2, n = 1..4: axioms and semisimplicity"),
        Suite::Quadric => ("2", "quadric S^2 x S^2: idempotents, p*p, divide, Kunneth"),
        Suite::ComplexProduct => ("3", "decorated complexes: product formula and perturbation laws"),
        Suite::Index => ("4", "index engine: Maslov, CZ identity, Leray, naturality, defect"),
        Suite::Toric => ("5", "toric: certificates for Δ_r iff r <= n/(n+1), special points"),
        Suite::Qstate => ("6", "model quasi-state: axioms, intersection, Fourier demo"),
    }
}

fn line(r: &SuiteReport) -> String {
    let (id, what) = criterion(r.suite);
    let ok = r.passed() && r.within_budget();
    let mut s = format!(
        "AC{id} {} [{}] {what} ({:.2} s of {} s)",
        if ok { "PASS" } else { "FAIL" },
        r.suite.name(),
        r.elapsed.as_secs_f64(),
        r.suite.budget().as_secs()
    );
    for c in r.failed() {
        s.push_str(&format!("\n    failed: {}: {}", c.name, c.detail));
    }
    if !r.within_budget() {
        s.push_str("\n    failed: runtime budget exceeded");
    }
    s
}

fn main() {
    let mut unexpected = Vec::new();
    for suite in Suite::ALL {
        let r = run_suite(suite, DEFAULT_SEED, 1);
        println!("{}", line(&r));
        let failed: Vec<&str> = r.failed().iter().map(|c| c.name.as_str()).collect();
        let tolerated: &[&str] = if suite == Suite::Toric { &[KNOWN_BOUNDARY_FAILURE] } else { &[] };
        for name in &failed {
            if !tolerated.contains(name) {
                unexpected.push(format!("{}: {name}", suite.name()));
            }
        }
        if !r.within_budget() {
            unexpected.push(format!("{}: over budget", suite.name()));
        }
        if suite == Suite::Toric && !r.checks.iter().any(|c| c.name == KNOWN_BOUNDARY_FAILURE) {
            unexpected.push(format!("{}: boundary check missing", suite.name()));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:#?}");
        std::process::exit(1);
    }
}
