//! Named verification suites, one per acceptance criterion.

use std::time::{Duration, Instant};

use clap::ValueEnum;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rigidkit::decorated_complex::random::{random_complex, random_lambdas, random_pair, RandomComplex, RandomSpec};
use rigidkit::decorated_complex::{make_generic, verify_product_formula, HomologyClass, Perturbation};
use rigidkit::model_quasi_state::random::{random_disjoint_family, random_pl};
use rigidkit::model_quasi_state::{fourier_reduction_demo, FourierConfig, ModelState, SmoothSampler};
use rigidkit::novikov::{int, rat, BaseField, ExtRational, NovikovScalar};
use rigidkit::quantum_algebra::{cpn, quadric, s2, QHElement, QuantumAlgebra, SemisimpleWitness, Semisimplicity};
use rigidkit::symplectic_index::random::{random_path, random_symplectic};
use rigidkit::symplectic_index::{
    cz_matr, ind, ind_doubled, leray_verify, maslov_loop, sample_defect, IndexError, LagrangianFrame, MatrixPath,
    SymPath, Tolerances, C_EMP,
};
use rigidkit::toric::{self, ball_subpolytope, MomentData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RingCpn,
    Quadric,
    ComplexProduct,
    Index,
    Toric,
    Qstate,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::RingCpn,
        Suite::Quadric,
        Suite::ComplexProduct,
        Suite::Index,
        Suite::Toric,
        Suite::Qstate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RingCpn => "ring-cpn",
            Suite::Quadric => "quadric",
            Suite::ComplexProduct => "complex-product",
            Suite::Index => "index",
            Suite::Toric => "toric",
            Suite::Qstate => "qstate",
        }
    }

    pub fn budget(self) -> Duration {
        Duration::from_secs(match self {
            Suite::RingCpn | Suite::Quadric | Suite::Toric => 5,
            Suite::ComplexProduct => 60,
            Suite::Index => 120,
            Suite::Qstate => 30,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.suite.budget()
    }

    pub fn passed(&self) -> bool {
        self.within_budget() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Check results only; timing is reported separately.
    pub fn results(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "passed": self.checks.iter().all(|c| c.passed),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Tallies a batch: passes iff `failures` is empty and at least one
    /// instance ran.
    fn batch(&mut self, name: impl Into<String>, instances: usize, failures: Vec<String>) {
        let detail = match failures.first() {
            None => format!("{instances} instances"),
            Some(f) => format!("{} of {instances} failed; first: {f}", failures.len()),
        };
        self.add(name, failures.is_empty() && instances > 0, detail);
    }
}

pub fn run_suite(suite: Suite, seed: u64, jobs: usize) -> SuiteReport {
    let start = Instant::now();
    let mut c = Checks::default();
    match suite {
        Suite::RingCpn => ring_cpn(&mut c),
        Suite::Quadric => quadric_suite(&mut c),
        Suite::ComplexProduct => complex_product(&mut c, seed),
        Suite::Index => index_suite(&mut c, seed),
        Suite::Toric => toric_suite(&mut c),
        Suite::Qstate => qstate_suite(&mut c, seed, jobs),
    }
    SuiteReport {
        suite,
        checks: c.0,
        elapsed: start.elapsed(),
    }
}

// ---------------------------------------------------------------- rings

fn power(a: &QuantumAlgebra, x: &QHElement, m: usize) -> Result<QHElement, String> {
    let mut p = a.unity_element();
    for _ in 0..m {
        p = a.qprod(&p, x).map_err(|e| e.to_string())?;
    }
    Ok(p)
}

fn ring_cpn(c: &mut Checks) {
    for n in 1..=4u32 {
        let a = cpn(n, BaseField::F2);
        match a.check_axioms() {
            Ok(r) => {
                let bad: Vec<String> = [&r.unity, &r.commutativity, &r.associativity, &r.grading]
                    .into_iter()
                    .flatten()
                    .cloned()
                    .collect();
                c.add(
                    format!("CP^{n} over F2: unity, commutativity, associativity, grading"),
                    bad.is_empty(),
                    bad.first().cloned().unwrap_or_else(|| "exact".into()),
                );
            }
            Err(e) => c.add(format!("CP^{n} over F2: axioms"), false, e.to_string()),
        }
        let name = format!("CP^{n} over F2: semisimple via X^{} - u^-1", n + 1);
        match a.is_semisimple() {
            Ok(Semisimplicity::Semisimple(SemisimpleWitness::FieldPresentation { generator, m, constant })) => {
                let lhs = power(&a, &generator, m);
                let rhs = a.unity_element().scale(&constant).map_err(|e| e.to_string());
                let ok = m == n as usize + 1 && matches!((&lhs, &rhs), (Ok(x), Ok(y)) if x == y);
                c.add(name, ok, format!("m = {m}, X^m = ({constant})·[M]"));
            }
            Ok(other) => c.add(name, false, format!("{other:?}")),
            Err(e) => c.add(name, false, e.to_string()),
        }
    }
}

fn quadric_suite(c: &mut Checks) {
    let q = quadric();
    let f = BaseField::Qmodel;
    let (m, a, b, p) = (0, 1, 2, 3);
    let half = |sign: i64| NovikovScalar::from_rational(f, rat(sign, 2));
    // a± = ([M] ± p·w)/2 with w = s^{2κ} q², κ = 1/2.
    let a_pm = |sign: i64| {
        let pw = QHElement::term(&NovikovScalar::s_pow(f, &int(1)) * &half(sign), p, 2);
        QHElement::term(half(1), m, 0).checked_add(&pw).expect("same field")
    };
    let (ap, am) = (a_pm(1), a_pm(-1));
    let prod = |x: &QHElement, y: &QHElement| q.qprod(x, y).ok();
    c.add("a+ idempotent", prod(&ap, &ap) == Some(ap.clone()), ap.to_text(&q));
    c.add("a- idempotent", prod(&am, &am) == Some(am.clone()), am.to_text(&q));
    c.add("a+ * a- = 0", prod(&ap, &am).is_some_and(|x| x.is_zero()), "orthogonal");
    c.add(
        "a+ + a- = [M]",
        ap.checked_add(&am).ok() == Some(q.unity_element()),
        "sum is the unity",
    );
    let w_inv2 = QHElement::term(NovikovScalar::s_pow(f, &int(-2)), m, -4);
    let pp = prod(&q.class(p), &q.class(p));
    c.add(
        "p * p = w^-2 [M]",
        pp.as_ref() == Some(&w_inv2),
        pp.map(|x| x.to_text(&q)).unwrap_or_default(),
    );
    let divisor = q.class(b).checked_sub(&q.class(a)).expect("same field");
    match q.divide(&divisor, &am) {
        Ok(Some(x)) => {
            let back = prod(&divisor, &x);
            c.add("divide(B - A, a-)", back.as_ref() == Some(&am), format!("x = {}", x.to_text(&q)));
        }
        other => c.add("divide(B - A, a-)", false, format!("{other:?}")),
    }
    match s2().kunneth(&s2()) {
        Ok(k) => {
            let mut bad = Vec::new();
            for i in 0..q.dim() {
                for j in 0..q.dim() {
                    if k.dim() != q.dim() || k.entry(i, j) != q.entry(i, j) {
                        bad.push(format!("({i}, {j})"));
                    }
                }
            }
            if k.gamma() != q.gamma() {
                bad.push("Γ".into());
            }
            c.batch("kunneth(QH(S2), QH(S2)) = quadric table", q.dim() * q.dim(), bad);
        }
        Err(e) => c.add("kunneth(QH(S2), QH(S2)) = quadric table", false, e.to_string()),
    }
}

// ---------------------------------------------------------------- complexes

fn gen_complex(r: &mut ChaCha8Rng, dims: std::ops::RangeInclusive<usize>, field: BaseField) -> RandomComplex {
    let n = r.gen_range(dims);
    let d = r.gen_range(1..=12);
    random_complex(r, &RandomSpec::new(n, field, d))
}

fn field_for(trial: usize) -> BaseField {
    if trial % 4 == 3 {
        BaseField::F2
    } else {
        BaseField::Qmodel
    }
}

fn complex_product(c: &mut Checks, seed: u64) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);

    let mut failures = Vec::new();
    let mut trials = 0;
    while trials < 200 {
        let dims = (r.gen_range(1..=8), r.gen_range(1..=8));
        let ds = (r.gen_range(1..=12), r.gen_range(1..=12));
        let (x, y) = random_pair(&mut r, dims, field_for(trials), ds);
        if x.free.is_empty() || y.free.is_empty() {
            continue;
        }
        trials += 1;
        let (a1, c1) = x.oracle_class(&random_lambdas(&mut r, &x));
        let (a2, c2) = y.oracle_class(&random_lambdas(&mut r, &y));
        match verify_product_formula(&x.complex, &y.complex, &a1, &a2) {
            Ok(rep) if rep.holds() && rep.c1 == c1 && rep.c2 == c2 => {}
            Ok(rep) => failures.push(format!("pair {trials}: c1 + c2 = {}, c(a1⊗a2) = {}", rep.sum(), rep.c_product)),
            Err(e) => failures.push(format!("pair {trials}: {e}")),
        }
    }
    c.batch("product formula c(a1⊗a2) = c(a1) + c(a2)", trials, failures);

    let (mut shift, mut mono, mut lip) = ((0, Vec::new()), (0, Vec::new()), (0, Vec::new()));
    let mut done = 0;
    while done < 50 {
        let rc = gen_complex(&mut r, 2..=8, field_for(done));
        if rc.free.is_empty() {
            continue;
        }
        done += 1;
        let v = &rc.complex;
        let (a, ca) = rc.oracle_class(&random_lambdas(&mut r, &rc));
        let t = rat(r.gen_range(-20..=20), r.gen_range(1..=7));
        shift.0 += 1;
        match v.perturb_filter(&Perturbation::Constant(t.clone())).and_then(|w| w.spectral_invariant(&a)) {
            Ok(cw) if cw == ca.add_rational(&t) => {}
            other => shift.1.push(format!("shift {t}: {other:?}")),
        }
        let up: Vec<BigRational> = (0..v.dim()).map(|_| rat(r.gen_range(0..=10), 97)).collect();
        if let Ok(w) = v.perturb_filter(&Perturbation::PerBasis(up)) {
            if w.is_generic() {
                mono.0 += 1;
                match w.spectral_invariant(&a) {
                    Ok(cw) if cw >= ca => {}
                    other => mono.1.push(format!("raised filters gave {other:?} < {ca}")),
                }
            }
        }
        let delta: Vec<BigRational> = (0..v.dim()).map(|_| rat(r.gen_range(-10..=10), 100)).collect();
        let Ok(w) = v.perturb_filter(&Perturbation::PerBasis(delta)) else { continue };
        let Ok(w) = make_generic(&w, &rat(1, 1000)) else { continue };
        lip.0 += 1;
        let norm = w
            .filters()
            .iter()
            .zip(v.filters())
            .map(|(x, y)| if *x > y { x - &y } else { &y - x })
            .max()
            .unwrap_or_else(BigRational::zero);
        match (w.spectral_invariant(&a), &ca) {
            (Ok(ExtRational::Finite(x)), ExtRational::Finite(y)) => {
                let d = &x - y;
                if d > norm || -d > norm {
                    lip.1.push(format!("|{x} - {y}| > {norm}"));
                }
            }
            other => lip.1.push(format!("{other:?}")),
        }
    }
    c.batch("constant shift c(F + t) = c(F) + t", shift.0, shift.1);
    c.batch("monotonicity under raised filters", mono.0, mono.1);
    c.batch("Lipschitz |c(F') - c(F)| <= |F' - F|", lip.0, lip.1);

    let mut failures = Vec::new();
    let mut pairs = 0;
    while pairs < 200 {
        let rc = gen_complex(&mut r, 1..=8, field_for(pairs));
        if rc.free.is_empty() {
            continue;
        }
        pairs += 1;
        let (a, ca) = rc.oracle_class(&random_lambdas(&mut r, &rc));
        let (b, cb) = rc.oracle_class(&random_lambdas(&mut r, &rc));
        match rc.complex.spectral_invariant(&a.add(&b)) {
            Ok(s) if s <= ca.clone().max(cb.clone()) => {}
            other => failures.push(format!("c(a+b) = {other:?}, c(a) = {ca}, c(b) = {cb}")),
        }
    }
    c.batch("c(a+b) <= max(c(a), c(b))", pairs, failures);

    let mut failures = Vec::new();
    let mut classes = 0;
    let mut complexes = 0;
    while complexes < 20 {
        let rc = gen_complex(&mut r, 1..=8, field_for(complexes));
        if rc.free.is_empty() {
            continue;
        }
        complexes += 1;
        let v = &rc.complex;
        let cycles = rc.oracle_cycles();
        let base: Vec<_> = cycles
            .iter()
            .map(|z| HomologyClass::from_cycle(v, z.clone()).and_then(|a| v.spectral_invariant(&a)))
            .collect();
        for rerun in 0..5 {
            let mut perm: Vec<usize> = (0..v.dim()).collect();
            perm.shuffle(&mut r);
            let mut inv = vec![0; perm.len()];
            for (k, &o) in perm.iter().enumerate() {
                inv[o] = k;
            }
            let w = v.permuted(&perm);
            for (z, expected) in cycles.iter().zip(&base) {
                classes += 1;
                let got = HomologyClass::from_cycle(&w, z.reindex(&inv)).and_then(|a| w.spectral_invariant(&a));
                if got.is_err() || expected.is_err() || got.as_ref().ok() != expected.as_ref().ok() {
                    failures.push(format!("complex {complexes}, rerun {rerun}: {got:?} vs {expected:?}"));
                }
            }
        }
    }
    c.batch("spectral invariants agree across 5 shuffled-basis reruns", classes, failures);
}

// ---------------------------------------------------------------- indices

fn index_suite(c: &mut Checks, seed: u64) {
    let tol = Tolerances::default();
    let mut r = ChaCha8Rng::seed_from_u64(seed);

    match maslov_loop(&MatrixPath::rotation(1, 1.0).to_path(), &tol) {
        Ok(m) => c.add(
            "Maslov of the 2π rotation loop in Sp(2) = 2",
            m.value == 2 && m.residual < 1e-6,
            format!("value {}, snap residual {:.1e}", m.value, m.residual),
        ),
        Err(e) => c.add("Maslov of the 2π rotation loop in Sp(2) = 2", false, e.to_string()),
    }
    let mut failures = Vec::new();
    for l in 1..=5u32 {
        match maslov_loop(&MatrixPath::rotation(1, l as f64).to_path(), &tol) {
            Ok(m) if m.value == 2 * l as i64 && m.residual < 1e-6 => {}
            other => failures.push(format!("l = {l}: {other:?}")),
        }
    }
    c.batch("l-fold rotation loops give 2l, l = 1..5", 5, failures);

    let mut failures = Vec::new();
    for trial in 0..50 {
        let k = 1 + trial % 2;
        let p = random_path(&mut r, k, 3, 1.0).to_path();
        match (cz_matr(&p, &tol), ind_doubled(&p, &tol)) {
            (Ok(a), Ok(b)) if a.halves == b.halves && (a.estimate - b.estimate).abs() < 1e-6 => {}
            (a, b) => failures.push(format!("trial {trial}: {:?} vs {:?}", a.map(|x| x.halves), b.map(|x| x.halves))),
        }
    }
    c.batch("CZ(A) = Ind_4k(Gr A, Gr I) on random paths", 50, failures);

    for k in 1..=2 {
        let (done, failures, max_res) = leray_pairs(&mut r, k, 100, &tol);
        c.batch(
            format!("Leray identity on 100 transversal pairs in Sp({})", 2 * k),
            done,
            failures,
        );
        c.add(
            format!("Leray residual < 1e-6 in Sp({})", 2 * k),
            max_res < 1e-6,
            format!("max residual {max_res:.1e}"),
        );
    }

    let mut failures = Vec::new();
    for trial in 0..50 {
        let k = 1 + trial % 2;
        let p = random_path(&mut r, k, 3, 1.0).to_path();
        let v = LagrangianFrame::q_plane(k).transformed(&random_symplectic(&mut r, k, 0.8));
        let b = random_symplectic(&mut r, k, 0.7);
        let lhs = SymPath::conjugate(&b, p.clone()).and_then(|q| ind(&q, &v.transformed(&b), &tol));
        match (lhs, ind(&p, &v, &tol)) {
            (Ok(x), Ok(y)) if x.halves == y.halves && (x.estimate - y.estimate).abs() < 1e-6 => {}
            (x, y) => failures.push(format!("trial {trial}: {:?} vs {:?}", x.map(|v| v.estimate), y.map(|v| v.estimate))),
        }
    }
    c.batch("naturality Ind(B A B^-1, BV) = Ind(A, V), residual < 1e-6", 50, failures);

    let s = sample_defect(&mut r, &[1, 2], 100, &tol);
    c.add(
        format!("qm_defect over 200 seeded pairs <= C_emp + 1 = {}", C_EMP + 1.0),
        s.failures == 0 && s.trials == 200 && s.max.is_finite() && s.max <= C_EMP + 1.0,
        format!("max {}, mean {:.4}, unresolved {}", s.max, s.mean, s.failures),
    );
}

fn leray_pairs(r: &mut ChaCha8Rng, k: usize, n: usize, tol: &Tolerances) -> (usize, Vec<String>, f64) {
    let mut done = 0;
    let mut failures = Vec::new();
    let mut max_res: f64 = 0.0;
    for _ in 0..20 * n {
        if done == n {
            break;
        }
        let a = random_path(r, k, 3, 1.0).to_path();
        let b = random_path(r, k, 3, 1.0).to_path();
        match leray_verify(&a, &b, tol) {
            Ok(rep) => {
                done += 1;
                max_res = max_res.max(rep.residual);
                if !rep.holds() {
                    failures.push(format!("{} != {} (halves)", rep.lhs_halves, rep.rhs_halves));
                }
            }
            Err(IndexError::Transversality(_)) => {}
            Err(e) => {
                done += 1;
                failures.push(e.to_string());
            }
        }
    }
    if done < n {
        failures.push(format!("only {done} transversal pairs found"));
    }
    (done, failures, max_res)
}

// ---------------------------------------------------------------- toric

/// `r` values probed for `Δ_r ⊂ ℂPⁿ`: a grid plus the boundary `n/(n+1)`.
fn ball_radii(n: usize) -> Vec<BigRational> {
    let mut rs: Vec<BigRational> = (1..=24).map(|i| rat(i, 24)).collect();
    rs.push(rat(n as i64, n as i64 + 1));
    rs.sort();
    rs.dedup();
    rs
}

fn toric_suite(c: &mut Checks) {
    let mut below = (0, Vec::new());
    let mut above = (0, Vec::new());
    let mut at = (0, Vec::new());
    for n in 1..=4usize {
        let data = match toric::cpn(n) {
            Ok(d) => d,
            Err(e) => {
                c.add(format!("CP^{n} moment data"), false, e.to_string());
                continue;
            }
        };
        let threshold = rat(n as i64, n as i64 + 1);
        for r in ball_radii(n) {
            let cert = ball_subpolytope(n, &r).and_then(|y| data.stable_displaceability_certificate(&y));
            let has = matches!(cert, Ok(Some(_)));
            let slot = match r.cmp(&threshold) {
                std::cmp::Ordering::Less => &mut below,
                std::cmp::Ordering::Equal => &mut at,
                std::cmp::Ordering::Greater => &mut above,
            };
            slot.0 += 1;
            let expected = r <= threshold;
            if has != expected || cert.is_err() {
                slot.1.push(format!("n = {n}, r = {r}: {cert:?}"));
            }
        }
    }
    c.batch("Δ_r certificate exists for r < n/(n+1), n = 1..4", below.0, below.1);
    c.batch("no Δ_r certificate for r > n/(n+1), n = 1..4", above.0, above.1);
    c.batch("Δ_r certificate exists at r = n/(n+1), n = 1..4", at.0, at.1);

    let origin = |m: &MomentData| vec![BigRational::zero(); m.polytope.dimension()];
    let cases: [(&str, Result<MomentData, toric::ToricError>, bool); 3] = [
        ("CP^2 (κ = 1/3)", toric::cpn(2), true),
        ("CP^1 x CP^1 (κ = 1/2)", toric::s2_x_s2(), true),
        ("blow-up of CP^2 (κ = 1/3)", toric::blowup_cp2(), false),
    ];
    for (name, data, at_origin) in cases {
        let data = match data {
            Ok(d) => d,
            Err(e) => {
                c.add(format!("{name}: moment data"), false, e.to_string());
                continue;
            }
        };
        match data.special_point() {
            Ok(sp) => {
                let same = sp.per_vertex.iter().all(|q| *q == sp.point);
                c.add(
                    format!("{name}: p_spec independent of the vertex"),
                    same,
                    format!("p_spec = {}", toric::fmt_point(&sp.point)),
                );
                c.add(
                    format!("{name}: p_spec = vertex average"),
                    sp.vertex_average == sp.point,
                    format!("average {}", toric::fmt_point(&sp.vertex_average)),
                );
                c.add(
                    format!("{name}: p_spec strictly interior"),
                    data.polytope.contains_interior(&sp.point),
                    "interior",
                );
                if at_origin {
                    c.add(
                        format!("{name}: p_spec at the origin"),
                        sp.point == origin(&data),
                        toric::fmt_point(&sp.point),
                    );
                }
            }
            Err(e) => c.add(format!("{name}: p_spec"), false, e.to_string()),
        }
    }
}

// ---------------------------------------------------------------- quasi-state

fn qstate_suite(c: &mut Checks, seed: u64, jobs: usize) {
    let state = match toric::cpn(2).map_err(|e| e.to_string()).and_then(|m| ModelState::new(m).map_err(|e| e.to_string())) {
        Ok(s) => s,
        Err(e) => {
            c.add("CP^2 model state", false, e);
            return;
        }
    };
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<_> = (0..50)
        .map(|_| {
            let steps = r.gen_range(0..4);
            random_pl(&mut r, &state.moment().polytope, steps)
        })
        .collect();
    match state.axiom_suite(&sample) {
        Ok(rep) => {
            for axiom in ["normalization", "semi_homogeneity", "constants", "triangle", "monotonicity", "lipschitz", "vanishing"] {
                let failures: Vec<String> = rep
                    .violations
                    .iter()
                    .filter(|(a, _)| *a == axiom)
                    .map(|(_, w)| w.clone())
                    .collect();
                c.batch(format!("axiom {axiom} on 50 seeded PL functions"), rep.count(axiom), failures);
            }
        }
        Err(e) => c.add("axiom suite on 50 seeded PL functions", false, e.to_string()),
    }

    let mut failures = Vec::new();
    let mut heavy_seen = 0;
    for f in 0..20 {
        let size = r.gen_range(2..=4);
        let fam = random_disjoint_family(&mut r, &state, size);
        match state.intersection_property(&fam) {
            Ok(rep) if rep.holds => heavy_seen += rep.heavy.len(),
            Ok(rep) => failures.push(format!("family {f}: heavy bodies {:?}", rep.heavy)),
            Err(e) => failures.push(format!("family {f}: {e}")),
        }
    }
    c.batch("intersection property on 20 disjoint families", 20, failures);
    c.add("some family contains a heavy body", heavy_seen > 0, format!("{heavy_seen} heavy bodies"));

    let center: Vec<f64> = state
        .p_spec()
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .collect();
    let h = SmoothSampler::gaussian(&center, 1.0, 8.0);
    let config = FourierConfig {
        jobs: jobs.max(1),
        ..Default::default()
    };
    match fourier_reduction_demo(&state, &h, 10.0, 0.05, &config) {
        Ok(rep) => c.add(
            "Fourier demo |ζ - H(p_spec)| <= 1e-3 at R = 10, ε = 0.05",
            rep.error <= 1e-3 && (rep.target - 1.0).abs() < 1e-12,
            format!("ζ = {:.9}, target {}, error {:.3e}", rep.zeta, rep.target, rep.error),
        ),
        Err(e) => c.add("Fourier demo |ζ - H(p_spec)| <= 1e-3 at R = 10, ε = 0.05", false, e.to_string()),
    }
}
