//! Per-subcommand logic. Each command returns a results tree and whether an
//! asserted identity failed.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use rigidkit::decorated_complex::{parse_chain, verify_product_formula, ChainElement, DecoratedComplex, HomologyClass};
use rigidkit::model_quasi_state::random::random_pl;
use rigidkit::model_quasi_state::{fourier_reduction_demo, FourierConfig, ModelState, SmoothSampler};
use rigidkit::novikov::{parse_rational, NovikovScalar};
use rigidkit::quantum_algebra::{parse_element, QHElement, QuantumAlgebra, SemisimpleWitness, Semisimplicity};
use rigidkit::symplectic_index::{
    cz_matr, ind, leray_verify, maslov_loop, qm_defect, sample_defect, IndexValue, LagrangianFrame, MatrixPath,
    Tolerances, C_EMP,
};
use rigidkit::toric::{ball_subpolytope, ConvexBody, FiberStatus, MomentData, ToricError};

use crate::docs::{self, DocError, DocKind, Document, RingDoc};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

fn compute(e: impl ToString) -> CliError {
    CliError::Compute(e.to_string())
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Shared state of one invocation: options and every input read.
#[derive(Debug, Default)]
pub struct Ctx {
    pub seed: u64,
    pub jobs: usize,
    pub inputs: Vec<(String, Vec<u8>)>,
}

impl Ctx {
    fn text(&mut self, path: &Path) -> Result<String, CliError> {
        let text = docs::read_text(path)?;
        self.inputs.push((path.display().to_string(), text.as_bytes().to_vec()));
        Ok(text)
    }

    fn load(&mut self, path: &Path, kind: DocKind) -> Result<Document, CliError> {
        let text = self.text(path)?;
        Ok(docs::parse_document(&text, kind)?)
    }

    fn load_structure(&mut self, path: &Path, kind: DocKind) -> Result<Document, CliError> {
        let text = self.text(path)?;
        Ok(docs::parse_structure(&text, kind)?)
    }

    fn ring(&mut self, path: &Path, checked: bool) -> Result<QuantumAlgebra, CliError> {
        let doc = if checked { self.load(path, DocKind::Ring)? } else { self.load_structure(path, DocKind::Ring)? };
        match doc {
            Document::Ring(a) => Ok(a),
            _ => unreachable!("ring loader returns rings"),
        }
    }

    fn complex(&mut self, path: &Path, checked: bool) -> Result<DecoratedComplex, CliError> {
        let doc = if checked {
            self.load(path, DocKind::Complex)?
        } else {
            self.load_structure(path, DocKind::Complex)?
        };
        match doc {
            Document::Complex(v) => Ok(v),
            _ => unreachable!("complex loader returns complexes"),
        }
    }

    fn path(&mut self, path: &Path) -> Result<MatrixPath, CliError> {
        match self.load(path, DocKind::Path)? {
            Document::Path(p) => Ok(p),
            _ => unreachable!("path loader returns paths"),
        }
    }

    fn frame(&mut self, path: &Path) -> Result<LagrangianFrame, CliError> {
        match self.load(path, DocKind::Frame)? {
            Document::Frame(f) => Ok(f),
            _ => unreachable!("frame loader returns frames"),
        }
    }

    fn moment(&mut self, path: &Path, kind: DocKind) -> Result<MomentData, CliError> {
        match self.load(path, kind)? {
            Document::Moment(m) => Ok(m),
            _ => unreachable!("polytope loader returns moment data"),
        }
    }

    fn body(&mut self, path: &Path) -> Result<ConvexBody, CliError> {
        match self.load(path, DocKind::Body)? {
            Document::Body(b) => Ok(b),
            _ => unreachable!("body loader returns bodies"),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Map<String, Value>,
    pub violation: bool,
}

impl Outcome {
    fn put(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    /// Records an asserted identity; a failure marks the run a violation.
    fn assert(&mut self, holds: bool) -> bool {
        self.violation |= !holds;
        holds
    }
}

fn point_json(p: &[BigRational]) -> Value {
    Value::from(p.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

// ---------------------------------------------------------------- ring

pub struct RingOpts {
    pub file: PathBuf,
    pub check_axioms: bool,
    pub idempotent: Option<String>,
    pub semisimple: bool,
    pub divide: Option<(String, String)>,
    pub kunneth: Option<PathBuf>,
}

pub fn ring(ctx: &mut Ctx, o: &RingOpts) -> Result<Outcome, CliError> {
    // With --check-axioms the axioms are reported rather than enforced on load.
    let a = ctx.ring(&o.file, !o.check_axioms)?;
    let mut out = Outcome::default();
    if o.check_axioms {
        let r = a.check_axioms().map_err(compute)?;
        let holds = out.assert(r.ok());
        out.put(
            "axioms",
            json!({
                "holds": holds,
                "unity": r.unity,
                "commutativity": r.commutativity,
                "associativity": r.associativity,
                "grading": r.grading,
            }),
        );
    }
    if let Some(expr) = &o.idempotent {
        let x = parse_element(&a, expr).map_err(usage)?;
        let sq = a.qprod(&x, &x).map_err(compute)?;
        let holds = out.assert(sq == x);
        out.put(
            "idempotent",
            json!({ "element": x.to_text(&a), "square": sq.to_text(&a), "holds": holds }),
        );
    }
    if o.semisimple {
        let s = a.is_semisimple().map_err(compute)?;
        out.put("semisimple", semisimple_json(&a, &s));
    }
    if let Some((c, t)) = &o.divide {
        let c = parse_element(&a, c).map_err(usage)?;
        let t = parse_element(&a, t).map_err(usage)?;
        let x = a.divide(&c, &t).map_err(compute)?;
        let mut v = json!({
            "divisor": c.to_text(&a),
            "target": t.to_text(&a),
            "solvable": x.is_some(),
        });
        if let Some(x) = x {
            let back = a.qprod(&c, &x).map_err(compute)?;
            let holds = out.assert(back == t);
            v["quotient"] = json!(x.to_text(&a));
            v["check"] = json!(holds);
        }
        out.put("divide", v);
    }
    if let Some(path) = &o.kunneth {
        let b = ctx.ring(path, true)?;
        let p = a.kunneth(&b).map_err(compute)?;
        let axioms = p.check_axioms().map_err(compute)?.ok();
        out.assert(axioms);
        let doc = serde_json::to_value(RingDoc::from_algebra(&p)).expect("ring documents serialize");
        out.put("kunneth", json!({ "axioms_hold": axioms, "product": doc }));
    }
    Ok(out)
}

fn semisimple_json(a: &QuantumAlgebra, s: &Semisimplicity) -> Value {
    let text = |x: &QHElement| x.to_text(a);
    let witness = match s {
        Semisimplicity::Semisimple(SemisimpleWitness::TraceForm { determinant }) => {
            json!({ "kind": "trace-form", "determinant": determinant.to_text() })
        }
        Semisimplicity::Semisimple(SemisimpleWitness::FieldPresentation { generator, m, constant }) => json!({
            "kind": "field-presentation",
            "generator": text(generator),
            "m": m,
            "constant": constant.to_text(),
        }),
        Semisimplicity::Semisimple(SemisimpleWitness::Decomposition { idempotents, block_dims }) => json!({
            "kind": "decomposition",
            "idempotents": idempotents.iter().map(text).collect::<Vec<_>>(),
            "block_dims": block_dims,
        }),
        Semisimplicity::NotSemisimple(x) => json!({ "kind": "nilpotent", "element": text(x) }),
        Semisimplicity::Inconclusive(why) => json!({ "kind": "inconclusive", "reason": why }),
    };
    json!({ "verdict": s.label(), "witness": witness })
}

// ---------------------------------------------------------------- complex

pub struct ComplexOpts {
    pub file: PathBuf,
    pub validate: bool,
    pub spectral_basis: bool,
    pub c: Option<String>,
    pub tensor: Option<PathBuf>,
    pub verify_product: bool,
    pub trials: usize,
}

fn chain_text(v: &DecoratedComplex, z: &ChainElement) -> String {
    if z.is_zero() {
        return "0".into();
    }
    z.terms()
        .map(|(i, c)| format!("({})*{}", c.to_text(), v.label(i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn complex(ctx: &mut Ctx, o: &ComplexOpts) -> Result<Outcome, CliError> {
    let v = ctx.complex(&o.file, !o.validate)?;
    let mut out = Outcome::default();
    if o.validate {
        let r = v.validate();
        let holds = out.assert(r.ok());
        out.put(
            "validate",
            json!({
                "holds": holds,
                "violations": r.violations.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "filter_drops": r.filter_drops.iter().map(|(l, fd, f)| json!({
                    "label": l, "filter_of_d": fd.to_string(), "filter": f.to_string(),
                })).collect::<Vec<_>>(),
            }),
        );
        if !holds {
            return Ok(out);
        }
    }
    if o.spectral_basis {
        let sb = v.spectral_basis().map_err(compute)?;
        let labels = |ix: &[usize]| ix.iter().map(|&i| v.label(i).to_string()).collect::<Vec<_>>();
        out.put(
            "spectral_basis",
            json!({
                "p": sb.p(),
                "q": sb.q(),
                "g": sb.g_part().iter().map(|z| chain_text(&v, z)).collect::<Vec<_>>(),
                "h": sb.h_part().iter().map(|z| chain_text(&v, z)).collect::<Vec<_>>(),
                "x": labels(sb.x_part()),
                "g_dominant": labels(sb.g_dominant()),
                "h_dominant": labels(sb.h_dominant()),
            }),
        );
    }
    if let Some(expr) = &o.c {
        let z = parse_chain(&v, expr).map_err(usage)?;
        let a = HomologyClass::from_cycle(&v, z.clone()).map_err(usage)?;
        let c = v.spectral_invariant(&a).map_err(compute)?;
        out.put("c", json!({ "class": chain_text(&v, &z), "value": c.to_string() }));
    }
    if let Some(path) = &o.tensor {
        let w = ctx.complex(path, true)?;
        let t = v.tensor(&w).map_err(compute)?;
        out.put(
            "tensor",
            json!({ "dimension": t.dim(), "generic": t.is_generic(), "gamma_generator": t.gamma().generator().to_string() }),
        );
        if o.verify_product {
            let rows = product_rows(ctx, &v, &w, o.trials)?;
            let holds = out.assert(rows.iter().all(|r| r["holds"] == json!(true)));
            out.put("product_formula", json!({ "holds": holds, "classes": rows }));
        }
    } else if o.verify_product {
        return Err(usage("--verify-product needs --tensor <file2>"));
    }
    Ok(out)
}

/// Basis classes `h_i ⊗ h'_j`, then seeded random combinations.
fn product_rows(ctx: &Ctx, v: &DecoratedComplex, w: &DecoratedComplex, trials: usize) -> Result<Vec<Value>, CliError> {
    let sv = v.spectral_basis().map_err(compute)?;
    let sw = w.spectral_basis().map_err(compute)?;
    let mut pairs: Vec<(ChainElement, ChainElement)> = Vec::new();
    for a in sv.h_part() {
        for b in sw.h_part() {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let mut rng = ctx.rng();
    if !sv.h_part().is_empty() && !sw.h_part().is_empty() {
        for _ in 0..trials {
            pairs.push((random_combination(&mut rng, v, sv.h_part()), random_combination(&mut rng, w, sw.h_part())));
        }
    }
    let mut rows = Vec::new();
    for (z1, z2) in pairs {
        let a1 = HomologyClass::from_cycle(v, z1.clone()).map_err(compute)?;
        let a2 = HomologyClass::from_cycle(w, z2.clone()).map_err(compute)?;
        let rep = verify_product_formula(v, w, &a1, &a2).map_err(compute)?;
        rows.push(json!({
            "a1": chain_text(v, &z1),
            "a2": chain_text(w, &z2),
            "lhs": rep.c_product.to_string(),
            "rhs": rep.sum().to_string(),
            "by_reduction": rep.c_product_by_reduction.to_string(),
            "holds": rep.holds(),
        }));
    }
    Ok(rows)
}

/// `Σ c_i s^{m_i g} h_i` with small integer `c_i`, not all zero.
fn random_combination(rng: &mut ChaCha8Rng, v: &DecoratedComplex, hs: &[ChainElement]) -> ChainElement {
    let f = v.field();
    let g = v.gamma().generator().clone();
    loop {
        let mut z = ChainElement::zero(f);
        for h in hs {
            let c = rng.gen_range(-2..=2i64);
            if c == 0 {
                continue;
            }
            let m = rng.gen_range(-2..=2i64);
            let s = &NovikovScalar::s_pow(f, &(&g * BigRational::from_integer(m.into()))) * &NovikovScalar::from_int(f, c);
            z.axpy(&s, h);
        }
        if !z.is_zero() {
            return z;
        }
    }
}

// ---------------------------------------------------------------- index

pub struct IndexOpts {
    pub file: PathBuf,
    pub rs: Option<PathBuf>,
    pub cz: bool,
    pub maslov: bool,
    pub leray: Option<PathBuf>,
    pub qm_defect: Option<PathBuf>,
    pub sample_defect: bool,
    pub trials: usize,
}

fn index_json(v: &IndexValue) -> Value {
    json!({
        "value": v.value(),
        "halves": v.halves,
        "estimate": v.estimate,
        "residual": v.residual,
        "crossings": v.crossings.len(),
        "regularization": v.regularization,
    })
}

pub fn index(ctx: &mut Ctx, o: &IndexOpts) -> Result<Outcome, CliError> {
    let tol = Tolerances::default();
    let mp = ctx.path(&o.file)?;
    let p = mp.to_path();
    let mut out = Outcome::default();
    if let Some(frame) = &o.rs {
        let v = ctx.frame(frame)?;
        if v.k() != mp.k() {
            return Err(usage(format!("frame is in ℝ^{} but the path is in Sp({})", 2 * v.k(), 2 * mp.k())));
        }
        out.put("rs", index_json(&ind(&p, &v, &tol).map_err(compute)?));
    }
    if o.cz {
        out.put("cz", index_json(&cz_matr(&p, &tol).map_err(compute)?));
    }
    if o.maslov {
        let m = maslov_loop(&p, &tol).map_err(compute)?;
        out.put(
            "maslov",
            json!({ "value": m.value, "winding_route": m.winding_route, "residual": m.residual }),
        );
    }
    if let Some(other) = &o.leray {
        let b = ctx.path(other)?.to_path();
        let r = leray_verify(&p, &b, &tol).map_err(compute)?;
        let holds = out.assert(r.holds() && r.residual < 1e-6);
        out.put(
            "leray",
            json!({
                "lhs": r.lhs_halves as f64 / 2.0,
                "rhs": r.rhs_halves as f64 / 2.0,
                "signature": r.signature,
                "residual": r.residual,
                "holds": holds,
            }),
        );
    }
    if let Some(other) = &o.qm_defect {
        let b = ctx.path(other)?.to_path();
        let d = qm_defect(&p, &b, &tol).map_err(compute)?;
        let bound = C_EMP + 1.0;
        let holds = out.assert(d <= bound);
        out.put("qm_defect", json!({ "defect": d, "bound": bound, "within_bound": holds }));
    }
    if o.sample_defect {
        let mut rng = ctx.rng();
        let s = sample_defect(&mut rng, &[mp.k()], o.trials, &tol);
        let bound = C_EMP + 1.0;
        let holds = out.assert(s.max <= bound);
        out.put(
            "sample_defect",
            json!({
                "k": mp.k(),
                "trials": s.trials,
                "unresolved": s.failures,
                "max": s.max,
                "mean": s.mean,
                "c_emp": C_EMP,
                "bound": bound,
                "within_bound": holds,
            }),
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------- toric

pub struct ToricOpts {
    pub file: PathBuf,
    pub normalize: bool,
    pub delzant: bool,
    pub pspec: bool,
    pub displaceable: Option<PathBuf>,
    pub fiber: Option<String>,
    pub ball: Option<(usize, String)>,
}

fn parse_point_arg(s: &str) -> Result<Vec<BigRational>, CliError> {
    s.split(',')
        .map(|x| parse_rational(x.trim()).map_err(|e| usage(format!("point '{s}': {e}"))))
        .collect()
}

/// Failures of the special-point identities are violations; missing or
/// malformed input is an error.
fn toric_failure(out: &mut Outcome, key: &str, e: ToricError) -> Result<(), CliError> {
    match e {
        ToricError::NotMonotone(_) | ToricError::AverageMismatch(..) | ToricError::NotInterior(_) => {
            out.assert(false);
            out.put(key, json!({ "holds": false, "reason": e.to_string() }));
            Ok(())
        }
        other => Err(compute(other)),
    }
}

pub fn toric(ctx: &mut Ctx, o: &ToricOpts) -> Result<Outcome, CliError> {
    let m = ctx.moment(&o.file, DocKind::Polytope)?;
    let mut out = Outcome::default();
    if o.normalize {
        let (p, shift) = m.polytope.normalize();
        out.put(
            "normalize",
            json!({
                "was_normalized": m.polytope.is_normalized(),
                "shift": point_json(&shift),
                "vertices": p.vertices().iter().map(|v| point_json(v)).collect::<Vec<_>>(),
            }),
        );
    }
    if o.delzant {
        let v = match m.polytope.delzant_verify() {
            Ok(()) => json!({ "delzant": true, "failures": [] }),
            Err(ToricError::NotDelzant(fs)) => {
                json!({ "delzant": false, "failures": fs.iter().map(|f| f.to_string()).collect::<Vec<_>>() })
            }
            Err(e) => return Err(compute(e)),
        };
        out.put("delzant", v);
    }
    if o.pspec {
        match m.special_point() {
            Ok(sp) => out.put(
                "pspec",
                json!({
                    "holds": true,
                    "point": point_json(&sp.point),
                    "per_vertex": sp.per_vertex.iter().map(|v| point_json(v)).collect::<Vec<_>>(),
                    "vertex_average": point_json(&sp.vertex_average),
                    "interior": m.polytope.contains_interior(&sp.point),
                }),
            ),
            Err(e) => toric_failure(&mut out, "pspec", e)?,
        }
    }
    if let Some(path) = &o.displaceable {
        let y = ctx.body(path)?;
        let cert = m.stable_displaceability_certificate(&y).map_err(compute)?;
        out.put(
            "displaceable",
            json!({ "certified": cert.is_some(), "certificate": cert.as_deref().map(point_json) }),
        );
    }
    if let Some(s) = &o.fiber {
        let p = parse_point_arg(s)?;
        if p.len() != m.polytope.dimension() {
            return Err(usage(format!("point {s} is not in ℚ^{}", m.polytope.dimension())));
        }
        let v = match m.fiber_status(&p) {
            Ok(FiberStatus::SuperheavySpecial) => json!({ "status": "superheavy-special" }),
            Ok(FiberStatus::StablyDisplaceable(c)) => {
                json!({ "status": "stably-displaceable", "certificate": point_json(&c) })
            }
            Ok(FiberStatus::Unknown) => json!({ "status": "unknown" }),
            Err(e @ (ToricError::NotMonotone(_) | ToricError::AverageMismatch(..) | ToricError::NotInterior(_))) => {
                return toric_failure(&mut out, "fiber", e).map(|_| out);
            }
            Err(e) => return Err(compute(e)),
        };
        out.put("fiber", json!({ "point": point_json(&p), "result": v }));
    }
    if let Some((n, r)) = &o.ball {
        let r = parse_rational(r).map_err(|e| usage(format!("r: {e}")))?;
        if *n != m.polytope.dimension() {
            return Err(usage(format!("n = {n} but the polytope has dimension {}", m.polytope.dimension())));
        }
        let y = ball_subpolytope(*n, &r).map_err(usage)?;
        let cert = m.stable_displaceability_certificate(&y).map_err(compute)?;
        out.put(
            "ball",
            json!({
                "n": n,
                "r": r.to_string(),
                "threshold": BigRational::new((*n as i64).into(), (*n as i64 + 1).into()).to_string(),
                "certified": cert.is_some(),
                "certificate": cert.as_deref().map(point_json),
            }),
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------- qstate

pub struct QstateOpts {
    pub file: PathBuf,
    pub zeta: Option<PathBuf>,
    pub axioms: bool,
    pub trials: usize,
    pub heavy: Option<PathBuf>,
    pub fourier: bool,
    pub radius: f64,
    pub eps: f64,
}

pub fn qstate(ctx: &mut Ctx, o: &QstateOpts) -> Result<Outcome, CliError> {
    let m = ctx.moment(&o.file, DocKind::MomentData)?;
    let state = ModelState::new(m).map_err(compute)?;
    let mut out = Outcome::default();
    out.put("p_spec", point_json(state.p_spec()));
    if let Some(path) = &o.zeta {
        let f = match ctx.load(path, DocKind::PlFunction)? {
            Document::PlFunction(f) => f,
            _ => unreachable!("PL loader returns PL functions"),
        };
        let z = state.zeta(&f).map_err(compute)?;
        out.put("zeta", json!({ "value": z.to_string(), "approx": z.to_f64() }));
    }
    if o.axioms {
        let mut rng = ctx.rng();
        let sample: Vec<_> = (0..o.trials)
            .map(|_| {
                let steps = rng.gen_range(0..4);
                random_pl(&mut rng, &state.moment().polytope, steps)
            })
            .collect();
        let r = state.axiom_suite(&sample).map_err(compute)?;
        let holds = out.assert(r.holds());
        out.put(
            "axioms",
            json!({
                "holds": holds,
                "functions": o.trials,
                "checks": r.checks,
                "violations": r.violations.iter().map(|(a, w)| format!("{a}: {w}")).collect::<Vec<_>>(),
            }),
        );
    }
    if let Some(path) = &o.heavy {
        let y = ctx.body(path)?;
        let r = state.model_heavy(std::slice::from_ref(&y));
        out.put(
            "heavy",
            json!({ "heavy": r.heavy, "superheavy": r.superheavy, "test_class": r.test_class }),
        );
    }
    if o.fourier {
        let center: Vec<f64> = state.p_spec().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        let h = SmoothSampler::gaussian(&center, 1.0, 8.0);
        let config = FourierConfig {
            jobs: ctx.jobs.max(1),
            ..Default::default()
        };
        let r = fourier_reduction_demo(&state, &h, o.radius, o.eps, &config).map_err(compute)?;
        out.put(
            "fourier",
            json!({
                "sampler": "unit Gaussian centered at p_spec",
                "zeta": r.zeta,
                "target": r.target,
                "error": r.error,
                "table": r.table.iter().map(|row| json!({
                    "R": row.radius,
                    "eps": row.eps,
                    "lattice_points": row.lattice_points,
                    "zeta": row.zeta,
                    "error": row.error,
                })).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(out)
}
