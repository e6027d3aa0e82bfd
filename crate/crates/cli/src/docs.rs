//! Document kinds read and written by the CLI. Every document is
//! pretty-printed JSON with fixed field names; serializing a loaded
//! canonical document reproduces it byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use rigidkit::decorated_complex::{BasisVector, DecoratedComplex, Violation};
use rigidkit::model_quasi_state::{PLFunction, QStateError};
use rigidkit::novikov::{parse_rational, parse_scalar, BaseField, NovikovScalar, PeriodGroup};
use rigidkit::quantum_algebra::{BasisClass, GradedBasis, QHElement, QuantumAlgebra};
use rigidkit::symplectic_index::{LagrangianFrame, MatrixPath, Segment, Tolerances};
use rigidkit::toric::qlinalg::Point;
use rigidkit::toric::{ConvexBody, DelzantPolytope, MomentData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    Ring,
    Complex,
    Path,
    Frame,
    Polytope,
    Body,
    PlFunction,
    MomentData,
}

impl DocKind {
    pub fn name(self) -> &'static str {
        match self {
            DocKind::Ring => "ring",
            DocKind::Complex => "complex",
            DocKind::Path => "path",
            DocKind::Frame => "frame",
            DocKind::Polytope => "polytope",
            DocKind::Body => "body",
            DocKind::PlFunction => "pl-function",
            DocKind::MomentData => "moment-data",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{kind} document: parse error at line {line}, column {column} (field `{field}`): {message}")]
    Syntax {
        kind: &'static str,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{kind} document: bad value in field `{field}`: {message}")]
    Field {
        kind: &'static str,
        field: String,
        message: String,
    },
    #[error("{kind} document: invariant `{invariant}` violated: {detail}")]
    Invariant {
        kind: &'static str,
        invariant: String,
        detail: String,
    },
}

fn field_err(kind: DocKind, field: impl Into<String>, message: impl ToString) -> DocError {
    DocError::Field {
        kind: kind.name(),
        field: field.into(),
        message: message.to_string(),
    }
}

fn invariant(kind: DocKind, name: impl Into<String>, detail: impl ToString) -> DocError {
    DocError::Invariant {
        kind: kind.name(),
        invariant: name.into(),
        detail: detail.to_string(),
    }
}

fn from_json<T: DeserializeOwned>(kind: DocKind, text: &str) -> Result<T, DocError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let syntax = |field: String, e: serde_json::Error| DocError::Syntax {
        kind: kind.name(),
        line: e.line(),
        column: e.column(),
        field,
        message: e.to_string(),
    };
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        syntax(field, e.into_inner())
    })?;
    de.end().map_err(|e| syntax(".".into(), e))?;
    Ok(value)
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn default_field() -> String {
    BaseField::Qmodel.name().to_string()
}

fn parse_field(kind: DocKind, name: &str) -> Result<BaseField, DocError> {
    BaseField::from_name(name).ok_or_else(|| field_err(kind, "field", format!("unknown base field '{name}'")))
}

fn parse_q(kind: DocKind, field: impl Into<String>, s: &str) -> Result<BigRational, DocError> {
    parse_rational(s).map_err(|e| field_err(kind, field, e))
}

fn parse_point(kind: DocKind, field: &str, k: usize, xs: &[String]) -> Result<Point, DocError> {
    if xs.len() != k {
        return Err(field_err(kind, field, format!("expected {k} coordinates, got {}", xs.len())));
    }
    xs.iter()
        .enumerate()
        .map(|(j, x)| parse_q(kind, format!("{field}[{j}]"), x))
        .collect()
}

fn point_strings(p: &[BigRational]) -> Vec<String> {
    p.iter().map(|x| x.to_string()).collect()
}

// ---------------------------------------------------------------- ring

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    #[serde(default = "default_field")]
    pub field: String,
    pub dimension_2n: u32,
    pub gamma_generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    pub classes: Vec<ClassDoc>,
    pub unity: String,
    pub point: String,
    pub table: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub label: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub k: usize,
    pub qpow: i64,
    pub scalar: String,
}

impl RingDoc {
    pub fn from_algebra(a: &QuantumAlgebra) -> Self {
        let basis = a.basis();
        let mut table = Vec::new();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let e = a.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let mut terms = Vec::new();
                for (k, lam) in e.terms() {
                    for (qpow, c) in lam.terms() {
                        terms.push(TermDoc {
                            k,
                            qpow,
                            scalar: c.to_text(),
                        });
                    }
                }
                table.push(EntryDoc { i, j, terms });
            }
        }
        RingDoc {
            field: a.field().name().to_string(),
            dimension_2n: basis.dimension_2n(),
            gamma_generator: a.gamma().generator().to_string(),
            kappa: a.kappa().map(|k| k.to_string()),
            classes: basis
                .classes()
                .iter()
                .map(|c| ClassDoc {
                    label: c.label.clone(),
                    degree: c.degree,
                })
                .collect(),
            unity: basis.label(basis.unity()).to_string(),
            point: basis.label(basis.point()).to_string(),
            table,
        }
    }

    /// Builds the algebra, checking structure but not the ring axioms.
    pub fn to_algebra(&self) -> Result<QuantumAlgebra, DocError> {
        let kind = DocKind::Ring;
        let field = parse_field(kind, &self.field)?;
        let gamma = parse_q(kind, "gamma_generator", &self.gamma_generator)?;
        let kappa = self.kappa.as_deref().map(|k| parse_q(kind, "kappa", k)).transpose()?;
        let classes = self
            .classes
            .iter()
            .map(|c| BasisClass {
                label: c.label.clone(),
                degree: c.degree,
            })
            .collect();
        let basis = GradedBasis::new(classes, self.dimension_2n).map_err(|e| invariant(kind, "graded basis", e))?;
        if basis.index_of(&self.unity) != Some(basis.unity()) {
            return Err(invariant(
                kind,
                "unity",
                format!("'{}' is not the unique class of degree {}", self.unity, self.dimension_2n),
            ));
        }
        if basis.index_of(&self.point) != Some(basis.point()) {
            return Err(invariant(kind, "point", format!("'{}' is not the unique class of degree 0", self.point)));
        }
        let n = basis.len();
        let mut entries = BTreeMap::new();
        for (e, entry) in self.table.iter().enumerate() {
            if entry.i >= n || entry.j >= n {
                return Err(invariant(kind, "table index", format!("table[{e}] = ({}, {}) with {n} classes", entry.i, entry.j)));
            }
            let mut x = QHElement::zero(field);
            for (t, term) in entry.terms.iter().enumerate() {
                let path = format!("table[{e}].terms[{t}]");
                if term.k >= n {
                    return Err(invariant(kind, "table index", format!("{path}.k = {} with {n} classes", term.k)));
                }
                let c = parse_scalar(field, &term.scalar).map_err(|err| field_err(kind, format!("{path}.scalar"), err))?;
                if !c.supported_in(&PeriodGroup::new(gamma.clone())) {
                    return Err(invariant(kind, "Γ-support", format!("{path}.scalar has exponents outside Γ")));
                }
                x = x
                    .checked_add(&QHElement::term(c, term.k, term.qpow))
                    .map_err(|err| field_err(kind, format!("{path}.scalar"), err))?;
            }
            if entries.insert((entry.i, entry.j), x).is_some() {
                return Err(invariant(kind, "unique table entries", format!("({}, {}) appears twice", entry.i, entry.j)));
            }
        }
        QuantumAlgebra::new(field, basis, PeriodGroup::new(gamma), kappa, entries).map_err(|e| invariant(kind, "table", e))
    }
}

/// Structure plus unity, commutativity, associativity and grading.
pub fn validate_ring(a: &QuantumAlgebra) -> Result<(), DocError> {
    let kind = DocKind::Ring;
    let r = a.check_axioms().map_err(|e| invariant(kind, "table", e))?;
    for (name, list) in [
        ("unity", &r.unity),
        ("commutativity", &r.commutativity),
        ("associativity", &r.associativity),
        ("grading", &r.grading),
    ] {
        if let Some(first) = list.first() {
            return Err(invariant(kind, name, first));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- complex

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    #[serde(default = "default_field")]
    pub field: String,
    pub gamma_generator: String,
    pub basis: Vec<BasisDoc>,
    pub differential: Vec<DiffDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub label: String,
    pub parity: u8,
    pub filter: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffDoc {
    pub from: String,
    pub to: String,
    pub scalar: String,
}

impl ComplexDoc {
    pub fn from_complex(v: &DecoratedComplex) -> Self {
        ComplexDoc {
            field: v.field().name().to_string(),
            gamma_generator: v.gamma().generator().to_string(),
            basis: v
                .basis()
                .iter()
                .map(|b| BasisDoc {
                    label: b.label.clone(),
                    parity: b.parity,
                    filter: b.filter.to_string(),
                })
                .collect(),
            differential: v
                .entries()
                .into_iter()
                .map(|(from, to, c)| DiffDoc {
                    from: v.label(from).to_string(),
                    to: v.label(to).to_string(),
                    scalar: c.to_text(),
                })
                .collect(),
        }
    }

    /// Builds the complex without the `d² = 0` / filtration checks.
    pub fn to_complex(&self) -> Result<DecoratedComplex, DocError> {
        let kind = DocKind::Complex;
        let field = parse_field(kind, &self.field)?;
        let gamma = parse_q(kind, "gamma_generator", &self.gamma_generator)?;
        let mut basis = Vec::new();
        for (i, b) in self.basis.iter().enumerate() {
            basis.push(BasisVector {
                label: b.label.clone(),
                parity: b.parity,
                filter: parse_q(kind, format!("basis[{i}].filter"), &b.filter)?,
            });
        }
        let index = |e: usize, name: &str, label: &str| {
            basis
                .iter()
                .position(|b| b.label == label)
                .ok_or_else(|| invariant(kind, "differential labels", format!("differential[{e}].{name} = '{label}' is not a basis label")))
        };
        let mut entries = Vec::new();
        for (e, d) in self.differential.iter().enumerate() {
            let from = index(e, "from", &d.from)?;
            let to = index(e, "to", &d.to)?;
            let c: NovikovScalar =
                parse_scalar(field, &d.scalar).map_err(|err| field_err(kind, format!("differential[{e}].scalar"), err))?;
            entries.push((from, to, c));
        }
        DecoratedComplex::new(field, PeriodGroup::new(gamma), basis, entries).map_err(|e| invariant(kind, "complex", e))
    }
}

fn violation_name(v: &Violation) -> &'static str {
    match v {
        Violation::DSquared { .. } => "d² = 0",
        Violation::Parity { .. } => "odd differential",
        Violation::FilterIncrease { .. } => "strict filter decrease",
        Violation::Support { .. } => "Γ-support",
    }
}

pub fn validate_complex(v: &DecoratedComplex) -> Result<(), DocError> {
    match v.validate().violations.first() {
        Some(first) => Err(invariant(DocKind::Complex, violation_name(first), first)),
        None => Ok(()),
    }
}

// ---------------------------------------------------------------- path, frame

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDoc {
    pub k: usize,
    pub segments: Vec<SegmentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    /// `2k × 2k`, row-major.
    pub generator: Vec<f64>,
    pub duration: f64,
}

impl PathDoc {
    pub fn from_path(p: &MatrixPath) -> Self {
        PathDoc {
            k: p.k(),
            segments: p
                .segments()
                .iter()
                .map(|s| SegmentDoc {
                    generator: s.generator.transpose().iter().copied().collect(),
                    duration: s.duration,
                })
                .collect(),
        }
    }

    pub fn to_path(&self) -> Result<MatrixPath, DocError> {
        let kind = DocKind::Path;
        let n = 2 * self.k;
        let mut segments = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            if s.generator.len() != n * n {
                return Err(invariant(kind, "generator shape", format!("segments[{i}].generator has {} entries, expected {}", s.generator.len(), n * n)));
            }
            if s.generator.iter().any(|x| !x.is_finite()) {
                return Err(field_err(kind, format!("segments[{i}].generator"), "entries must be finite"));
            }
            segments.push(Segment {
                generator: DMatrix::from_row_slice(n, n, &s.generator),
                duration: s.duration,
            });
        }
        MatrixPath::new(self.k, segments).map_err(|e| invariant(kind, "symmetric generators, positive durations", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    /// `2k` rows of `k` entries; the columns span the Lagrangian.
    pub rows: Vec<Vec<f64>>,
}

impl FrameDoc {
    pub fn from_frame(f: &LagrangianFrame) -> Self {
        let x = f.columns();
        FrameDoc {
            rows: (0..x.nrows()).map(|r| x.row(r).iter().copied().collect()).collect(),
        }
    }

    pub fn to_frame(&self) -> Result<LagrangianFrame, DocError> {
        let kind = DocKind::Frame;
        let k = self.rows.first().map_or(0, |r| r.len());
        if k == 0 || self.rows.len() != 2 * k || self.rows.iter().any(|r| r.len() != k) {
            return Err(invariant(kind, "frame shape", "rows must form a 2k × k matrix"));
        }
        if self.rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(field_err(kind, "rows", "entries must be finite"));
        }
        let flat: Vec<f64> = self.rows.iter().flatten().copied().collect();
        LagrangianFrame::new(DMatrix::from_row_slice(2 * k, k, &flat), Tolerances::default().lagrangian)
            .map_err(|e| invariant(kind, "Lagrangian", e))
    }
}

// ---------------------------------------------------------------- polytope, body

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDoc {
    pub dimension: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(default)]
    pub compressible: bool,
}

impl PolytopeDoc {
    pub fn from_moment(m: &MomentData) -> Self {
        PolytopeDoc {
            dimension: m.polytope.dimension(),
            vertices: m.polytope.vertices().iter().map(|v| point_strings(v)).collect(),
            kappa: m.kappa.as_ref().map(|k| k.to_string()),
            compressible: m.compressible,
        }
    }

    pub fn to_moment(&self) -> Result<MomentData, DocError> {
        let kind = DocKind::Polytope;
        let mut verts = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            verts.push(parse_point(kind, &format!("vertices[{i}]"), self.dimension, v)?);
        }
        let kappa = self.kappa.as_deref().map(|k| parse_q(kind, "kappa", k)).transpose()?;
        let polytope = DelzantPolytope::new(self.dimension, verts).map_err(|e| invariant(kind, "convex position", e))?;
        MomentData::new(polytope, kappa, self.compressible).map_err(|e| invariant(kind, "kappa", e))
    }
}

/// Moment data must carry `κ`, be normalized, Delzant and monotone.
pub fn validate_moment(m: &MomentData) -> Result<(), DocError> {
    use rigidkit::toric::ToricError;
    let kind = DocKind::MomentData;
    m.special_point().map(|_| ()).map_err(|e| {
        let name = match &e {
            ToricError::MissingKappa => "kappa",
            ToricError::NotNormalized(_) => "normalized",
            ToricError::NotDelzant(_) => "Delzant",
            ToricError::NotMonotone(_) => "monotone",
            ToricError::AverageMismatch(..) => "vertex average",
            ToricError::NotInterior(_) => "interior special point",
            _ => "moment data",
        };
        invariant(kind, name, e)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyDoc {
    pub dimension: usize,
    pub generators: Vec<Vec<String>>,
}

impl BodyDoc {
    pub fn from_body(b: &ConvexBody) -> Self {
        BodyDoc {
            dimension: b.dimension(),
            generators: b.generators().iter().map(|g| point_strings(g)).collect(),
        }
    }

    pub fn to_body(&self) -> Result<ConvexBody, DocError> {
        let kind = DocKind::Body;
        let mut gens = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            gens.push(parse_point(kind, &format!("generators[{i}]"), self.dimension, g)?);
        }
        ConvexBody::new(self.dimension, gens).map_err(|e| invariant(kind, "body", e))
    }
}

// ---------------------------------------------------------------- PL function

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlDoc {
    pub dimension: usize,
    pub vertices: Vec<Vec<String>>,
    pub simplices: Vec<Vec<usize>>,
    pub values: Vec<String>,
}

impl PlDoc {
    pub fn from_function(f: &PLFunction) -> Self {
        PlDoc {
            dimension: f.dimension(),
            vertices: f.vertices().iter().map(|v| point_strings(v)).collect(),
            simplices: f.simplices().to_vec(),
            values: f.values().iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn to_function(&self) -> Result<PLFunction, DocError> {
        let kind = DocKind::PlFunction;
        let mut verts = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            verts.push(parse_point(kind, &format!("vertices[{i}]"), self.dimension, v)?);
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, x)| parse_q(kind, format!("values[{i}]"), x))
            .collect::<Result<Vec<_>, _>>()?;
        PLFunction::new(self.dimension, verts, self.simplices.clone(), values).map_err(|e| {
            let name = match &e {
                QStateError::DegenerateSimplex(_) => "non-degenerate simplices",
                QStateError::Overlap(..) => "non-overlapping simplices",
                QStateError::Discontinuous(_) => "continuity",
                QStateError::Dimension(_) => "dimension",
                _ => "triangulation",
            };
            invariant(kind, name, e)
        })
    }
}

// ---------------------------------------------------------------- dispatch

#[derive(Debug, Clone)]
pub enum Document {
    Ring(QuantumAlgebra),
    Complex(DecoratedComplex),
    Path(MatrixPath),
    Frame(LagrangianFrame),
    /// Polytope and moment-data documents share one shape.
    Moment(MomentData),
    Body(ConvexBody),
    PlFunction(PLFunction),
}

/// Parses and fully validates a document of the given kind.
pub fn parse_document(text: &str, kind: DocKind) -> Result<Document, DocError> {
    let doc = parse_structure(text, kind)?;
    match (&doc, kind) {
        (Document::Ring(a), _) => validate_ring(a)?,
        (Document::Complex(v), _) => validate_complex(v)?,
        (Document::Moment(m), DocKind::MomentData) => validate_moment(m)?,
        _ => {}
    }
    Ok(doc)
}

/// Parses a document checking only what its type needs to exist; ring
/// axioms, complex conditions and moment-data monotonicity are left to the
/// caller.
pub fn parse_structure(text: &str, kind: DocKind) -> Result<Document, DocError> {
    Ok(match kind {
        DocKind::Ring => Document::Ring(from_json::<RingDoc>(kind, text)?.to_algebra()?),
        DocKind::Complex => Document::Complex(from_json::<ComplexDoc>(kind, text)?.to_complex()?),
        DocKind::Path => Document::Path(from_json::<PathDoc>(kind, text)?.to_path()?),
        DocKind::Frame => Document::Frame(from_json::<FrameDoc>(kind, text)?.to_frame()?),
        DocKind::Polytope | DocKind::MomentData => {
            Document::Moment(from_json::<PolytopeDoc>(kind, text)?.to_moment().map_err(|e| rekind(e, kind))?)
        }
        DocKind::Body => Document::Body(from_json::<BodyDoc>(kind, text)?.to_body()?),
        DocKind::PlFunction => Document::PlFunction(from_json::<PlDoc>(kind, text)?.to_function()?),
    })
}

fn rekind(e: DocError, kind: DocKind) -> DocError {
    match e {
        DocError::Field { field, message, .. } => DocError::Field {
            kind: kind.name(),
            field,
            message,
        },
        DocError::Invariant { invariant, detail, .. } => DocError::Invariant {
            kind: kind.name(),
            invariant,
            detail,
        },
        other => other,
    }
}

pub fn load_document(path: &Path, kind: DocKind) -> Result<Document, DocError> {
    let text = read_text(path)?;
    parse_document(&text, kind)
}

pub fn read_text(path: &Path) -> Result<String, DocError> {
    std::fs::read_to_string(path).map_err(|e| DocError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Canonical text of a document.
pub fn serialize_document(doc: &Document) -> String {
    match doc {
        Document::Ring(a) => to_json(&RingDoc::from_algebra(a)),
        Document::Complex(v) => to_json(&ComplexDoc::from_complex(v)),
        Document::Path(p) => to_json(&PathDoc::from_path(p)),
        Document::Frame(f) => to_json(&FrameDoc::from_frame(f)),
        Document::Moment(m) => to_json(&PolytopeDoc::from_moment(m)),
        Document::Body(b) => to_json(&BodyDoc::from_body(b)),
        Document::PlFunction(f) => to_json(&PlDoc::from_function(f)),
    }
}
