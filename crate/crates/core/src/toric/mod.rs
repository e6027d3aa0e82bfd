//! Delzant polytopes, the special point of monotone toric data and exact
//! separation certificates for convex bodies in the moment polytope.

pub(crate) mod hull;
mod lp;
pub mod qlinalg;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use hull::{Apex, Facet, Hull};
use qlinalg::{add, dot, is_zero_vec, primitive, scale, sub, Point};

use crate::novikov::{int, rat};

pub const MAX_DIMENSION: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToricError {
    #[error("dimension {0} not supported (1..={MAX_DIMENSION})")]
    Dimension(usize),
    #[error("degenerate polytope: {0}")]
    Degenerate(String),
    #[error("point {0} is not an extreme point")]
    NotExtreme(String),
    #[error("not Delzant: {}", .0.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "))]
    NotDelzant(Vec<VertexFailure>),
    #[error("κ is required for the special point")]
    MissingKappa,
    #[error("κ not monotone for this polytope: vertex values {}", fmt_points(.0))]
    NotMonotone(Vec<Point>),
    #[error("polytope is not normalized (centroid {0})")]
    NotNormalized(String),
    #[error("special point {0} is not interior")]
    NotInterior(String),
    #[error("vertex formula {0} disagrees with vertex average {1}")]
    AverageMismatch(String, String),
    #[error("point {0} lies outside the polytope")]
    Outside(String),
    #[error("compressible data requires p_spec = 0, got {0}")]
    CompressibleOffCenter(String),
    #[error("the displaceability test needs compressible data")]
    NotCompressible,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub fn fmt_point(p: &[BigRational]) -> String {
    format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn fmt_points(ps: &[Point]) -> String {
    ps.iter().map(|p| fmt_point(p)).collect::<Vec<_>>().join(", ")
}

/// A vertex where the primitive edge directions do not form a ℤ-basis.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFailure {
    pub vertex: Point,
    pub edges: Vec<Point>,
    /// `None` when the vertex does not have exactly `k` edges.
    pub determinant: Option<BigRational>,
}

impl std::fmt::Display for VertexFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "vertex {} edges [{}]", fmt_point(&self.vertex), fmt_points(&self.edges))?;
        match &self.determinant {
            Some(d) => write!(f, " |det| = {}", d.abs()),
            None => write!(f, " (not simple)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelzantPolytope {
    k: usize,
    hull: Hull,
}

impl DelzantPolytope {
    /// Polytope with the given vertices, which must be exactly its extreme
    /// points. The Delzant condition is checked by [`Self::delzant_verify`].
    pub fn new(k: usize, vertices: Vec<Point>) -> Result<Self, ToricError> {
        if k == 0 || k > MAX_DIMENSION {
            return Err(ToricError::Dimension(k));
        }
        if let Some(p) = vertices.iter().find(|p| p.len() != k) {
            return Err(ToricError::Invalid(format!("point {} is not in ℚ^{k}", fmt_point(p))));
        }
        let hull = qlinalg_hull(&vertices, k)?;
        for p in &vertices {
            if !hull.vertices.contains(p) {
                return Err(ToricError::NotExtreme(fmt_point(p)));
            }
        }
        if hull.vertices.len() != vertices.len() {
            return Err(ToricError::Invalid("repeated vertex".into()));
        }
        Ok(DelzantPolytope { k, hull })
    }

    pub fn from_ints(k: usize, vertices: &[&[i64]]) -> Result<Self, ToricError> {
        Self::new(k, vertices.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Point] {
        &self.hull.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.hull.facets
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.hull.edges
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    /// Primitive integer directions of the edges leaving vertex `i`.
    pub fn edge_directions(&self, i: usize) -> Vec<Point> {
        self.hull
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .map(|j| primitive(&sub(&self.hull.vertices[j], &self.hull.vertices[i])))
            .collect()
    }

    pub fn contains(&self, p: &[BigRational]) -> bool {
        p.len() == self.k && self.hull.facets.iter().all(|f| dot(&f.normal, p) >= f.offset)
    }

    /// Strict inequality on every facet.
    pub fn contains_interior(&self, p: &[BigRational]) -> bool {
        p.len() == self.k && self.hull.facets.iter().all(|f| dot(&f.normal, p) > f.offset)
    }

    pub fn centroid(&self) -> Point {
        self.hull.centroid(Apex::First)
    }

    pub fn vertex_average(&self) -> Point {
        let m = BigRational::from_integer(self.hull.vertices.len().into());
        let mut acc = vec![BigRational::zero(); self.k];
        for v in &self.hull.vertices {
            acc = add(&acc, v);
        }
        scale(&acc, &m.recip())
    }

    pub fn translated(&self, w: &[BigRational]) -> DelzantPolytope {
        let vertices: Vec<Point> = self.hull.vertices.iter().map(|v| add(v, w)).collect();
        let facets = self
            .hull
            .facets
            .iter()
            .map(|f| Facet {
                offset: &f.offset + dot(&f.normal, w),
                ..f.clone()
            })
            .collect();
        DelzantPolytope {
            k: self.k,
            hull: Hull {
                vertices,
                facets,
                edges: self.hull.edges.clone(),
            },
        }
    }

    /// Translate so the Lebesgue centroid is the origin; returns the shift.
    pub fn normalize(&self) -> (DelzantPolytope, Point) {
        let w: Point = self.centroid().iter().map(|x| -x).collect();
        (self.translated(&w), w)
    }

    pub fn is_normalized(&self) -> bool {
        is_zero_vec(&self.centroid())
    }

    pub fn delzant_verify(&self) -> Result<(), ToricError> {
        let mut failures = Vec::new();
        for i in 0..self.hull.vertices.len() {
            let dirs = self.edge_directions(i);
            let det = (dirs.len() == self.k).then(|| qlinalg::determinant(&dirs));
            if det.as_ref().map_or(true, |d| d.abs() != BigRational::one()) {
                failures.push(VertexFailure {
                    vertex: self.hull.vertices[i].clone(),
                    edges: dirs,
                    determinant: det,
                });
            }
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(ToricError::NotDelzant(failures))
        }
    }
}

fn qlinalg_hull(points: &[Point], k: usize) -> Result<Hull, ToricError> {
    hull::hull(points, k).ok_or_else(|| ToricError::Degenerate(format!("points do not span ℚ^{k}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentData {
    pub polytope: DelzantPolytope,
    pub kappa: Option<BigRational>,
    /// User-declared; no polytope computation can decide it.
    pub compressible: bool,
}

/// `p_spec` with the data that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPoint {
    pub point: Point,
    /// `x + κ Σ vᵢ` at each vertex, in vertex order.
    pub per_vertex: Vec<Point>,
    pub vertex_average: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FiberStatus {
    SuperheavySpecial,
    StablyDisplaceable(Point),
    Unknown,
}

impl MomentData {
    pub fn new(polytope: DelzantPolytope, kappa: Option<BigRational>, compressible: bool) -> Result<Self, ToricError> {
        if let Some(k) = &kappa {
            if !k.is_positive() {
                return Err(ToricError::Invalid("κ must be positive".into()));
            }
        }
        Ok(MomentData {
            polytope,
            kappa,
            compressible,
        })
    }

    pub fn special_point(&self) -> Result<SpecialPoint, ToricError> {
        let kappa = self.kappa.as_ref().ok_or(ToricError::MissingKappa)?;
        let p = &self.polytope;
        if !p.is_normalized() {
            return Err(ToricError::NotNormalized(fmt_point(&p.centroid())));
        }
        p.delzant_verify()?;
        let per_vertex: Vec<Point> = (0..p.vertices().len())
            .map(|i| {
                let mut s = vec![BigRational::zero(); p.k];
                for d in p.edge_directions(i) {
                    s = add(&s, &d);
                }
                add(&p.vertices()[i], &scale(&s, kappa))
            })
            .collect();
        if per_vertex.iter().any(|q| *q != per_vertex[0]) {
            return Err(ToricError::NotMonotone(per_vertex));
        }
        let point = per_vertex[0].clone();
        let vertex_average = p.vertex_average();
        if vertex_average != point {
            return Err(ToricError::AverageMismatch(fmt_point(&point), fmt_point(&vertex_average)));
        }
        if !p.contains_interior(&point) {
            return Err(ToricError::NotInterior(fmt_point(&point)));
        }
        Ok(SpecialPoint {
            point,
            per_vertex,
            vertex_average,
        })
    }

    /// A rational functional positive on `Y`, iff `0 ∉ Y`.
    pub fn stable_displaceability_certificate(&self, y: &ConvexBody) -> Result<Option<Point>, ToricError> {
        if !self.compressible {
            return Err(ToricError::NotCompressible);
        }
        if y.dimension() != self.polytope.k {
            return Err(ToricError::Invalid("body and polytope differ in dimension".into()));
        }
        if let Some(g) = y.generators().iter().find(|g| !self.polytope.contains(g)) {
            return Err(ToricError::Outside(fmt_point(g)));
        }
        Ok(y.separating_functional())
    }

    pub fn fiber_status(&self, p: &[BigRational]) -> Result<FiberStatus, ToricError> {
        if !self.polytope.contains(p) {
            return Err(ToricError::Outside(fmt_point(p)));
        }
        let spec = match self.kappa {
            Some(_) => Some(self.special_point()?.point),
            None => None,
        };
        if self.compressible {
            if let Some(s) = &spec {
                if !is_zero_vec(s) {
                    return Err(ToricError::CompressibleOffCenter(fmt_point(s)));
                }
            }
            if is_zero_vec(p) {
                return Ok(FiberStatus::SuperheavySpecial);
            }
            let body = ConvexBody::new(self.polytope.k, vec![p.to_vec()])?;
            let cert = body
                .separating_functional()
                .expect("a nonzero point is separated from the origin");
            return Ok(FiberStatus::StablyDisplaceable(cert));
        }
        match spec {
            Some(s) if s.as_slice() == p => Ok(FiberStatus::SuperheavySpecial),
            _ => Ok(FiberStatus::Unknown),
        }
    }
}

/// Rational polytope `Y = conv(generators)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    k: usize,
    generators: Vec<Point>,
}

impl ConvexBody {
    pub fn new(k: usize, generators: Vec<Point>) -> Result<Self, ToricError> {
        if k == 0 || k > MAX_DIMENSION {
            return Err(ToricError::Dimension(k));
        }
        if generators.is_empty() {
            return Err(ToricError::Invalid("a body needs at least one generator".into()));
        }
        if let Some(p) = generators.iter().find(|p| p.len() != k) {
            return Err(ToricError::Invalid(format!("point {} is not in ℚ^{k}", fmt_point(p))));
        }
        Ok(ConvexBody { k, generators })
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Exact membership by a phase-one feasibility problem for convex weights.
    pub fn contains(&self, p: &[BigRational]) -> bool {
        // λ ≥ 0, Σλ = 1, Σ λᵢ gᵢ = p, written as pairs of inequalities.
        let m = self.generators.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut eq = |row: Point, rhs: BigRational| {
            a.push(row.clone());
            b.push(rhs.clone());
            a.push(row.iter().map(|x| -x).collect());
            b.push(-rhs);
        };
        for j in 0..self.k {
            eq(self.generators.iter().map(|g| g[j].clone()).collect(), p[j].clone());
        }
        eq(vec![BigRational::one(); m], BigRational::one());
        for i in 0..m {
            let mut row = vec![BigRational::zero(); m];
            row[i] = BigRational::one();
            a.push(row);
            b.push(BigRational::zero());
        }
        lp::feasible_point(&a, &b).is_some()
    }

    pub fn contains_origin(&self) -> bool {
        self.separating_functional().is_none()
    }

    /// `F` with `F(g) > 0` on every generator, checked exactly; tries the
    /// generator mean first and otherwise solves `F(g) ≥ 1` exactly.
    pub fn separating_functional(&self) -> Option<Point> {
        let positive = |f: &Point| self.generators.iter().all(|g| dot(f, g).is_positive());
        let m = BigRational::from_integer(self.generators.len().into());
        let mean = scale(
            &self.generators.iter().fold(vec![BigRational::zero(); self.k], |acc, g| add(&acc, g)),
            &m.recip(),
        );
        if positive(&mean) {
            return Some(mean);
        }
        let ones = vec![BigRational::one(); self.generators.len()];
        let f = lp::feasible_point(&self.generators, &ones)?;
        assert!(positive(&f), "simplex returned an invalid certificate");
        Some(f)
    }
}

/// `Δ_r = r·Δ_stand + w` with `w = −(1, …, 1)/(n+1)`.
pub fn ball_subpolytope(n: usize, r: &BigRational) -> Result<ConvexBody, ToricError> {
    if !r.is_positive() || *r > BigRational::one() {
        return Err(ToricError::Invalid("r must lie in (0, 1]".into()));
    }
    let w = vec![rat(-1, n as i64 + 1); n];
    let mut gens = vec![w.clone()];
    for i in 0..n {
        let mut v = w.clone();
        v[i] += r;
        gens.push(v);
    }
    ConvexBody::new(n, gens)
}

/// Standard simplex `{ρᵢ ≥ 0, Σρᵢ ≤ 1}` in ℚⁿ.
pub fn standard_simplex(n: usize) -> Result<DelzantPolytope, ToricError> {
    let mut verts = vec![vec![BigRational::zero(); n]];
    for i in 0..n {
        let mut v = vec![BigRational::zero(); n];
        v[i] = BigRational::one();
        verts.push(v);
    }
    DelzantPolytope::new(n, verts)
}

/// Normalized moment data of `ℂPⁿ` with lines of area 1: `κ = 1/(n+1)`.
pub fn cpn(n: usize) -> Result<MomentData, ToricError> {
    let (p, _) = standard_simplex(n)?.normalize();
    MomentData::new(p, Some(rat(1, n as i64 + 1)), true)
}

/// Monotone `ℂP¹ × ℂP¹`: the square `[−1/2, 1/2]²`, `κ = 1/2`.
pub fn s2_x_s2() -> Result<MomentData, ToricError> {
    let h = rat(1, 2);
    let m = -h.clone();
    let p = DelzantPolytope::new(
        2,
        vec![
            vec![m.clone(), m.clone()],
            vec![h.clone(), m.clone()],
            vec![h.clone(), h.clone()],
            vec![m.clone(), h.clone()],
        ],
    )?;
    MomentData::new(p, Some(h), true)
}

/// Monotone one-point blow-up of `ℂP²`: the simplex `{x, y ≥ −1/3,
/// x + y ≤ 1/3}` with the corner at `(−1/3, −1/3)` cut by `x + y ≥ −1/3`,
/// normalized; `κ = 1/3`. Its circle actions are not compressible.
pub fn blowup_cp2() -> Result<MomentData, ToricError> {
    let t = |a: i64, b: i64| vec![rat(a, 3), rat(b, 3)];
    let p = DelzantPolytope::new(2, vec![t(0, -1), t(2, -1), t(-1, 2), t(-1, 0)])?;
    let (p, _) = p.normalize();
    MomentData::new(p, Some(rat(1, 3)), false)
}
