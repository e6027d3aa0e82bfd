//! Piecewise-linear functions on rational triangulations, evaluated exactly.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::QStateError;
use crate::toric::hull::{hull, Apex};
use crate::toric::qlinalg::{affine_dim, dot, inverse, solve, Point};
use crate::toric::{fmt_point, ConvexBody, DelzantPolytope, MAX_DIMENSION};

/// `⟨normal, x⟩ ≥ offset`.
pub type Halfspace = (Point, BigRational);

/// `x ↦ ⟨gradient, x⟩ + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub gradient: Point,
    pub constant: BigRational,
}

impl Affine {
    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        dot(&self.gradient, x) + &self.constant
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PLFunction {
    k: usize,
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
    values: Vec<BigRational>,
    /// Rows of `M⁻¹` for `M = [s₀ … s_k; 1 … 1]`, so `λ = M⁻¹ (x, 1)`.
    bary: Vec<Vec<Point>>,
    /// Coordinate-wise bounds of each simplex.
    bounds: Vec<(Point, Point)>,
}

fn barycentric_rows(vs: &[&Point]) -> Option<Vec<Point>> {
    let k = vs.len() - 1;
    let m: Vec<Point> = (0..=k)
        .map(|row| {
            vs.iter()
                .map(|v| if row < k { v[row].clone() } else { BigRational::from_integer(1.into()) })
                .collect()
        })
        .collect();
    inverse(&m)
}

fn homogeneous(x: &[BigRational]) -> Point {
    let mut h = x.to_vec();
    h.push(BigRational::from_integer(1.into()));
    h
}

impl PLFunction {
    /// Validates dimensions, non-degenerate simplices, non-overlapping
    /// interiors and continuity at hanging vertices.
    pub fn new(
        k: usize,
        vertices: Vec<Point>,
        simplices: Vec<Vec<usize>>,
        values: Vec<BigRational>,
    ) -> Result<Self, QStateError> {
        if k == 0 || k > MAX_DIMENSION {
            return Err(QStateError::Dimension(k));
        }
        if simplices.is_empty() {
            return Err(QStateError::Invalid("a triangulation needs at least one simplex".into()));
        }
        if values.len() != vertices.len() {
            return Err(QStateError::Invalid(format!(
                "{} values for {} vertices",
                values.len(),
                vertices.len()
            )));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != k) {
            return Err(QStateError::Invalid(format!("vertex {} is not in ℚ^{k}", fmt_point(v))));
        }
        for i in 0..vertices.len() {
            if vertices[i + 1..].contains(&vertices[i]) {
                return Err(QStateError::Invalid(format!("duplicate vertex {}", fmt_point(&vertices[i]))));
            }
        }
        let f = Self::unchecked(k, vertices, simplices, values)?;
        for i in 0..f.simplices.len() {
            for j in i + 1..f.simplices.len() {
                if f.overlap(i, &f, j) {
                    return Err(QStateError::Overlap(i, j));
                }
            }
        }
        for (v, x) in f.vertices.iter().enumerate() {
            for (s, simplex) in f.simplices.iter().enumerate() {
                if simplex.contains(&v) {
                    continue;
                }
                if let Some(val) = f.eval_in(s, x) {
                    if val != f.values[v] {
                        return Err(QStateError::Discontinuous(fmt_point(x)));
                    }
                }
            }
        }
        Ok(f)
    }

    /// Skips the overlap and continuity checks; used for functions built from
    /// data that is continuous by construction.
    pub(crate) fn unchecked(
        k: usize,
        vertices: Vec<Point>,
        simplices: Vec<Vec<usize>>,
        values: Vec<BigRational>,
    ) -> Result<Self, QStateError> {
        let mut bary = Vec::with_capacity(simplices.len());
        let mut bounds = Vec::with_capacity(simplices.len());
        for (s, simplex) in simplices.iter().enumerate() {
            if simplex.len() != k + 1 || simplex.iter().any(|&i| i >= vertices.len()) {
                return Err(QStateError::Invalid(format!("simplex {s} must list {} vertex indices", k + 1)));
            }
            let vs: Vec<&Point> = simplex.iter().map(|&i| &vertices[i]).collect();
            bary.push(barycentric_rows(&vs).ok_or(QStateError::DegenerateSimplex(s))?);
            let lo = (0..k).map(|d| vs.iter().map(|v| v[d].clone()).min().unwrap()).collect();
            let hi = (0..k).map(|d| vs.iter().map(|v| v[d].clone()).max().unwrap()).collect();
            bounds.push((lo, hi));
        }
        Ok(PLFunction {
            k,
            vertices,
            simplices,
            values,
            bary,
            bounds,
        })
    }

    /// The constant function on a fan triangulation of `Δ`.
    pub fn constant(polytope: &DelzantPolytope, c: BigRational) -> Self {
        Self::from_affine(
            polytope,
            &Affine {
                gradient: vec![BigRational::zero(); polytope.dimension()],
                constant: c,
            },
        )
    }

    /// An affine function restricted to a fan triangulation of `Δ`.
    pub fn from_affine(polytope: &DelzantPolytope, a: &Affine) -> Self {
        let h = polytope.hull();
        let values = h.vertices.iter().map(|v| a.eval(v)).collect();
        Self::unchecked(polytope.dimension(), h.vertices.clone(), h.triangulate(Apex::First), values)
            .expect("fan triangulation of a full-dimensional polytope")
    }

    /// Glues affine pieces, each given on a polytope in H-representation.
    /// Pieces must have disjoint interiors and agree where they meet.
    pub fn from_pieces(k: usize, pieces: &[(Vec<Halfspace>, Affine)]) -> Result<Self, QStateError> {
        let mut b = Builder::default();
        for (cell, a) in pieces {
            let vs = cell_vertices(k, cell);
            if affine_dim(&vs.iter().collect::<Vec<_>>()) == k as isize {
                b.add_cell(k, &vs, |x| a.eval(x));
            }
        }
        b.finish(k)
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    fn lambda(&self, s: usize, x: &[BigRational]) -> Vec<BigRational> {
        let h = homogeneous(x);
        self.bary[s].iter().map(|row| dot(row, &h)).collect()
    }

    fn eval_in(&self, s: usize, x: &[BigRational]) -> Option<BigRational> {
        let l = self.lambda(s, x);
        if l.iter().any(|v| v.is_negative()) {
            return None;
        }
        Some(l.iter().zip(&self.simplices[s]).map(|(w, &i)| w * &self.values[i]).sum())
    }

    /// Exact value, or `None` outside the triangulated domain.
    pub fn evaluate(&self, x: &[BigRational]) -> Option<BigRational> {
        if x.len() != self.k {
            return None;
        }
        (0..self.simplices.len()).find_map(|s| self.eval_in(s, x))
    }

    /// `λᵢ ≥ 0` constraints of simplex `s`.
    fn halfspaces(&self, s: usize) -> Vec<Halfspace> {
        self.bary[s]
            .iter()
            .map(|row| (row[..self.k].to_vec(), -row[self.k].clone()))
            .collect()
    }

    fn affine_on(&self, s: usize) -> Affine {
        let mut g = vec![BigRational::zero(); self.k + 1];
        for (row, &i) in self.bary[s].iter().zip(&self.simplices[s]) {
            for (a, r) in g.iter_mut().zip(row) {
                *a += r * &self.values[i];
            }
        }
        let constant = g.pop().unwrap();
        Affine { gradient: g, constant }
    }

    /// `false` when the bounding boxes of `s` and `t` meet in measure zero.
    fn boxes_meet(&self, s: usize, other: &PLFunction, t: usize) -> bool {
        let (a, b) = (&self.bounds[s], &other.bounds[t]);
        (0..self.k).all(|d| a.0[d] < b.1[d] && b.0[d] < a.1[d])
    }

    fn overlap(&self, s: usize, other: &PLFunction, t: usize) -> bool {
        if !self.boxes_meet(s, other, t) {
            return false;
        }
        let mut cell = self.halfspaces(s);
        cell.extend(other.halfspaces(t));
        let vs = cell_vertices(self.k, &cell);
        affine_dim(&vs.iter().collect::<Vec<_>>()) == self.k as isize
    }

    /// Full-dimensional cells `S ∩ T` of the common refinement over the
    /// intersection of both domains, with the affine pieces on each.
    pub(crate) fn common_cells(&self, other: &PLFunction) -> Vec<(Vec<Point>, Affine, Affine)> {
        let mut out = Vec::new();
        for s in 0..self.simplices.len() {
            for t in 0..other.simplices.len() {
                if !self.boxes_meet(s, other, t) {
                    continue;
                }
                let mut cell = self.halfspaces(s);
                cell.extend(other.halfspaces(t));
                let vs = cell_vertices(self.k, &cell);
                if affine_dim(&vs.iter().collect::<Vec<_>>()) == self.k as isize {
                    out.push((vs, self.affine_on(s), other.affine_on(t)));
                }
            }
        }
        out
    }

    /// Vertices of the common refinement with the values of both functions.
    pub fn refinement_values(&self, other: &PLFunction) -> Vec<(Point, BigRational, BigRational)> {
        refinement_values_of(&self.common_cells(other))
    }

    /// `f ≤ g` on the common domain, decided at refinement vertices.
    pub fn le(&self, other: &PLFunction) -> bool {
        self.refinement_values(other).iter().all(|(_, x, y)| x <= y)
    }

    /// `sup |f − g|` over the common domain.
    pub fn sup_distance(&self, other: &PLFunction) -> BigRational {
        self.refinement_values(other)
            .iter()
            .map(|(_, x, y)| (x - y).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// `f + g` on the common refinement.
    pub fn add(&self, other: &PLFunction) -> Result<PLFunction, QStateError> {
        if self.k != other.k {
            return Err(QStateError::Dimension(other.k));
        }
        sum_of_cells(self.k, &self.common_cells(other))
    }

    pub fn scale(&self, alpha: &BigRational) -> PLFunction {
        self.map_values(|v| v * alpha)
    }

    pub fn add_constant(&self, c: &BigRational) -> PLFunction {
        self.map_values(|v| v + c)
    }

    fn map_values(&self, f: impl Fn(&BigRational) -> BigRational) -> PLFunction {
        PLFunction {
            values: self.values.iter().map(f).collect(),
            ..self.clone()
        }
    }

    /// Indices of simplices on which the function is not identically zero.
    /// Their union is the support.
    pub fn support(&self) -> Vec<usize> {
        (0..self.simplices.len())
            .filter(|&s| self.simplices[s].iter().any(|&i| !self.values[i].is_zero()))
            .collect()
    }

    /// Convex hull of the support, `None` for the zero function.
    pub fn support_hull(&self) -> Option<ConvexBody> {
        let mut pts: Vec<Point> = Vec::new();
        for s in self.support() {
            for &i in &self.simplices[s] {
                if !pts.contains(&self.vertices[i]) {
                    pts.push(self.vertices[i].clone());
                }
            }
        }
        if pts.is_empty() {
            return None;
        }
        ConvexBody::new(self.k, pts).ok()
    }

    /// Replaces simplex `s` by the `k + 1` cones from `p`, a point of its
    /// interior; the new vertex takes the interpolated value.
    pub fn stellar_subdivide(&self, s: usize, p: Point) -> Result<PLFunction, QStateError> {
        if self.lambda(s, &p).iter().any(|l| !l.is_positive()) {
            return Err(QStateError::Invalid(format!("{} is not interior to simplex {s}", fmt_point(&p))));
        }
        let value = self.eval_in(s, &p).expect("interior point");
        let mut vertices = self.vertices.clone();
        let mut values = self.values.clone();
        vertices.push(p);
        values.push(value);
        let c = vertices.len() - 1;
        let mut simplices: Vec<Vec<usize>> = self.simplices.clone();
        let old = simplices.remove(s);
        for i in 0..old.len() {
            let mut sub = old.clone();
            sub[i] = c;
            simplices.push(sub);
        }
        Self::unchecked(self.k, vertices, simplices, values)
    }

    /// `true` when the simplices tile `Δ`: all lie in `Δ`, interiors are
    /// disjoint and the volumes add up.
    pub fn covers(&self, polytope: &DelzantPolytope) -> bool {
        if polytope.dimension() != self.k || !self.vertices.iter().all(|v| polytope.contains(v)) {
            return false;
        }
        for i in 0..self.simplices.len() {
            for j in i + 1..self.simplices.len() {
                if self.overlap(i, self, j) {
                    return false;
                }
            }
        }
        let total: BigRational = self
            .simplices
            .iter()
            .map(|s| {
                let p0 = &self.vertices[s[0]];
                let m: Vec<Point> = s[1..].iter().map(|&i| crate::toric::qlinalg::sub(&self.vertices[i], p0)).collect();
                crate::toric::qlinalg::determinant(&m).abs()
            })
            .sum();
        total == polytope.hull().volume_weight(Apex::First)
    }
}

pub(crate) type Cells = Vec<(Vec<Point>, Affine, Affine)>;

pub(crate) fn refinement_values_of(cells: &Cells) -> Vec<(Point, BigRational, BigRational)> {
    let mut seen: BTreeMap<Point, (BigRational, BigRational)> = BTreeMap::new();
    for (vs, a, b) in cells {
        for v in vs {
            if !seen.contains_key(v) {
                seen.insert(v.clone(), (a.eval(v), b.eval(v)));
            }
        }
    }
    seen.into_iter().map(|(p, (x, y))| (p, x, y)).collect()
}

pub(crate) fn sum_of_cells(k: usize, cells: &Cells) -> Result<PLFunction, QStateError> {
    let mut b = Builder::default();
    for (vs, fa, ga) in cells {
        b.add_cell(k, vs, |x| fa.eval(x) + ga.eval(x));
    }
    b.finish(k)
}

/// Vertices of `{x : ⟨a, x⟩ ≥ b for all (a, b)}` when bounded, by solving
/// every `k`-subset of tight constraints.
pub fn cell_vertices(k: usize, cell: &[Halfspace]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let m = cell.len();
    let mut idx: Vec<usize> = (0..k).collect();
    if m < k {
        return out;
    }
    loop {
        let rows: Vec<Point> = idx.iter().map(|&i| cell[i].0.clone()).collect();
        let rhs: Vec<BigRational> = idx.iter().map(|&i| cell[i].1.clone()).collect();
        if let Some(x) = solve(&rows, &rhs) {
            if cell.iter().all(|(a, b)| dot(a, &x) >= *b) && !out.contains(&x) {
                out.push(x);
            }
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Accumulates triangulated cells into one vertex-indexed function.
#[derive(Default)]
struct Builder {
    index: BTreeMap<Point, usize>,
    vertices: Vec<Point>,
    values: Vec<BigRational>,
    simplices: Vec<Vec<usize>>,
}

impl Builder {
    fn add_cell(&mut self, k: usize, vs: &[Point], f: impl Fn(&[BigRational]) -> BigRational) {
        let Some(h) = hull(vs, k) else { return };
        for s in h.triangulate(Apex::First) {
            let ids = s
                .iter()
                .map(|&i| {
                    let p = &h.vertices[i];
                    *self.index.entry(p.clone()).or_insert_with(|| {
                        self.vertices.push(p.clone());
                        self.values.push(f(p));
                        self.vertices.len() - 1
                    })
                })
                .collect();
            self.simplices.push(ids);
        }
    }

    fn finish(self, k: usize) -> Result<PLFunction, QStateError> {
        if self.simplices.is_empty() {
            return Err(QStateError::EmptyDomain);
        }
        PLFunction::unchecked(k, self.vertices, self.simplices, self.values)
    }
}
