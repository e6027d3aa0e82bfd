//! Exact convex hulls of small point sets in ℚ^k by facet enumeration, with
//! fan triangulations for volumes and centroids.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::qlinalg::{affine_dim, determinant, dot, nullspace, primitive, rank, sub, Point};

/// `⟨normal, x⟩ ≥ offset`, with a primitive integer inward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Point,
    pub offset: BigRational,
    /// Indices of the hull vertices on the facet.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    pub vertices: Vec<Point>,
    pub facets: Vec<Facet>,
    pub edges: Vec<(usize, usize)>,
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// Hull of a full-dimensional point set; `None` when the points do not span
/// `ℚ^k`.
pub fn hull(points: &[Point], k: usize) -> Option<Hull> {
    let refs: Vec<&Point> = points.iter().collect();
    if affine_dim(&refs) != k as isize {
        return None;
    }
    let mut planes: Vec<(Point, BigRational)> = Vec::new();
    combinations(points.len(), k, |idx| {
        let p0 = &points[idx[0]];
        let diffs: Vec<Point> = idx[1..].iter().map(|&i| sub(&points[i], p0)).collect();
        if rank(&diffs) != k - 1 {
            return;
        }
        let ns = nullspace(&diffs, k);
        let mut normal = primitive(&ns[0]);
        let mut offset = dot(&normal, p0);
        let (mut above, mut below) = (false, false);
        for p in points {
            let v = dot(&normal, p) - &offset;
            above |= v.is_positive();
            below |= v.is_negative();
        }
        if above && below {
            return;
        }
        if below {
            normal = normal.iter().map(|x| -x).collect();
            offset = -offset;
        }
        if !planes.iter().any(|(n, _)| *n == normal) {
            planes.push((normal, offset));
        }
    });
    // Extreme points lie on facets whose normals span ℚ^k.
    let mut vertices: Vec<Point> = Vec::new();
    for p in points {
        let tight: Vec<Point> = planes
            .iter()
            .filter(|(n, b)| dot(n, p) == *b)
            .map(|(n, _)| n.clone())
            .collect();
        if rank(&tight) == k && !vertices.contains(p) {
            vertices.push(p.clone());
        }
    }
    let facets: Vec<Facet> = planes
        .into_iter()
        .map(|(normal, offset)| {
            let on = (0..vertices.len())
                .filter(|&i| dot(&normal, &vertices[i]) == offset)
                .collect();
            Facet {
                normal,
                offset,
                vertices: on,
            }
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let common: Vec<Point> = facets
                .iter()
                .filter(|f| f.vertices.contains(&i) && f.vertices.contains(&j))
                .map(|f| f.normal.clone())
                .collect();
            if rank(&common) == k - 1 {
                edges.push((i, j));
            }
        }
    }
    Some(Hull {
        vertices,
        facets,
        edges,
    })
}

/// Which vertex of each face is used as the cone apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Apex {
    First,
    Last,
}

impl Hull {
    /// Simplices (as vertex index lists) triangulating the hull by coning
    /// recursively from one vertex of every face.
    pub fn triangulate(&self, apex: Apex) -> Vec<Vec<usize>> {
        let k = self.vertices.first().map_or(0, |v| v.len());
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.cone(&all, k, apex, &mut Vec::new(), &mut out);
        out
    }

    fn cone(&self, face: &[usize], d: usize, apex: Apex, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v0 = match apex {
            Apex::First => face[0],
            Apex::Last => face[face.len() - 1],
        };
        if d == 0 {
            let mut s = prefix.clone();
            s.push(v0);
            out.push(s);
            return;
        }
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            let sub: Vec<usize> = face.iter().copied().filter(|i| f.vertices.contains(i)).collect();
            if sub.contains(&v0) {
                continue;
            }
            let pts: Vec<&Point> = sub.iter().map(|&i| &self.vertices[i]).collect();
            if affine_dim(&pts) == d as isize - 1 {
                subfaces.insert(sub);
            }
        }
        prefix.push(v0);
        for sf in &subfaces {
            self.cone(sf, d - 1, apex, prefix, out);
        }
        prefix.pop();
    }

    /// `k!·vol` of a simplex given by vertex indices.
    pub fn simplex_weight(&self, s: &[usize]) -> BigRational {
        let p0 = &self.vertices[s[0]];
        let m: Vec<Point> = s[1..].iter().map(|&i| sub(&self.vertices[i], p0)).collect();
        determinant(&m).abs()
    }

    /// Lebesgue centroid from a fan triangulation.
    pub fn centroid(&self, apex: Apex) -> Point {
        let k = self.vertices[0].len();
        let mut total = BigRational::zero();
        let mut acc = vec![BigRational::zero(); k];
        for s in self.triangulate(apex) {
            let w = self.simplex_weight(&s);
            for &i in &s {
                for (a, x) in acc.iter_mut().zip(&self.vertices[i]) {
                    *a += &w * x;
                }
            }
            total += w;
        }
        let denom = total * BigRational::from_integer((k + 1).into());
        acc.into_iter().map(|a| a / &denom).collect()
    }

    /// `k!·vol` of the hull.
    pub fn volume_weight(&self, apex: Apex) -> BigRational {
        self.triangulate(apex).iter().map(|s| self.simplex_weight(s)).sum()
    }
}
