//! Seeded generators of PL functions and disjoint body families.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use super::{disjoint, ModelState, PLFunction};
use crate::novikov::rat;
use crate::toric::qlinalg::{add, scale, Point};
use crate::toric::{Apex, ConvexBody, DelzantPolytope};

fn random_value<R: Rng>(rng: &mut R) -> BigRational {
    let den = rng.gen_range(1..=4);
    rat(rng.gen_range(-12..=12), den)
}

/// Convex combination of `points` with random positive integer weights.
fn random_combination<R: Rng>(rng: &mut R, points: &[&Point]) -> Point {
    let w: Vec<i64> = points.iter().map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    points
        .iter()
        .zip(&w)
        .fold(vec![BigRational::zero(); points[0].len()], |acc, (p, &wi)| {
            add(&acc, &scale(p, &rat(wi, total)))
        })
}

/// A fan triangulation of `Δ` refined by `subdivisions` stellar steps at
/// random interior points, with random rational vertex values.
pub fn random_pl<R: Rng>(rng: &mut R, polytope: &DelzantPolytope, subdivisions: usize) -> PLFunction {
    let apex = if rng.gen_bool(0.5) { Apex::First } else { Apex::Last };
    let h = polytope.hull();
    let k = polytope.dimension();
    let zeros = vec![BigRational::zero(); h.vertices.len()];
    let mut f = PLFunction::unchecked(k, h.vertices.clone(), h.triangulate(apex), zeros)
        .expect("fan triangulation of a full-dimensional polytope");
    for _ in 0..subdivisions {
        let s = rng.gen_range(0..f.simplices().len());
        let pts: Vec<&Point> = f.simplices()[s].iter().map(|&i| &f.vertices()[i]).collect();
        let p = random_combination(rng, &pts);
        f = f.stellar_subdivide(s, p).expect("positive weights give an interior point");
    }
    let values = f.vertices().iter().map(|_| random_value(rng)).collect();
    PLFunction::unchecked(k, f.vertices().to_vec(), f.simplices().to_vec(), values).expect("valid triangulation")
}

/// Small simplices inside `Δ`, pairwise disjoint; about half the families
/// include a body through `p_spec`.
pub fn random_disjoint_family<R: Rng>(rng: &mut R, state: &ModelState, size: usize) -> Vec<ConvexBody> {
    let delta = &state.moment().polytope;
    let k = delta.dimension();
    let verts: Vec<&Point> = delta.vertices().iter().collect();
    let mut family: Vec<ConvexBody> = Vec::new();
    let through_spec = rng.gen_bool(0.5);
    for _ in 0..200 {
        if family.len() == size {
            break;
        }
        let center = if through_spec && family.is_empty() {
            state.p_spec().clone()
        } else {
            random_combination(rng, &verts)
        };
        let mut gens = vec![center.clone()];
        for _ in 0..k {
            let v = verts[rng.gen_range(0..verts.len())];
            let t = rat(rng.gen_range(1..=3), 10);
            gens.push(add(&scale(&center, &(BigRational::from_integer(1.into()) - &t)), &scale(v, &t)));
        }
        let body = ConvexBody::new(k, gens).expect("points in ℚ^k");
        if family.iter().all(|b| disjoint(b, &body).unwrap_or(false)) {
            family.push(body);
        }
    }
    family
}
