use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rigidkit::novikov::{int, rat};
use rigidkit::toric::qlinalg::{dot, Point};
use rigidkit::toric::{
    ball_subpolytope, blowup_cp2, cpn, s2_x_s2, standard_simplex, Apex, ConvexBody, DelzantPolytope, FiberStatus,
    MomentData, ToricError,
};

fn pt(xs: &[i64]) -> Point {
    xs.iter().map(|&x| int(x)).collect()
}

fn zero(k: usize) -> Point {
    vec![BigRational::zero(); k]
}

/// Shoelace centroid of a convex polygon, vertices sorted by angle around
/// their mean.
fn shoelace_centroid(vs: &[Point]) -> Point {
    let n = vs.len();
    let cx: f64 = vs.iter().map(|v| f(&v[0])).sum::<f64>() / n as f64;
    let cy: f64 = vs.iter().map(|v| f(&v[1])).sum::<f64>() / n as f64;
    let mut sorted = vs.to_vec();
    sorted.sort_by(|a, b| {
        let ta = (f(&a[1]) - cy).atan2(f(&a[0]) - cx);
        let tb = (f(&b[1]) - cy).atan2(f(&b[0]) - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let mut area = BigRational::zero();
    let (mut x, mut y) = (BigRational::zero(), BigRational::zero());
    for i in 0..n {
        let (p, q) = (&sorted[i], &sorted[(i + 1) % n]);
        let cross = &p[0] * &q[1] - &q[0] * &p[1];
        x += (&p[0] + &q[0]) * &cross;
        y += (&p[1] + &q[1]) * &cross;
        area += cross;
    }
    let six_a = area * int(3);
    vec![x / &six_a, y / &six_a]
}

fn f(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// `0 ∈ conv(points)` in the plane by Carathéodory: some point, segment or
/// triangle of the generators contains the origin.
fn origin_in_hull_2d(ps: &[Point]) -> bool {
    let cross = |a: &Point, b: &Point| &a[0] * &b[1] - &a[1] * &b[0];
    let z = zero(2);
    let on_segment = |a: &Point, b: &Point| {
        cross(a, b).is_zero() && dot(a, b) <= BigRational::zero()
    };
    for i in 0..ps.len() {
        if ps[i] == z {
            return true;
        }
        for j in i + 1..ps.len() {
            if on_segment(&ps[i], &ps[j]) {
                return true;
            }
            for l in j + 1..ps.len() {
                let (a, b, c) = (&ps[i], &ps[j], &ps[l]);
                let s = [cross(a, b), cross(b, c), cross(c, a)];
                let all_nonneg = s.iter().all(|x| !x.is_negative());
                let all_nonpos = s.iter().all(|x| !x.is_positive());
                let area = cross(&sub(b, a), &sub(c, a));
                if !area.is_zero() && (all_nonneg || all_nonpos) {
                    return true;
                }
            }
        }
    }
    false
}

fn sub(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[test]
fn normalize_examples() {
    for n in 1..=4 {
        let (p, w) = standard_simplex(n).unwrap().normalize();
        assert_eq!(w, vec![rat(-1, n as i64 + 1); n]);
        assert!(p.is_normalized());
    }
    let sq = DelzantPolytope::from_ints(2, &[&[-2, -2], &[2, -2], &[2, 2], &[-2, 2]]).unwrap();
    assert_eq!(sq.normalize().1, zero(2));
    let (seg, w) = DelzantPolytope::from_ints(1, &[&[0], &[1]]).unwrap().normalize();
    assert_eq!(w, vec![rat(-1, 2)]);
    let mut ends: Vec<Point> = seg.vertices().to_vec();
    ends.sort();
    assert_eq!(ends, vec![vec![rat(-1, 2)], vec![rat(1, 2)]]);
}

#[test]
fn hull_structure() {
    let cube: Vec<Point> = (0..8).map(|m| pt(&[m & 1, (m >> 1) & 1, (m >> 2) & 1])).collect();
    let c = DelzantPolytope::new(3, cube).unwrap();
    assert_eq!(c.facets().len(), 6);
    assert_eq!(c.edges().len(), 12);
    assert_eq!(c.centroid(), vec![rat(1, 2); 3]);
    assert!(c.delzant_verify().is_ok());
    let hyper: Vec<Point> = (0..16).map(|m| pt(&[m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1])).collect();
    let h = DelzantPolytope::new(4, hyper).unwrap();
    assert_eq!((h.facets().len(), h.edges().len()), (8, 32));
    assert_eq!(h.centroid(), vec![rat(1, 2); 4]);

    let err = DelzantPolytope::from_ints(2, &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]).unwrap_err();
    assert!(matches!(err, ToricError::NotExtreme(_)));
    let err = DelzantPolytope::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap_err();
    assert!(matches!(err, ToricError::Degenerate(_)));
    assert!(matches!(
        DelzantPolytope::new(5, vec![zero(5)]),
        Err(ToricError::Dimension(5))
    ));
}

#[test]
fn centroid_agrees_across_triangulations_and_with_shoelace() {
    let polys: Vec<Vec<Point>> = vec![
        vec![pt(&[0, 0]), pt(&[3, 0]), pt(&[4, 2]), pt(&[1, 5]), pt(&[-1, 2])],
        vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 1])],
        vec![pt(&[-3, -1]), pt(&[2, -2]), pt(&[5, 1]), pt(&[4, 4]), pt(&[0, 3]), pt(&[-2, 2])],
    ];
    for vs in polys {
        let p = DelzantPolytope::new(2, vs.clone()).unwrap();
        let a = p.hull().centroid(Apex::First);
        assert_eq!(a, p.hull().centroid(Apex::Last));
        assert_eq!(a, shoelace_centroid(&vs));
    }
    // Truncated cube: both apex choices give the same exact point.
    let mut vs: Vec<Point> = (1..8).map(|m| pt(&[2 * (m & 1), 2 * ((m >> 1) & 1), 2 * ((m >> 2) & 1)])).collect();
    vs.extend([pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])]);
    let p = DelzantPolytope::new(3, vs).unwrap();
    assert_eq!(p.hull().centroid(Apex::First), p.hull().centroid(Apex::Last));
    assert_eq!(p.hull().volume_weight(Apex::First), int(6 * 8 - 1));
}

#[test]
fn delzant_examples() {
    for n in 1..=4 {
        assert!(standard_simplex(n).unwrap().delzant_verify().is_ok());
    }
    assert!(s2_x_s2().unwrap().polytope.delzant_verify().is_ok());
    assert!(blowup_cp2().unwrap().polytope.delzant_verify().is_ok());
    let t = DelzantPolytope::from_ints(2, &[&[0, 0], &[2, 0], &[0, 1]]).unwrap();
    match t.delzant_verify() {
        Err(ToricError::NotDelzant(fails)) => {
            assert_eq!(fails.len(), 1);
            assert_eq!(fails[0].vertex, pt(&[0, 1]));
            assert_eq!(fails[0].determinant.as_ref().map(|d| d.abs()), Some(int(2)));
            let mut e = fails[0].edges.clone();
            e.sort();
            assert_eq!(e, vec![pt(&[0, -1]), pt(&[2, -1])]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn special_points() {
    let m = cpn(2).unwrap();
    let s = m.special_point().unwrap();
    assert_eq!(s.point, zero(2));
    assert_eq!(s.per_vertex.len(), 3);
    assert!(s.per_vertex.iter().all(|p| *p == zero(2)));
    // Hand evaluation at (−1/3, −1/3) with v₁ = (1, 0), v₂ = (0, 1).
    let x = vec![rat(-1, 3), rat(-1, 3)];
    assert_eq!(vec![&x[0] + rat(1, 3), &x[1] + rat(1, 3)], zero(2));

    for n in 1..=4 {
        assert_eq!(cpn(n).unwrap().special_point().unwrap().point, zero(n));
    }
    assert_eq!(s2_x_s2().unwrap().special_point().unwrap().point, zero(2));

    let b = blowup_cp2().unwrap();
    let s = b.special_point().unwrap();
    assert_eq!(s.per_vertex.len(), 4);
    assert_eq!(s.point, s.vertex_average);
    assert!(b.polytope.contains_interior(&s.point));
    assert_ne!(s.point, zero(2));
    // In the un-normalized corner-chopped coordinates the point is the origin.
    let raw = DelzantPolytope::new(
        2,
        vec![vec![int(0), rat(-1, 3)], vec![rat(2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)], vec![rat(-1, 3), int(0)]],
    )
    .unwrap();
    let shift: Point = raw.centroid().iter().map(|x| -x).collect();
    assert_eq!(s.point, shift);
}

#[test]
fn special_point_errors() {
    let p = cpn(2).unwrap().polytope;
    let wrong = MomentData::new(p.clone(), Some(rat(1, 2)), true).unwrap();
    assert!(matches!(wrong.special_point(), Err(ToricError::NotMonotone(v)) if v.len() == 3));
    let none = MomentData::new(p, None, true).unwrap();
    assert!(matches!(none.special_point(), Err(ToricError::MissingKappa)));
    let raw = MomentData::new(standard_simplex(2).unwrap(), Some(rat(1, 3)), true).unwrap();
    assert!(matches!(raw.special_point(), Err(ToricError::NotNormalized(_))));
    let (t, _) = DelzantPolytope::from_ints(2, &[&[0, 0], &[2, 0], &[0, 1]]).unwrap().normalize();
    let bad = MomentData::new(t, Some(rat(1, 3)), false).unwrap();
    assert!(matches!(bad.special_point(), Err(ToricError::NotDelzant(_))));
}

#[test]
fn ball_certificates_match_origin_membership() {
    for n in 1..=4usize {
        let m = cpn(n).unwrap();
        let threshold = rat(n as i64, n as i64 + 1);
        for num in 1..=24i64 {
            let r = rat(num, 24);
            let y = ball_subpolytope(n, &r).unwrap();
            // Barycentric oracle: 0 = w + r Σ λᵢ eᵢ needs λᵢ = 1/((n+1) r).
            let lambda_sum = rat(n as i64, n as i64 + 1) / &r;
            let contains = lambda_sum <= BigRational::one();
            assert_eq!(y.contains(&zero(n)), contains);
            let cert = m.stable_displaceability_certificate(&y).unwrap();
            assert_eq!(cert.is_some(), r < threshold, "n = {n}, r = {r}");
            if let Some(f) = cert {
                assert!(y.generators().iter().all(|g| dot(&f, g).is_positive()));
            }
        }
        // At the threshold the origin sits on the facet Σρᵢ = r.
        let y = ball_subpolytope(n, &threshold).unwrap();
        assert!(y.contains(&zero(n)));
        assert!(m.stable_displaceability_certificate(&y).unwrap().is_none());
        assert_eq!(
            ball_subpolytope(n, &BigRational::one()).unwrap().generators(),
            m.polytope.vertices()
        );
    }
    assert!(ball_subpolytope(2, &int(2)).is_err());
}

#[test]
fn certificate_examples() {
    let m = cpn(2).unwrap();
    let p = vec![rat(1, 5), rat(-1, 7)];
    let y = ConvexBody::new(2, vec![p.clone()]).unwrap();
    assert_eq!(m.stable_displaceability_certificate(&y).unwrap(), Some(p));
    let around = ConvexBody::new(2, vec![vec![rat(-1, 4), rat(-1, 4)], vec![rat(1, 2), rat(-1, 4)], vec![rat(-1, 4), rat(1, 2)]]).unwrap();
    assert!(m.stable_displaceability_certificate(&around).unwrap().is_none());
    // Needs the exact simplex: the generator mean is not a separator.
    let skew = ConvexBody::new(2, vec![vec![rat(3, 10), rat(-3, 10)], vec![rat(-3, 10), rat(31, 100)]]).unwrap();
    let mean = vec![int(0), rat(1, 200)];
    assert!(!dot(&mean, &skew.generators()[0]).is_positive());
    let f = m.stable_displaceability_certificate(&skew).unwrap().unwrap();
    assert!(skew.generators().iter().all(|g| dot(&f, g).is_positive()));
    let not_comp = MomentData::new(m.polytope.clone(), m.kappa.clone(), false).unwrap();
    assert!(matches!(not_comp.stable_displaceability_certificate(&y), Err(ToricError::NotCompressible)));
    let outside = ConvexBody::new(2, vec![pt(&[5, 5])]).unwrap();
    assert!(matches!(m.stable_displaceability_certificate(&outside), Err(ToricError::Outside(_))));
}

#[test]
fn fiber_statuses() {
    let m = cpn(2).unwrap();
    assert_eq!(m.fiber_status(&zero(2)).unwrap(), FiberStatus::SuperheavySpecial);
    let p = vec![rat(1, 6), rat(0, 1)];
    match m.fiber_status(&p).unwrap() {
        FiberStatus::StablyDisplaceable(f) => assert!(dot(&f, &p).is_positive()),
        other => panic!("{other:?}"),
    }
    assert!(matches!(m.fiber_status(&pt(&[1, 1])), Err(ToricError::Outside(_))));

    let b = blowup_cp2().unwrap();
    let spec = b.special_point().unwrap().point;
    assert_eq!(b.fiber_status(&spec).unwrap(), FiberStatus::SuperheavySpecial);
    assert_eq!(b.fiber_status(&zero(2)).unwrap(), FiberStatus::Unknown);
    let forced = MomentData::new(b.polytope.clone(), b.kappa.clone(), true).unwrap();
    assert!(matches!(forced.fiber_status(&zero(2)), Err(ToricError::CompressibleOffCenter(_))));
    let s = s2_x_s2().unwrap();
    assert!(matches!(s.fiber_status(&vec![rat(1, 4), rat(1, 4)]).unwrap(), FiberStatus::StablyDisplaceable(_)));
}

fn small_points(k: usize, n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, k), 1..=n)
        .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(|x| rat(x, 2)).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn certificates_are_sound_and_complete_in_the_plane(ps in small_points(2, 6)) {
        let y = ConvexBody::new(2, ps.clone()).unwrap();
        let cert = y.separating_functional();
        prop_assert_eq!(cert.is_none(), origin_in_hull_2d(&ps));
        if let Some(f) = cert {
            prop_assert!(ps.iter().all(|g| dot(&f, g).is_positive()));
        }
        prop_assert_eq!(y.contains(&zero(2)), cert_none(&y));
    }

    #[test]
    fn certificates_are_sound_in_higher_dimensions(ps in small_points(4, 7)) {
        let y = ConvexBody::new(4, ps.clone()).unwrap();
        match y.separating_functional() {
            Some(f) => prop_assert!(ps.iter().all(|g| dot(&f, g).is_positive())),
            None => prop_assert!(y.contains(&zero(4))),
        }
    }

    #[test]
    fn normalize_is_idempotent_and_covariant(ps in small_points(2, 7), sx in -5i64..5, sy in -5i64..5) {
        let Ok(p) = DelzantPolytope::new(2, hull_vertices(&ps)) else { return Ok(()) };
        let (n1, w1) = p.normalize();
        let (n2, w2) = n1.normalize();
        prop_assert_eq!(&w2, &zero(2));
        prop_assert_eq!(n1.vertices(), n2.vertices());
        let shift = vec![rat(sx, 3), rat(sy, 3)];
        let moved = p.translated(&shift);
        let c = moved.centroid();
        prop_assert_eq!(c, p.centroid().iter().zip(&shift).map(|(a, b)| a + b).collect::<Vec<_>>());
        prop_assert_eq!(p.centroid(), shoelace_centroid(p.vertices()));
        prop_assert!(p.contains_interior(&p.centroid()));
        let _ = w1;
    }
}

fn cert_none(y: &ConvexBody) -> bool {
    y.separating_functional().is_none()
}

/// Extreme points of a planar point set, by brute force.
fn hull_vertices(ps: &[Point]) -> Vec<Point> {
    let mut uniq: Vec<Point> = Vec::new();
    for p in ps {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    uniq.iter()
        .filter(|p| {
            let others: Vec<Point> = uniq.iter().filter(|q| q != p).map(|q| sub(q, p)).collect();
            !origin_in_hull_2d(&others) || others.is_empty()
        })
        .cloned()
        .collect()
}
