use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidkit::symplectic_index::random::{random_loop, random_path, random_symmetric, random_symplectic};
use rigidkit::symplectic_index::{
    complex_structure, cz_floer, cz_matr, ind, ind_doubled, leray_verify, maslov_loop, qm_defect, rho_winding,
    rs_index, sample_defect, standard_form, IndexError, LagrangianFrame, LagrangianPath, MatrixPath, Segment,
    SymPath, SymplecticMatrix, Tolerances,
};
use std::f64::consts::{FRAC_PI_2, PI};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent value for `Sp(2)`: lift the angle of `A(τ)·e₂` and count
/// how many times the line passes the vertical, with the half-rule at the
/// start. Returns twice the index.
fn angle_oracle(p: &SymPath) -> i64 {
    let n = 20_000;
    let mut theta = FRAC_PI_2;
    let mut prev = (0.0f64, 1.0f64);
    for i in 1..=n {
        let a = p.at(i as f64 / n as f64);
        let v = (a[(0, 1)], a[(1, 1)]);
        theta += (prev.0 * v.1 - prev.1 * v.0).atan2(prev.0 * v.0 + prev.1 * v.1);
        prev = v;
    }
    2 * ((theta - FRAC_PI_2) / PI).floor() as i64 + 1
}

fn random_lagrangian(r: &mut ChaCha8Rng, k: usize) -> LagrangianFrame {
    let s = random_symplectic(r, k, 0.8);
    LagrangianFrame::q_plane(k).transformed(&s)
}

#[test]
fn rotation_loops() {
    for l in 1..=5u32 {
        let p = MatrixPath::rotation(1, l as f64).to_path();
        let m = maslov_loop(&p, &tol()).unwrap();
        assert_eq!(m.value, 2 * l as i64);
        assert!(m.residual < 1e-6);
        let cz = cz_matr(&p, &tol()).unwrap();
        assert_eq!(cz.halves, 4 * l as i64);
        assert!(cz.residual < 1e-6);
    }
    // Rotating every coordinate plane once gives 2 per plane.
    assert_eq!(maslov_loop(&MatrixPath::rotation(3, 1.0).to_path(), &tol()).unwrap().value, 6);
    assert_eq!(cz_floer(&MatrixPath::rotation(1, 1.0).to_path(), 1, &tol()).unwrap(), -2);
}

#[test]
fn constant_paths() {
    for k in 1..=3 {
        let c = MatrixPath::constant(k).to_path();
        let i = ind(&c, &LagrangianFrame::q_plane(k), &tol()).unwrap();
        assert_eq!(i.halves, k as i64);
        assert!(i.regularization.is_some());
        let cz = cz_matr(&c, &tol()).unwrap();
        assert_eq!(cz.halves, 2 * k as i64);
        assert!(i.value().abs() <= k as f64 && cz.value().abs() <= k as f64);
        assert_eq!(maslov_loop(&c, &tol()).unwrap().value, 0);
        assert_eq!(cz_floer(&c, k, &tol()).unwrap(), 0);
    }
}

#[test]
fn transverse_constant_path_has_index_zero() {
    let frame = LagrangianFrame::q_plane(2);
    let path = LagrangianPath::Sampled(
        rigidkit::symplectic_index::SampledPath::fit(&vec![frame.clone(); 64]).unwrap(),
    );
    let v = rs_index(&path, &LagrangianFrame::p_plane(2), &tol()).unwrap();
    assert_eq!(v.halves, 0);
    assert!(v.crossings.is_empty());
}

#[test]
fn half_turn_of_a_line() {
    // ω(u, J u) = |u|² > 0, so each endpoint crossing contributes +½.
    let p = MatrixPath::rotation(1, 0.5);
    let v = LagrangianFrame::q_plane(1);
    let r = rs_index(&LagrangianPath::induced(&p, &v), &v, &tol()).unwrap();
    assert_eq!(r.halves, 2);
    assert_eq!(r.crossings.len(), 2);
    assert!(r.crossings.iter().all(|c| c.at_endpoint && c.signature == 1 && c.kernel_dimension == 1));
    // Quarter turn: one endpoint crossing at the start.
    let q = ind(&MatrixPath::rotation(1, 0.25).to_path(), &v, &tol()).unwrap();
    assert_eq!(q.halves, 1);
    // Clockwise half turn.
    let cw = MatrixPath::single(-DMatrix::identity(2, 2), PI).unwrap();
    assert_eq!(ind(&cw.to_path(), &v, &tol()).unwrap().halves, -2);
}

#[test]
fn ind_matches_angle_oracle_in_sp2() {
    let mut r = rng(11);
    let v = LagrangianFrame::p_plane(1);
    for _ in 0..100 {
        let p = random_path(&mut r, 1, 4, 1.5).to_path();
        let got = ind(&p, &v, &tol()).unwrap();
        assert_eq!(got.halves, angle_oracle(&p));
        assert!(got.residual < 1e-6);
    }
}

#[test]
fn sampled_paths_agree_with_exact_paths() {
    let mut r = rng(12);
    for k in 1..=2 {
        for _ in 0..10 {
            let p = random_path(&mut r, k, 2, 1.0);
            let v = random_lagrangian(&mut r, k);
            let start = random_lagrangian(&mut r, k);
            let exact = rs_index(&LagrangianPath::induced(&p, &start), &v, &tol()).unwrap();
            let sp = p.to_path();
            let samples: Vec<_> = (0..=256).map(|i| start.transformed(&sp.at(i as f64 / 256.0))).collect();
            let fitted = rs_index(&LagrangianPath::sampled(&samples).unwrap(), &v, &tol()).unwrap();
            assert_eq!(fitted.halves, exact.halves);
        }
    }
}

#[test]
fn concatenation_additivity() {
    let mut r = rng(13);
    for k in 1..=2 {
        for _ in 0..20 {
            let a = random_path(&mut r, k, 2, 1.0);
            let b = random_path(&mut r, k, 2, 1.0);
            let v = random_lagrangian(&mut r, k);
            let ab = a.concat(&b).unwrap();
            let a1 = a.endpoint();
            let whole = ind(&ab.to_path(), &v, &tol()).unwrap();
            let first = ind(&a.to_path(), &v, &tol()).unwrap();
            let second = rs_index(&LagrangianPath::induced(&b, &v.transformed(&a1)), &v, &tol()).unwrap();
            assert_eq!(whole.halves, first.halves + second.halves);

            let cz_whole = cz_matr(&ab.to_path(), &tol()).unwrap();
            let cz_first = cz_matr(&a.to_path(), &tol()).unwrap();
            let cz_second = cz_matr(&SymPath::shifted(b.to_path(), a1), &tol()).unwrap();
            assert_eq!(cz_whole.halves, cz_first.halves + cz_second.halves);
        }
    }
}

#[test]
fn reparametrization_invariance() {
    let mut r = rng(14);
    for k in 1..=2 {
        for _ in 0..20 {
            let p = random_path(&mut r, k, 3, 1.0);
            let v = random_lagrangian(&mut r, k);
            // Same generator sequence, new durations, same endpoints.
            let stretched = MatrixPath::new(
                k,
                p.segments()
                    .iter()
                    .map(|s| {
                        let f = r.gen_range(0.3..3.0);
                        Segment {
                            generator: &s.generator / f,
                            duration: s.duration * f,
                        }
                    })
                    .collect(),
            )
            .unwrap();
            // Each segment split in two.
            let split = MatrixPath::new(
                k,
                p.segments()
                    .iter()
                    .flat_map(|s| {
                        let c = r.gen_range(0.2..0.8);
                        [
                            Segment {
                                generator: s.generator.clone(),
                                duration: c * s.duration,
                            },
                            Segment {
                                generator: s.generator.clone(),
                                duration: (1.0 - c) * s.duration,
                            },
                        ]
                    })
                    .collect(),
            )
            .unwrap();
            let base_ind = ind(&p.to_path(), &v, &tol()).unwrap().halves;
            let base_cz = cz_matr(&p.to_path(), &tol()).unwrap().halves;
            for q in [&stretched, &split] {
                assert_eq!(ind(&q.to_path(), &v, &tol()).unwrap().halves, base_ind);
                assert_eq!(cz_matr(&q.to_path(), &tol()).unwrap().halves, base_cz);
            }
        }
    }
}

#[test]
fn naturality_under_conjugation() {
    let mut r = rng(15);
    for trial in 0..50 {
        let k = 1 + trial % 2;
        let p = random_path(&mut r, k, 3, 1.0).to_path();
        let v = random_lagrangian(&mut r, k);
        let b = random_symplectic(&mut r, k, 0.7);
        let lhs = ind(&SymPath::conjugate(&b, p.clone()).unwrap(), &v.transformed(&b), &tol()).unwrap();
        let rhs = ind(&p, &v, &tol()).unwrap();
        assert_eq!(lhs.halves, rhs.halves);
        assert!((lhs.estimate - rhs.estimate).abs() < 1e-6);
    }
}

#[test]
fn cz_equals_ind_in_doubled_dimension() {
    let mut r = rng(16);
    for trial in 0..50 {
        let k = 1 + trial % 2;
        let p = random_path(&mut r, k, 3, 1.0).to_path();
        let a = cz_matr(&p, &tol()).unwrap();
        let b = ind_doubled(&p, &tol()).unwrap();
        assert_eq!(a.halves, b.halves);
        assert!((a.estimate - b.estimate).abs() < 1e-6);
    }
}

#[test]
fn maslov_of_products_and_trivialization_change() {
    let mut r = rng(17);
    for trial in 0..20 {
        let k = 1 + trial % 2;
        let (ta, tb) = (r.gen_range(1..=2u32), r.gen_range(1..=2u32));
        let a = random_loop(&mut r, k, ta, 0.6).to_path();
        let b = random_loop(&mut r, k, tb, 0.6).to_path();
        let ma = maslov_loop(&a, &tol()).unwrap();
        let mb = maslov_loop(&b, &tol()).unwrap();
        assert_eq!(ma.value, 2 * (ta as usize * k) as i64);
        assert!((ma.winding_route - ma.value as f64).abs() < 1e-6);
        let mab = maslov_loop(&SymPath::product(a.clone(), b.clone()), &tol()).unwrap();
        assert_eq!(mab.value, ma.value + mb.value);
        assert_eq!(qm_defect(&a, &b, &tol()).unwrap(), 0.0);

        // CZ(B·A) = CZ(A) + Maslov(B) for a loop B.
        let p = random_path(&mut r, k, 2, 1.0).to_path();
        let moved = cz_matr(&SymPath::product(b.clone(), p.clone()), &tol()).unwrap();
        let base = cz_matr(&p, &tol()).unwrap();
        assert_eq!(moved.halves, base.halves + 2 * mb.value);
    }
    // A loop of Maslov index 2 lowers the Floer-convention index by 2.
    let loop2 = random_loop(&mut r, 1, 1, 0.6).to_path();
    let p = random_path(&mut r, 1, 2, 1.0).to_path();
    let before = cz_floer(&p, 1, &tol()).unwrap();
    let after = cz_floer(&SymPath::product(loop2, p), 1, &tol()).unwrap();
    assert_eq!(after - before, -4);
}

#[test]
fn maslov_rejects_open_paths() {
    let p = MatrixPath::rotation(1, 0.5).to_path();
    assert!(matches!(maslov_loop(&p, &tol()), Err(IndexError::NotClosed(_))));
    assert!((rho_winding(&MatrixPath::rotation(2, 1.0).to_path()) - 4.0).abs() < 1e-9);
}

fn transversal_pairs(r: &mut ChaCha8Rng, k: usize, n: usize) -> usize {
    let mut ok = 0;
    let mut tried = 0;
    while ok < n {
        tried += 1;
        assert!(tried < 20 * n, "too few transversal pairs");
        let a = random_path(r, k, 3, 1.0).to_path();
        let b = random_path(r, k, 3, 1.0).to_path();
        match leray_verify(&a, &b, &tol()) {
            Ok(rep) => {
                assert!(rep.holds(), "{} != {}", rep.lhs_halves, rep.rhs_halves);
                assert!(rep.residual < 1e-6, "residual {}", rep.residual);
                ok += 1;
            }
            Err(IndexError::Transversality(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    tried
}

#[test]
fn leray_formula_sp2_and_sp4() {
    let mut r = rng(18);
    transversal_pairs(&mut r, 1, 100);
    transversal_pairs(&mut r, 2, 100);
}

#[test]
fn leray_symmetric_form_for_rotations() {
    // When B₁ has E = H the symmetric correction term coincides.
    let mut r = rng(19);
    for _ in 0..20 {
        let a = MatrixPath::rotation(1, r.gen_range(0.05..0.95)).to_path();
        let b = MatrixPath::rotation(1, r.gen_range(0.05..0.95)).to_path();
        if let Ok(rep) = leray_verify(&a, &b, &tol()) {
            assert!(rep.holds());
            assert_eq!(rep.signature_symmetric, Some(rep.signature));
        }
    }
}

#[test]
fn leray_names_the_failed_condition() {
    // exp(t·J·diag(1, 0)) is a shear fixing the p-axis.
    let shear = MatrixPath::single(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]), 1.0)
        .unwrap()
        .to_path();
    let rot = MatrixPath::rotation(1, 0.2).to_path();
    match leray_verify(&shear, &rot, &tol()) {
        Err(IndexError::Transversality(msg)) => assert!(msg.contains("A₁L ∩ L = 0"), "{msg}"),
        other => panic!("{other:?}"),
    }
    match leray_verify(&rot, &shear, &tol()) {
        Err(IndexError::Transversality(msg)) => assert!(msg.contains("B₁L ∩ L = 0"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let back = MatrixPath::single(-DMatrix::identity(2, 2), 0.4 * PI).unwrap().to_path();
    match leray_verify(&rot, &back, &tol()) {
        Err(IndexError::Transversality(msg)) => assert!(msg.contains("A₁B₁L ∩ L = 0"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn defect_against_constant_path_is_the_regularization_offset() {
    let mut r = rng(20);
    for k in 1..=2 {
        let a = random_path(&mut r, k, 3, 1.0).to_path();
        let d = qm_defect(&a, &MatrixPath::constant(k).to_path(), &tol()).unwrap();
        assert_eq!(d, k as f64);
    }
}

#[test]
fn sampled_defect_is_bounded() {
    let s = sample_defect(&mut rng(21), &[1, 2], 40, &tol());
    assert_eq!(s.failures, 0);
    assert_eq!(s.trials, 80);
    assert!(s.max.is_finite() && s.max <= 4.0, "C_emp = {}", s.max);
}

#[test]
fn input_validation() {
    let t = tol();
    let j = complex_structure(2);
    assert!(SymplecticMatrix::new(j.clone(), t.symplectic).is_ok());
    assert!(matches!(
        SymplecticMatrix::new(&j * 2.0, t.symplectic),
        Err(IndexError::NotSymplectic(_))
    ));
    assert!(matches!(
        SymplecticMatrix::new(DMatrix::identity(3, 3), t.symplectic),
        Err(IndexError::Dimension(_))
    ));
    let mut x = DMatrix::zeros(4, 2);
    x[(0, 0)] = 1.0;
    x[(2, 1)] = 1.0;
    assert!(matches!(LagrangianFrame::new(x, t.lagrangian), Err(IndexError::NotLagrangian(_))));
    assert!(LagrangianFrame::new(LagrangianFrame::q_plane(2).columns().clone(), t.lagrangian).is_ok());
    assert!(MatrixPath::single(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]), 1.0).is_err());
    assert!(MatrixPath::single(DMatrix::identity(2, 2), -1.0).is_err());
    // ω(u, Ju) = |u|².
    let u = nalgebra::DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5]);
    assert!(((u.transpose() * standard_form(2) * (&j * &u))[(0, 0)] - u.norm_squared()).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn small_perturbations_move_indices_by_at_most_2k(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        let p = random_path(&mut r, k, 2, 1.0);
        let noisy = MatrixPath::new(
            k,
            p.segments()
                .iter()
                .map(|s| Segment {
                    generator: &s.generator + random_symmetric(&mut r, 2 * k, 1e-3),
                    duration: s.duration,
                })
                .collect(),
        )
        .unwrap();
        let v = LagrangianFrame::q_plane(k);
        let a = ind(&p.to_path(), &v, &tol()).unwrap();
        let b = ind(&noisy.to_path(), &v, &tol()).unwrap();
        prop_assert!((a.halves - b.halves).abs() <= 4 * k as i64);
        let a = cz_matr(&p.to_path(), &tol()).unwrap();
        let b = cz_matr(&noisy.to_path(), &tol()).unwrap();
        prop_assert!((a.halves - b.halves).abs() <= 4 * k as i64);
    }

    #[test]
    fn indices_are_half_integers_with_small_residuals(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        let p = random_path(&mut r, k, 3, 1.2).to_path();
        let v = random_lagrangian(&mut r, k);
        for val in [ind(&p, &v, &tol()).unwrap(), cz_matr(&p, &tol()).unwrap()] {
            prop_assert!(val.residual < 1e-6);
            prop_assert!((val.estimate * 2.0 - val.halves as f64).abs() < 2e-6);
        }
    }
}
