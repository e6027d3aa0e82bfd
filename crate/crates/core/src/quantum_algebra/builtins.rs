//! Built-in structure-constant tables.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::{BasisClass, GradedBasis, QHElement, QuantumAlgebra};
use crate::novikov::{int, rat, BaseField, NovikovScalar, PeriodGroup};

fn class(label: &str, degree: u32) -> BasisClass {
    BasisClass {
        label: label.to_string(),
        degree,
    }
}

fn cpn_label(i: u32, n: u32) -> String {
    match i {
        0 => "M".to_string(),
        _ if i == n => "p".to_string(),
        1 => "A".to_string(),
        _ => format!("A^{i}"),
    }
}

/// `QH(ℂPⁿ)` with `[ω] = κ·c₁`: `Aⁱ ∗ Aʲ = A^{i+j}` for `i + j ≤ n`, and a
/// wrap-around factor `s^{−κ(n+1)} q^{−(n+1)}` otherwise.
pub fn cpn_with_kappa(n: u32, field: BaseField, kappa: BigRational) -> QuantumAlgebra {
    assert!(n >= 1, "n must be positive");
    let classes: Vec<BasisClass> = (0..=n)
        .map(|i| class(&cpn_label(i, n), 2 * (n - i)))
        .collect();
    let basis = GradedBasis::new(classes, 2 * n).expect("valid basis");
    let period = &kappa * int(n as i64 + 1);
    let wrap = NovikovScalar::s_pow(field, &-period.clone());
    let mut entries = BTreeMap::new();
    for i in 0..=n {
        for j in 0..=n {
            let v = if i + j <= n {
                QHElement::basis(field, (i + j) as usize)
            } else {
                QHElement::term(wrap.clone(), (i + j - n - 1) as usize, -(n as i64 + 1))
            };
            entries.insert((i as usize, j as usize), v);
        }
    }
    QuantumAlgebra::new(field, basis, PeriodGroup::new(period), Some(kappa), entries)
        .expect("valid table")
}

/// `QH(ℂPⁿ)` for the monotone normalization `κ = 1`, `Γ = (n+1)ℤ`.
pub fn cpn(n: u32, field: BaseField) -> QuantumAlgebra {
    cpn_with_kappa(n, field, BigRational::one())
}

/// `QH(S²)` over `Qmodel` with `κ = 1/2`, `Γ = ℤ`.
pub fn s2() -> QuantumAlgebra {
    cpn_with_kappa(1, BaseField::Qmodel, rat(1, 2))
}

/// Quadric `S² × S²` over `Qmodel`, `κ = 1/2`, `Γ = ℤ`, basis `[M], A, B, p`.
/// With `w = s^{2κ} q²`: `A∗B = p`, `A∗A = B∗B = w⁻¹[M]`, `A∗p = w⁻¹B`,
/// `B∗p = w⁻¹A`, `p∗p = w⁻²[M]`.
pub fn quadric() -> QuantumAlgebra {
    let f = BaseField::Qmodel;
    let kappa = rat(1, 2);
    let basis = GradedBasis::new(
        vec![class("M", 4), class("A", 2), class("B", 2), class("p", 0)],
        4,
    )
    .expect("valid basis");
    let winv = |power: i64, idx: usize| {
        let e = &kappa * int(-2 * power);
        QHElement::term(NovikovScalar::s_pow(f, &e), idx, -2 * power)
    };
    let (m, a, b, p) = (0, 1, 2, 3);
    let mut e = BTreeMap::new();
    for i in 0..4 {
        e.insert((m, i), QHElement::basis(f, i));
    }
    e.insert((a, a), winv(1, m));
    e.insert((b, b), winv(1, m));
    e.insert((a, b), QHElement::basis(f, p));
    e.insert((a, p), winv(1, b));
    e.insert((b, p), winv(1, a));
    e.insert((p, p), winv(2, m));
    QuantumAlgebra::new(f, basis, PeriodGroup::new(int(1)), Some(kappa), e).expect("valid table")
}

/// Classical (undeformed) homology ring of `T²` over `F2`, trivial `Γ`.
pub fn torus_classical() -> QuantumAlgebra {
    let f = BaseField::F2;
    let basis = GradedBasis::new(
        vec![class("T", 2), class("a", 1), class("b", 1), class("p", 0)],
        2,
    )
    .expect("valid basis");
    let mut e = BTreeMap::new();
    for i in 0..4 {
        e.insert((0, i), QHElement::basis(f, i));
    }
    e.insert((1, 2), QHElement::basis(f, 3));
    QuantumAlgebra::new(f, basis, PeriodGroup::trivial(), None, e).expect("valid table")
}

/// `ℚ`-span of `1, x` with `x ∗ x = 0`: classical homology of `S²`.
pub fn toy_dual_numbers() -> QuantumAlgebra {
    let f = BaseField::Qmodel;
    let basis = GradedBasis::new(vec![class("1", 2), class("x", 0)], 2).expect("valid basis");
    let mut e = BTreeMap::new();
    e.insert((0, 0), QHElement::basis(f, 0));
    e.insert((0, 1), QHElement::basis(f, 1));
    e.insert((1, 1), QHElement::zero(f));
    QuantumAlgebra::new(f, basis, PeriodGroup::trivial(), None, e).expect("valid table")
}
