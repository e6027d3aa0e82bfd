use proptest::prelude::*;
use rigidkit::novikov::{int, rat, BaseField, Exp, ExtRational, NovikovScalar, Poly};

fn poly_strategy(field: BaseField) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-6i64..6, 1i64..4, -3i64..4), 0..4).prop_map(move |ts| {
        Poly::from_terms(
            field,
            ts.into_iter()
                .map(|(n, d, c)| (Exp::new(n, d), int(c))),
        )
    })
}

fn scalar_strategy(field: BaseField) -> impl Strategy<Value = NovikovScalar> {
    (poly_strategy(field), poly_strategy(field)).prop_map(move |(n, d)| {
        if d.is_zero() {
            NovikovScalar::from_poly(field, n)
        } else {
            NovikovScalar::from_fraction(field, n, d).unwrap()
        }
    })
}

fn any_field() -> impl Strategy<Value = BaseField> {
    prop_oneof![Just(BaseField::F2), Just(BaseField::Qmodel)]
}

/// Valuation read off the descending expansion, independent of the
/// numerator/denominator bookkeeping.
fn expansion_valuation(x: &NovikovScalar) -> ExtRational {
    match x.expand(1).first() {
        Some((e, _)) => ExtRational::Finite(e.clone()),
        None => ExtRational::NegInf,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(x in any_field().prop_flat_map(scalar_strategy)) {
        let back = NovikovScalar::from_text(x.field(), &x.to_text()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_axioms((a, b, c) in any_field().prop_flat_map(|f| (scalar_strategy(f), scalar_strategy(f), scalar_strategy(f)))) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            let q = a.checked_div(&b).unwrap();
            prop_assert_eq!(&q * &b, a.clone());
        }
    }

    #[test]
    fn valuation_laws((a, b) in any_field().prop_flat_map(|f| (scalar_strategy(f), scalar_strategy(f)))) {
        prop_assert_eq!(a.valuation(), expansion_valuation(&a));
        prop_assert_eq!((&a * &b).valuation(), a.valuation().add(&b.valuation()));
        let s = (&a + &b).valuation();
        let m = std::cmp::max(a.valuation(), b.valuation());
        prop_assert!(s <= m);
        if a.valuation() != b.valuation() {
            prop_assert_eq!(s, m);
        }
    }

    #[test]
    fn denominator_is_normalized(x in any_field().prop_flat_map(scalar_strategy)) {
        let d = x.denominator();
        prop_assert_eq!(d.top().unwrap().1.clone(), int(1));
        prop_assert_eq!(d.bottom().unwrap().0, Exp::new(0, 1));
    }
}

#[test]
fn expansion_reconstructs_polynomial_quotient() {
    let f = BaseField::Qmodel;
    // (s^2 + 1)/s^5 = s^-3 + s^-5
    let num = Poly::from_terms(f, [(Exp::new(2, 1), int(1)), (Exp::new(0, 1), int(1))]);
    let den = Poly::from_terms(f, [(Exp::new(5, 1), int(1))]);
    let x = NovikovScalar::from_fraction(f, num, den).unwrap();
    assert_eq!(x.expand(10), vec![(int(-3), int(1)), (int(-5), int(1))]);
    assert_eq!(x.valuation(), ExtRational::Finite(int(-3)));
    let y = NovikovScalar::s_pow(f, &rat(1, 2));
    assert_eq!(y.valuation(), ExtRational::Finite(rat(1, 2)));
}
