//! Novikov fields `K_Γ`, their valuation and the graded ring `Λ = K[q, q⁻¹]`.

pub mod linalg;
mod parse;
mod poly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use parse::{parse_rational, parse_scalar};
pub use poly::{Exp, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NovikovError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("base field mismatch: {0:?} vs {1:?}")]
    FieldMismatch(BaseField, BaseField),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent {0} does not fit the supported range")]
    ExponentRange(String),
}

/// Ground field of the Novikov field. `Qmodel` stands in for `ℂ` using exact
/// rational arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    F2,
    Qmodel,
}

impl BaseField {
    pub fn name(self) -> &'static str {
        match self {
            BaseField::F2 => "F2",
            BaseField::Qmodel => "Qmodel",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "F2" | "f2" => Some(BaseField::F2),
            "Qmodel" | "qmodel" | "Q" | "C" => Some(BaseField::Qmodel),
            _ => None,
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            BaseField::F2 => 2,
            BaseField::Qmodel => 0,
        }
    }
}

/// Value in `ℚ ∪ {−∞}`, ordered with `−∞` smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(BigRational),
}

impl ExtRational {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::NegInf => None,
            ExtRational::Finite(r) => Some(r),
        }
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtRational::NegInf)
    }

    pub fn add_rational(&self, r: &BigRational) -> ExtRational {
        match self {
            ExtRational::NegInf => ExtRational::NegInf,
            ExtRational::Finite(x) => ExtRational::Finite(x + r),
        }
    }

    pub fn add(&self, other: &ExtRational) -> ExtRational {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::NegInf,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::NegInf => f64::NEG_INFINITY,
            ExtRational::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::NegInf, ExtRational::NegInf) => Ordering::Equal,
            (ExtRational::NegInf, _) => Ordering::Less,
            (_, ExtRational::NegInf) => Ordering::Greater,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => write!(f, "-inf"),
            ExtRational::Finite(r) => write!(f, "{r}"),
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub(crate) fn exp_to_rational(e: Exp) -> BigRational {
    rat(*e.numer(), *e.denom())
}

pub(crate) fn rational_to_exp(r: &BigRational) -> Result<Exp, NovikovError> {
    let n = r.numer().to_i64();
    let d = r.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) if n.abs() < (1 << 40) && d < (1 << 40) => Ok(Exp::new(n, d)),
        _ => Err(NovikovError::ExponentRange(r.to_string())),
    }
}

/// Subgroup `gℤ ⊂ ℝ` with rational generator `g ≥ 0`; `g = 0` is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodGroup {
    generator: BigRational,
}

impl PeriodGroup {
    pub fn new(generator: BigRational) -> Self {
        PeriodGroup {
            generator: generator.abs(),
        }
    }

    pub fn trivial() -> Self {
        PeriodGroup::new(BigRational::zero())
    }

    pub fn generator(&self) -> &BigRational {
        &self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.generator.is_zero()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        if self.generator.is_zero() {
            x.is_zero()
        } else {
            (x / &self.generator).is_integer()
        }
    }

    /// `Γ₁ + Γ₂`, generated by the gcd of the two generators.
    pub fn sum(&self, other: &PeriodGroup) -> PeriodGroup {
        PeriodGroup::new(rational_gcd(&self.generator, &other.generator))
    }
}

pub fn group_sum(a: &PeriodGroup, b: &PeriodGroup) -> PeriodGroup {
    a.sum(b)
}

/// Gcd of two nonnegative rationals, so that `gcd·ℤ = aℤ + bℤ`.
pub fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    BigRational::new(n, d)
}

/// Element `p/q` of the Novikov field, stored in lowest terms with the
/// denominator's leading coefficient 1 and lowest exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NovikovScalar {
    field: BaseField,
    num: Poly,
    den: Poly,
}

impl NovikovScalar {
    pub fn zero(field: BaseField) -> Self {
        NovikovScalar {
            field,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one(field: BaseField) -> Self {
        Self::monomial(field, BigRational::one(), Exp::zero())
    }

    pub fn from_rational(field: BaseField, c: BigRational) -> Self {
        Self::monomial(field, c, Exp::zero())
    }

    pub fn from_int(field: BaseField, c: i64) -> Self {
        Self::from_rational(field, int(c))
    }

    /// `c·s^e`.
    pub fn monomial(field: BaseField, c: BigRational, e: Exp) -> Self {
        NovikovScalar {
            field,
            num: Poly::monomial(field.reduce(c), e),
            den: Poly::one(),
        }
    }

    /// `s^θ` for rational `θ`.
    pub fn s_pow(field: BaseField, theta: &BigRational) -> Self {
        let e = rational_to_exp(theta).expect("exponent out of range");
        Self::monomial(field, BigRational::one(), e)
    }

    pub fn from_poly(field: BaseField, num: Poly) -> Self {
        NovikovScalar {
            field,
            num,
            den: Poly::one(),
        }
    }

    /// Builds `num/den`, reducing to lowest terms.
    pub fn from_fraction(field: BaseField, num: Poly, den: Poly) -> Result<Self, NovikovError> {
        if den.is_zero() {
            return Err(NovikovError::DivisionByZero);
        }
        Ok(Self::normalized(field, num, den))
    }

    fn normalized(field: BaseField, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(field);
        }
        if den.is_one() {
            return NovikovScalar { field, num, den };
        }
        let (mut num, mut den) = (num, den);
        if !den.is_monomial() {
            let g = Poly::gcd(field, &num, &den);
            if !g.is_one() {
                num = Poly::exact_div(field, &num, &g);
                den = Poly::exact_div(field, &den, &g);
            }
        }
        let b = den.bottom().unwrap().0;
        let c = den.top().unwrap().1.recip();
        NovikovScalar {
            field,
            num: num.scale(field, &c).shift(-b),
            den: den.scale(field, &c).shift(-b),
        }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Laurent polynomial in `s` (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.is_monomial()
    }

    /// `ν(p/q) = ν(p) − ν(q)`, with `ν(0) = −∞`.
    pub fn valuation(&self) -> ExtRational {
        match (self.num.top(), self.den.top()) {
            (Some((a, _)), Some((b, _))) => ExtRational::Finite(exp_to_rational(*a - *b)),
            _ => ExtRational::NegInf,
        }
    }

    /// Coefficient of the top term of the descending expansion.
    pub fn leading_coefficient(&self) -> BigRational {
        match (self.num.top(), self.den.top()) {
            (Some((_, a)), Some((_, b))) => self.field.reduce(a / b),
            _ => BigRational::zero(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), NovikovError> {
        if self.field != other.field {
            Err(NovikovError::FieldMismatch(self.field, other.field))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check(other)?;
        let f = self.field;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let num = self.num.add(f, &other.num);
            if self.den.is_one() {
                return Ok(Self::from_poly(f, num));
            }
            return Ok(Self::normalized(f, num, self.den.clone()));
        }
        let num = self
            .num
            .mul(f, &other.den)
            .add(f, &other.num.mul(f, &self.den));
        let den = self.den.mul(f, &other.den);
        Ok(Self::normalized(f, num, den))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NovikovError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check(other)?;
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(Self::from_poly(f, self.num.mul(f, &other.num)));
        }
        // Cross-cancel before multiplying to keep degrees small.
        let g1 = Poly::gcd(f, &self.num, &other.den);
        let g2 = Poly::gcd(f, &other.num, &self.den);
        let (n1, d2) = cancel(f, &self.num, &other.den, &g1);
        let (n2, d1) = cancel(f, &other.num, &self.den, &g2);
        let num = n1.mul(f, &n2);
        let den = d1.mul(f, &d2);
        Ok(Self::normalized_coprime(f, num, den))
    }

    fn normalized_coprime(field: BaseField, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(field);
        }
        let b = den.bottom().unwrap().0;
        let c = den.top().unwrap().1.recip();
        NovikovScalar {
            field,
            num: num.scale(field, &c).shift(-b),
            den: den.scale(field, &c).shift(-b),
        }
    }

    pub fn inverse(&self) -> Result<Self, NovikovError> {
        if self.is_zero() {
            return Err(NovikovError::DivisionByZero);
        }
        Ok(Self::normalized_coprime(
            self.field,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn neg_ref(&self) -> Self {
        NovikovScalar {
            field: self.field,
            num: self.num.neg(self.field),
            den: self.den.clone(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        let num = self.num.scale(self.field, c);
        if num.is_zero() {
            return Self::zero(self.field);
        }
        NovikovScalar {
            field: self.field,
            num,
            den: self.den.clone(),
        }
    }

    /// Multiplies by `s^θ`.
    pub fn shift(&self, theta: Exp) -> Self {
        NovikovScalar {
            field: self.field,
            num: self.num.shift(theta),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: i64) -> Result<Self, NovikovError> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.field);
        let mut b = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// First `depth` nonzero terms of the descending expansion in `s`.
    pub fn expand(&self, depth: usize) -> Vec<(BigRational, BigRational)> {
        self.expand_terms(|out| out.len() >= depth, None)
    }

    /// All terms of the descending expansion with exponent `≥ floor`.
    pub fn expand_down_to(&self, floor: &BigRational) -> Vec<(BigRational, BigRational)> {
        self.expand_terms(|_| false, Some(floor))
    }

    fn expand_terms(
        &self,
        stop: impl Fn(&Vec<(BigRational, BigRational)>) -> bool,
        floor: Option<&BigRational>,
    ) -> Vec<(BigRational, BigRational)> {
        let f = self.field;
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let (dt, dc) = self.den.top().unwrap().clone();
        let dc_inv = dc.recip();
        let mut rem = self.num.clone();
        while let Some((rt, rc)) = rem.top().cloned() {
            let e = rt - dt;
            let er = exp_to_rational(e);
            if let Some(fl) = floor {
                if er < *fl {
                    break;
                }
            }
            if stop(&out) {
                break;
            }
            let c = f.mul(&rc, &dc_inv);
            out.push((er, c.clone()));
            let sub = self.den.scale(f, &c).shift(e);
            rem = rem.sub(f, &sub);
        }
        out
    }

    /// Free term: coefficient of `s⁰` in the descending expansion.
    pub fn free_term(&self) -> BigRational {
        self.expand_down_to(&BigRational::zero())
            .into_iter()
            .find(|(e, _)| e.is_zero())
            .map(|(_, c)| c)
            .unwrap_or_else(BigRational::zero)
    }

    /// Canonical text form, e.g. `(1*s^(3) + 1*s^(1))/(1*s^(0))`.
    pub fn to_text(&self) -> String {
        format!("({})/({})", poly_text(&self.num), poly_text(&self.den))
    }

    pub fn from_text(field: BaseField, s: &str) -> Result<Self, NovikovError> {
        parse_scalar(field, s)
    }

    /// Exponents of all terms of numerator and denominator lie in `Γ`.
    pub fn supported_in(&self, gamma: &PeriodGroup) -> bool {
        self.num
            .terms()
            .iter()
            .chain(self.den.terms())
            .all(|(e, _)| gamma.contains(&exp_to_rational(*e)))
    }
}

fn cancel(f: BaseField, a: &Poly, b: &Poly, g: &Poly) -> (Poly, Poly) {
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (Poly::exact_div(f, a, g), Poly::exact_div(f, b, g))
    }
}

fn poly_text(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (e, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&format!("{}*s^({})", mag, exp_to_rational(*e)));
    }
    s
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! scalar_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&NovikovScalar> for &NovikovScalar {
            type Output = NovikovScalar;
            fn $m(self, rhs: &NovikovScalar) -> NovikovScalar {
                self.$checked(rhs).expect("Novikov arithmetic")
            }
        }
        impl $tr<NovikovScalar> for NovikovScalar {
            type Output = NovikovScalar;
            fn $m(self, rhs: NovikovScalar) -> NovikovScalar {
                (&self).$checked(&rhs).expect("Novikov arithmetic")
            }
        }
    };
}

scalar_op!(Add, add, checked_add);
scalar_op!(Sub, sub, checked_sub);
scalar_op!(Mul, mul, checked_mul);

impl Neg for &NovikovScalar {
    type Output = NovikovScalar;
    fn neg(self) -> NovikovScalar {
        self.neg_ref()
    }
}

impl Neg for NovikovScalar {
    type Output = NovikovScalar;
    fn neg(self) -> NovikovScalar {
        self.neg_ref()
    }
}

/// Element `Σ_k λ_k q^k` of `Λ = K[q, q⁻¹]`, `deg q = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaElement {
    field: BaseField,
    coeffs: BTreeMap<i64, NovikovScalar>,
}

impl LambdaElement {
    pub fn zero(field: BaseField) -> Self {
        LambdaElement {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: BaseField) -> Self {
        Self::term(NovikovScalar::one(field), 0)
    }

    pub fn term(c: NovikovScalar, k: i64) -> Self {
        let field = c.field();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        LambdaElement { field, coeffs }
    }

    pub fn from_terms(
        field: BaseField,
        terms: impl IntoIterator<Item = (i64, NovikovScalar)>,
    ) -> Result<Self, NovikovError> {
        let mut out = Self::zero(field);
        for (k, c) in terms {
            out = out.checked_add(&Self::term(c, k))?;
        }
        Ok(out)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> NovikovScalar {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| NovikovScalar::zero(self.field))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &NovikovScalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Single power of `q` if homogeneous.
    pub fn q_degree(&self) -> Option<i64> {
        if self.coeffs.len() == 1 {
            self.coeffs.keys().next().copied()
        } else {
            None
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NovikovError> {
        if self.field != other.field {
            return Err(NovikovError::FieldMismatch(self.field, other.field));
        }
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let v = match coeffs.get(k) {
                Some(x) => x.checked_add(c)?,
                None => c.clone(),
            };
            if v.is_zero() {
                coeffs.remove(k);
            } else {
                coeffs.insert(*k, v);
            }
        }
        Ok(LambdaElement {
            field: self.field,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NovikovError> {
        if self.field != other.field {
            return Err(NovikovError::FieldMismatch(self.field, other.field));
        }
        let mut out = Self::zero(self.field);
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                out = out.checked_add(&Self::term(c1.checked_mul(c2)?, k1 + k2))?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &NovikovScalar) -> Result<Self, NovikovError> {
        let mut out = Self::zero(self.field);
        for (k, x) in &self.coeffs {
            out = out.checked_add(&Self::term(x.checked_mul(c)?, *k))?;
        }
        Ok(out)
    }

    pub fn neg_ref(&self) -> Self {
        LambdaElement {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg_ref())).collect(),
        }
    }
}

/// `max_k ν(λ_k)`.
pub fn lambda_valuation(x: &LambdaElement) -> ExtRational {
    x.coeffs
        .values()
        .map(|c| c.valuation())
        .max()
        .unwrap_or(ExtRational::NegInf)
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("{}*q^({})", c, k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm() -> BaseField {
        BaseField::Qmodel
    }

    fn sp(e: i64) -> NovikovScalar {
        NovikovScalar::monomial(qm(), int(1), Exp::from_integer(e))
    }

    #[test]
    fn valuation_of_quotient() {
        let x = (&sp(2) + &sp(0)).checked_div(&sp(5)).unwrap();
        assert_eq!(x.valuation(), ExtRational::Finite(int(-3)));
        // Independent check through the expansion.
        assert_eq!(x.expand(1)[0].0, int(-3));
    }

    #[test]
    fn group_sum_is_gcd() {
        let a = PeriodGroup::new(rat(1, 2));
        let b = PeriodGroup::new(rat(1, 3));
        assert_eq!(group_sum(&a, &b).generator(), &rat(1, 6));
        assert_eq!(group_sum(&a, &PeriodGroup::trivial()), a);
    }

    #[test]
    fn text_round_trip_example() {
        let x = &sp(3) + &sp(1);
        assert_eq!(x.to_text(), "(1*s^(3) + 1*s^(1))/(1*s^(0))");
        assert_eq!(NovikovScalar::from_text(qm(), &x.to_text()).unwrap(), x);
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let z = NovikovScalar::zero(qm());
        assert_eq!(sp(1).checked_div(&z), Err(NovikovError::DivisionByZero));
        let a = NovikovScalar::one(BaseField::F2);
        assert!(matches!(
            a.checked_add(&sp(0)),
            Err(NovikovError::FieldMismatch(_, _))
        ));
    }

    #[test]
    fn free_term_of_geometric_series() {
        // 1/(1 - s^-1) = 1 + s^-1 + s^-2 + ...
        let x = NovikovScalar::one(qm())
            .checked_div(&(&sp(0) - &sp(-1)))
            .unwrap();
        assert_eq!(x.free_term(), int(1));
        let terms = x.expand(4);
        assert_eq!(
            terms,
            vec![(int(0), int(1)), (int(-1), int(1)), (int(-2), int(1)), (int(-3), int(1))]
        );
        // s/(1+s): expansion 1 - s^-1 + ...; free term 1
        let y = sp(1).checked_div(&(&sp(1) + &sp(0))).unwrap();
        assert_eq!(y.free_term(), int(1));
    }

    #[test]
    fn lambda_valuation_is_max() {
        let x = LambdaElement::from_terms(qm(), [(0, sp(-2)), (3, sp(4))]).unwrap();
        assert_eq!(lambda_valuation(&x), ExtRational::Finite(int(4)));
        assert!(lambda_valuation(&LambdaElement::zero(qm())).is_neg_inf());
    }
}
