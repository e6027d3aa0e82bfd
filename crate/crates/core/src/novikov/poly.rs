//! Finitely supported sums `Σ c_θ s^θ` with rational exponents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use super::BaseField;

/// Rational exponent of the formal variable `s`.
pub type Exp = Ratio<i64>;

/// Sparse Laurent-type polynomial. Terms are kept with strictly descending
/// exponents and nonzero coefficients, so structural equality is equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Exp, BigRational)>,
}

impl BaseField {
    pub(crate) fn reduce(self, c: BigRational) -> BigRational {
        match self {
            BaseField::Qmodel => c,
            BaseField::F2 => {
                let n = c.numer().mod_floor(&BigInt::from(2));
                BigRational::from_integer(n)
            }
        }
    }

    pub(crate) fn add(self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub(crate) fn mul(self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub(crate) fn neg(self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), Exp::zero())
    }

    pub fn monomial(c: BigRational, e: Exp) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(e, c)] }
        }
    }

    /// Builds from arbitrary terms, merging equal exponents.
    pub fn from_terms(f: BaseField, terms: impl IntoIterator<Item = (Exp, BigRational)>) -> Self {
        let mut acc: BTreeMap<Exp, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = acc.entry(e).or_insert_with(BigRational::zero);
            *slot = f.add(slot, &c);
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<Exp, BigRational>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Exp, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn top(&self) -> Option<&(Exp, BigRational)> {
        self.terms.first()
    }

    pub fn bottom(&self) -> Option<&(Exp, BigRational)> {
        self.terms.last()
    }

    pub fn coefficient(&self, e: Exp) -> BigRational {
        self.terms
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, f: BaseField, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(&a[i].1, &b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self, f: BaseField) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, f: BaseField, other: &Poly) -> Poly {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: BaseField, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (*e, f.mul(x, c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// Multiplies by `s^e`.
    pub fn shift(&self, e: Exp) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(x, c)| (*x + e, c.clone())).collect(),
        }
    }

    pub fn mul(&self, f: BaseField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.scale(f, c).shift(*e);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.scale(f, c).shift(*e);
        }
        let mut acc: BTreeMap<Exp, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let slot = acc.entry(*e1 + *e2).or_insert_with(BigRational::zero);
                *slot = f.add(slot, &f.mul(c1, c2));
            }
        }
        Self::from_map(acc)
    }

    /// Greatest common divisor in the Laurent ring, normalized to bottom
    /// exponent 0 and leading coefficient 1. Monomials are units.
    pub fn gcd(f: BaseField, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.unit_normal(f);
        }
        if b.is_zero() {
            return a.unit_normal(f);
        }
        if a.is_monomial() || b.is_monomial() {
            return Poly::one();
        }
        let lat = Lattice::of(&[a, b]);
        let da = lat.dense(a);
        let db = lat.dense(b);
        let g = dense_gcd(f, da, db);
        if g.len() == 1 {
            return Poly::one();
        }
        lat.sparse(&g)
    }

    /// Exact quotient `a / g` in the Laurent ring, given that `g` divides `a`.
    pub fn exact_div(f: BaseField, a: &Poly, g: &Poly) -> Poly {
        if g.is_monomial() {
            let (e, c) = &g.terms[0];
            let inv = c.recip();
            return a.scale(f, &inv).shift(-*e);
        }
        let lat = Lattice::of(&[a, g]);
        let da = lat.dense(a);
        let dg = lat.dense(g);
        let (q, r) = dense_divrem(f, da, &dg);
        debug_assert!(r.iter().all(|c| c.is_zero()));
        let a_bottom = a.bottom().unwrap().0;
        let g_bottom = g.bottom().unwrap().0;
        lat.sparse(&q).shift(a_bottom - g_bottom)
    }

    /// Associate normalized to bottom exponent 0 and leading coefficient 1.
    pub fn unit_normal(&self, f: BaseField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let b = self.bottom().unwrap().0;
        let c = self.top().unwrap().1.recip();
        self.scale(f, &c).shift(-b)
    }
}

/// Maps exponents `bottom + k·step` to dense indices `k`.
struct Lattice {
    step: Exp,
}

impl Lattice {
    fn of(ps: &[&Poly]) -> Lattice {
        let mut step: Option<Exp> = None;
        for p in ps {
            let b = p.bottom().unwrap().0;
            for (e, _) in &p.terms {
                let d = *e - b;
                if d.is_zero() {
                    continue;
                }
                step = Some(match step {
                    None => d,
                    Some(s) => ratio_gcd(s, d),
                });
            }
        }
        Lattice {
            step: step.unwrap_or_else(Exp::one),
        }
    }

    fn dense(&self, p: &Poly) -> Vec<BigRational> {
        let b = p.bottom().unwrap().0;
        let deg = index_of((p.top().unwrap().0 - b) / self.step);
        let mut v = vec![BigRational::zero(); deg + 1];
        for (e, c) in &p.terms {
            v[index_of((*e - b) / self.step)] = c.clone();
        }
        v
    }

    fn sparse(&self, v: &[BigRational]) -> Poly {
        let terms = v
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.step * Exp::from_integer(i as i64), c.clone()))
            .collect();
        Poly { terms }
    }
}

fn index_of(r: Exp) -> usize {
    debug_assert!(r.is_integer() && !r.is_negative());
    r.to_integer() as usize
}

fn ratio_gcd(a: Exp, b: Exp) -> Exp {
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    Exp::new(n, d)
}

fn trim(v: &mut Vec<BigRational>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn dense_divrem(
    f: BaseField,
    mut a: Vec<BigRational>,
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if a.len() < b.len() {
        return (vec![BigRational::zero()], a);
    }
    let mut q = vec![BigRational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = f.mul(&a[i + db], &lead_inv);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let t = f.mul(&c, bj);
                a[i + j] = f.add(&a[i + j], &f.neg(&t));
            }
        }
        q[i] = c;
    }
    a.truncate(db.max(1));
    trim(&mut a);
    (q, a)
}

fn dense_gcd(f: BaseField, mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    trim(&mut a);
    trim(&mut b);
    if f == BaseField::Qmodel {
        return rational_gcd_prs(&a, &b);
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !(b.len() == 1 && b[0].is_zero()) {
        let (_, r) = dense_divrem(f, a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().recip();
    a.iter().map(|c| f.mul(c, &lead)).collect()
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(c: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = c.mod_floor(&p);
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Degree of the gcd modulo a large prime; `None` when the prime divides a
/// leading coefficient.
fn modular_gcd_degree(a: &[BigInt], b: &[BigInt]) -> Option<usize> {
    let mut x: Vec<u64> = a.iter().map(to_mod).collect();
    let mut y: Vec<u64> = b.iter().map(to_mod).collect();
    if *x.last()? == 0 || *y.last()? == 0 {
        return None;
    }
    let trim_m = |v: &mut Vec<u64>| {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    };
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !(y.len() == 1 && y[0] == 0) {
        let dy = y.len() - 1;
        let inv = powmod(y[dy], PRIME - 2);
        for i in (dy..x.len()).rev() {
            let c = mulmod(x[i], inv);
            if c == 0 {
                continue;
            }
            for j in 0..=dy {
                let t = mulmod(c, y[j]);
                let k = i - dy + j;
                x[k] = (x[k] + PRIME - t) % PRIME;
            }
        }
        x.truncate(dy.max(1));
        trim_m(&mut x);
        std::mem::swap(&mut x, &mut y);
    }
    Some(x.len() - 1)
}

fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in v {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| (c * &l).to_integer()).collect();
    primitive_int(ints)
}

fn primitive_int(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn trim_int(v: &mut Vec<BigInt>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Gcd over `ℚ` by a modular coprimality test followed by a primitive
/// polynomial remainder sequence over `ℤ`.
fn rational_gcd_prs(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if modular_gcd_degree(&x, &y) == Some(0) {
        return vec![BigRational::one()];
    }
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !(y.len() == 1 && y[0].is_zero()) {
        let dy = y.len() - 1;
        let ly = y[dy].clone();
        while x.len() > dy && !(x.len() == 1 && x[0].is_zero()) {
            let dx = x.len() - 1;
            if dx < dy {
                break;
            }
            let lx = x[dx].clone();
            for c in x.iter_mut() {
                *c *= &ly;
            }
            for j in 0..=dy {
                let t = &lx * &y[j];
                x[dx - dy + j] -= t;
            }
            x.pop();
            trim_int(&mut x);
            x = primitive_int(x);
            if x.len() - 1 < dy {
                break;
            }
        }
        trim_int(&mut x);
        std::mem::swap(&mut x, &mut y);
    }
    let lead = BigRational::from_integer(x.last().unwrap().clone());
    x.into_iter()
        .map(|c| BigRational::from_integer(c) / &lead)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn e(n: i64, d: i64) -> Exp {
        Exp::new(n, d)
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = BaseField::Qmodel;
        // (s - 1)(s + 2) and (s - 1)(s^(1/2) + 3)
        let a = Poly::from_terms(f, [(e(2, 1), q(1)), (e(1, 1), q(1)), (e(0, 1), q(-2))]);
        let b = Poly::from_terms(
            f,
            [(e(3, 2), q(1)), (e(1, 1), q(3)), (e(1, 2), q(-1)), (e(0, 1), q(-3))],
        );
        let g = Poly::gcd(f, &a, &b);
        let expect = Poly::from_terms(f, [(e(1, 1), q(1)), (e(0, 1), q(-1))]);
        assert_eq!(g, expect);
        let qa = Poly::exact_div(f, &a, &g);
        assert_eq!(qa.mul(f, &g), a);
    }

    #[test]
    fn f2_arithmetic_reduces() {
        let f = BaseField::F2;
        let a = Poly::from_terms(f, [(e(1, 1), q(1)), (e(0, 1), q(1))]);
        let sq = a.mul(f, &a);
        assert_eq!(sq, Poly::from_terms(f, [(e(2, 1), q(1)), (e(0, 1), q(1))]));
    }

    #[test]
    fn exact_div_respects_offsets() {
        let f = BaseField::Qmodel;
        let g = Poly::from_terms(f, [(e(1, 3), q(1)), (e(0, 1), q(1))]);
        let h = Poly::from_terms(f, [(e(-2, 1), q(5)), (e(-7, 3), q(-1))]);
        let a = g.mul(f, &h);
        assert_eq!(Poly::exact_div(f, &a, &g), h);
    }
}
