//! Seeded random generic complexes with known spectral data.
//!
//! A complex is built from a barcode normal form `D₀` (pairs `d b = c s^θ a`
//! plus free vectors `h`) conjugated by a parity-preserving unitriangular
//! `T = I + N`, where `N` only raises filter strictly. `T` preserves `F`, so
//! `c(Σ λ_j [T h_j]) = max_j ν(λ_j) + F(h_j)` holds on the result.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{BasisVector, ChainElement, DecoratedComplex, HomologyClass};
use crate::novikov::{BaseField, ExtRational, NovikovScalar, PeriodGroup};

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub dim: usize,
    pub field: BaseField,
    /// `Γ = (1/gamma_denominator)ℤ`.
    pub gamma_denominator: i64,
    /// Filters are multiples of `1/(filter_denominator·residue_prime)`;
    /// must be a multiple of `gamma_denominator`.
    pub filter_denominator: i64,
    /// Prime exceeding `dim`; distinct residues make the filter generic.
    pub residue_prime: i64,
    /// Probability of each admissible off-diagonal entry of `T`.
    pub density: f64,
}

impl RandomSpec {
    pub fn new(dim: usize, field: BaseField, gamma_denominator: i64) -> Self {
        RandomSpec {
            dim,
            field,
            gamma_denominator,
            filter_denominator: gamma_denominator,
            residue_prime: 13,
            density: 0.35,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomComplex {
    pub complex: DecoratedComplex,
    /// Indices of the free vectors `h` of the normal form.
    pub free: Vec<usize>,
    /// Columns `T x_j`.
    pub transform: Vec<ChainElement>,
}

impl RandomComplex {
    /// The cycle `T h_j` for each free index.
    pub fn oracle_cycles(&self) -> Vec<ChainElement> {
        self.free.iter().map(|&j| self.transform[j].clone()).collect()
    }

    /// Class `Σ λ_j [T h_j]` and its spectral invariant computed from the
    /// normal form alone.
    pub fn oracle_class(&self, lambdas: &[NovikovScalar]) -> (HomologyClass, ExtRational) {
        let v = &self.complex;
        let mut rep = ChainElement::zero(v.field());
        let mut c = ExtRational::NegInf;
        for (l, &j) in lambdas.iter().zip(&self.free) {
            rep.axpy(l, &self.transform[j]);
            let val = l.valuation().add_rational(&v.basis()[j].filter);
            if val > c {
                c = val;
            }
        }
        let class = HomologyClass::from_cycle(v, rep).expect("T h is a cycle");
        (class, c)
    }
}

fn gamma_generator(spec: &RandomSpec) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(spec.gamma_denominator))
}

/// Largest `θ ∈ Γ` with `θ < gap`, lowered by `k` further steps.
fn exponent_below(gap: &BigRational, g: &BigRational, k: i64) -> BigRational {
    let q = (gap / g).floor();
    let q = if &q * g == *gap { q - BigInt::one() } else { q };
    (q - BigInt::from(k)) * g
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R, field: BaseField) -> BigRational {
    match field {
        BaseField::F2 => BigRational::one(),
        BaseField::Qmodel => {
            let c = *[-2i64, -1, 1, 2, 3].choose(rng).unwrap();
            BigRational::from_integer(c.into())
        }
    }
}

/// Random scalar `Σ c_k s^{θ_k}` with one or two terms, exponents in `Γ`.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: BaseField, gamma: &PeriodGroup) -> NovikovScalar {
    let terms = rng.gen_range(1..=2);
    let mut out = NovikovScalar::zero(field);
    while out.is_zero() {
        for _ in 0..terms {
            let k = rng.gen_range(-3i64..=3);
            let e = gamma.generator() * BigInt::from(k);
            let c = random_coefficient(rng, field);
            out = &out + &NovikovScalar::s_pow(field, &e).scale_rational(&c);
        }
    }
    out
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> RandomComplex {
    let n = spec.dim;
    let f = spec.field;
    let p = spec.residue_prime;
    assert!(n < p as usize, "residue prime must exceed the dimension");
    assert!(
        spec.filter_denominator.is_multiple_of(&spec.gamma_denominator),
        "filter denominator must be a multiple of the Γ denominator"
    );
    let g = gamma_generator(spec);
    let gamma = PeriodGroup::new(g.clone());
    let dd = BigInt::from(spec.filter_denominator);
    let mut residues: Vec<i64> = (1..p).collect();
    residues.shuffle(rng);
    let filters: Vec<BigRational> = (0..n)
        .map(|i| {
            let a = rng.gen_range(-3 * spec.filter_denominator..=3 * spec.filter_denominator);
            BigRational::new(BigInt::from(a * p + residues[i]), &dd * BigInt::from(p))
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let pairs = rng.gen_range(0..=n / 2);
    let mut parity = vec![0u8; n];
    let mut d0: Vec<ChainElement> = vec![ChainElement::zero(f); n];
    for k in 0..pairs {
        let (mut a, mut b) = (order[2 * k], order[2 * k + 1]);
        if filters[a] > filters[b] {
            std::mem::swap(&mut a, &mut b);
        }
        parity[a] = rng.gen_range(0..2);
        parity[b] = 1 - parity[a];
        let theta = exponent_below(&(&filters[b] - &filters[a]), &g, rng.gen_range(0..2));
        let c = random_coefficient(rng, f);
        d0[b] = ChainElement::term(NovikovScalar::s_pow(f, &theta).scale_rational(&c), a);
    }
    let free: Vec<usize> = {
        let mut v: Vec<usize> = order[2 * pairs..].to_vec();
        for &h in &v {
            parity[h] = rng.gen_range(0..2);
        }
        v.sort_unstable();
        v
    };

    // T x_j = x_j + Σ t_ij x_i over F_i < F_j, same parity.
    let mut t_cols: Vec<ChainElement> = (0..n).map(|j| ChainElement::basis(f, j)).collect();
    for j in 0..n {
        for i in 0..n {
            if filters[i] < filters[j] && parity[i] == parity[j] && rng.gen_bool(spec.density) {
                let theta = exponent_below(&(&filters[j] - &filters[i]), &g, rng.gen_range(0..3));
                let c = random_coefficient(rng, f);
                t_cols[j].axpy(&NovikovScalar::s_pow(f, &theta).scale_rational(&c), &ChainElement::basis(f, i));
            }
        }
    }
    // T⁻¹ x_j = x_j − Σ t_ij T⁻¹ x_i, in increasing filter order.
    let mut by_filter: Vec<usize> = (0..n).collect();
    by_filter.sort_by(|a, b| filters[*a].cmp(&filters[*b]));
    let mut t_inv: Vec<ChainElement> = vec![ChainElement::zero(f); n];
    for &j in &by_filter {
        let mut col = ChainElement::basis(f, j);
        for (i, c) in t_cols[j].terms() {
            if i != j {
                col.axpy(&-c, &t_inv[i]);
            }
        }
        t_inv[j] = col;
    }
    let apply = |cols: &[ChainElement], v: &ChainElement| {
        let mut out = ChainElement::zero(f);
        for (i, c) in v.terms() {
            out.axpy(c, &cols[i]);
        }
        out
    };
    let mut entries = Vec::new();
    for j in 0..n {
        let col = apply(&t_cols, &apply(&d0, &t_inv[j]));
        for (i, c) in col.terms() {
            entries.push((j, i, c.clone()));
        }
    }
    let basis = (0..n)
        .map(|i| BasisVector {
            label: format!("x{}", i + 1),
            parity: parity[i],
            filter: filters[i].clone(),
        })
        .collect();
    let complex = DecoratedComplex::new(f, gamma, basis, entries).expect("well-formed complex");
    RandomComplex {
        complex,
        free,
        transform: t_cols,
    }
}

/// Two complexes whose tensor product is generic: filters use distinct
/// residue primes over the common denominator `lcm(d₁, d₂)`.
pub fn random_pair<R: Rng + ?Sized>(
    rng: &mut R,
    dims: (usize, usize),
    field: BaseField,
    gamma_denominators: (i64, i64),
) -> (RandomComplex, RandomComplex) {
    let l = gamma_denominators.0.lcm(&gamma_denominators.1);
    let mut s1 = RandomSpec::new(dims.0, field, gamma_denominators.0);
    s1.filter_denominator = l;
    s1.residue_prime = 13;
    let mut s2 = RandomSpec::new(dims.1, field, gamma_denominators.1);
    s2.filter_denominator = l;
    s2.residue_prime = 17;
    (random_complex(rng, &s1), random_complex(rng, &s2))
}

/// Random linear combination of the oracle cycles, not all coefficients zero.
pub fn random_lambdas<R: Rng + ?Sized>(rng: &mut R, rc: &RandomComplex) -> Vec<NovikovScalar> {
    let f = rc.complex.field();
    let gamma = rc.complex.gamma().clone();
    let p = rc.free.len();
    let mut out: Vec<NovikovScalar> = (0..p)
        .map(|_| {
            if rng.gen_bool(0.6) {
                random_scalar(rng, f, &gamma)
            } else {
                NovikovScalar::zero(f)
            }
        })
        .collect();
    if p > 0 && out.iter().all(|c| c.is_zero()) {
        let k = rng.gen_range(0..p);
        out[k] = random_scalar(rng, f, &gamma);
    }
    out
}

/// `z + d u` for a random chain `u`.
pub fn random_representative<R: Rng + ?Sized>(
    rng: &mut R,
    v: &DecoratedComplex,
    z: &ChainElement,
) -> ChainElement {
    let f = v.field();
    let mut m = BTreeMap::new();
    for i in 0..v.dim() {
        if rng.gen_bool(0.5) {
            m.insert(i, random_scalar(rng, f, v.gamma()));
        }
    }
    let u = ChainElement::from_map(f, m);
    z.add(&v.differential(&u))
}

