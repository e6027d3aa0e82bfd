use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{ComplexError, DecoratedComplex, HomologyClass};
use crate::novikov::{ExtRational, PeriodGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perturbation {
    Constant(BigRational),
    PerBasis(Vec<BigRational>),
}

/// Which side of zero the shifts may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Both,
    Up,
    Down,
}

/// Largest admissible shift: a third of the smallest filter drop along `d`,
/// so that shifts of size `< drop/2` keep `F(dx) < F(x)`.
fn decrease_margin(v: &DecoratedComplex) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for (from, to, c) in v.entries() {
        let nu = match c.valuation() {
            ExtRational::Finite(r) => r,
            ExtRational::NegInf => continue,
        };
        let gap = &v.basis()[from].filter - &v.basis()[to].filter - nu;
        best = Some(match best {
            Some(b) if b <= gap => b,
            _ => gap,
        });
    }
    best.map(|g| g / BigInt::from(3))
}

/// Greedy choice of shifts `δ_i` with `|δ_i| ≤ eps` such that
/// `(F_i + δ_i) − (F_j + δ_j) + o ∉ Γ` for all `j < i` and all offsets `o`.
/// Candidates are tried nearest to zero first, so inputs that already
/// satisfy the condition are left unchanged.
fn choose_shifts(
    filters: &[BigRational],
    gamma: &PeriodGroup,
    eps: &BigRational,
    offsets: &[BigRational],
    side: Side,
) -> Vec<BigRational> {
    let n = filters.len();
    // Forbidden shifts lie in at most n·|offsets| cosets of Γ, each meeting
    // [−eps, eps] in at most 2·eps/g + 1 points; the grid is larger.
    let per_coset = if gamma.is_trivial() {
        BigInt::from(1)
    } else {
        (eps * BigInt::from(2) / gamma.generator()).to_integer() + BigInt::from(1)
    };
    let m = per_coset * BigInt::from(n * offsets.len().max(1)) + BigInt::from(1);
    let step = eps / &m;
    let mut shifts: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let mut k = BigInt::zero();
        let chosen = loop {
            let mut cands = vec![];
            if k.is_zero() {
                cands.push(BigRational::zero());
            } else {
                let c = &step * &k;
                if side != Side::Down {
                    cands.push(c.clone());
                }
                if side != Side::Up {
                    cands.push(-c);
                }
            }
            let hit = cands.into_iter().find(|d| {
                let fi = &filters[i] + d;
                (0..i).all(|j| {
                    let diff = &fi - &filters[j] - &shifts[j];
                    offsets.iter().all(|o| !gamma.contains(&(&diff + o)))
                })
            });
            if let Some(d) = hit {
                break d;
            }
            k += 1;
            assert!(k <= m, "shift search exhausted");
        };
        shifts.push(chosen);
    }
    shifts
}

fn effective_eps(v: &DecoratedComplex, eps: &BigRational) -> Result<BigRational, ComplexError> {
    if !eps.is_positive() {
        return Err(ComplexError::Invalid("ε must be positive".into()));
    }
    Ok(match decrease_margin(v) {
        Some(m) if m < *eps => m,
        _ => eps.clone(),
    })
}

fn shifted(v: &DecoratedComplex, eps: &BigRational, side: Side) -> Result<DecoratedComplex, ComplexError> {
    let e = effective_eps(v, eps)?;
    let f = v.filters();
    let d = choose_shifts(&f, v.gamma(), &e, &[BigRational::zero()], side);
    v.with_filters(f.iter().zip(&d).map(|(a, b)| a + b).collect())
}

/// Generic complex with `‖F − F′‖ ≤ ε`; the bound is tightened when needed
/// to keep the strict filter decrease.
pub fn make_generic(v: &DecoratedComplex, eps: &BigRational) -> Result<DecoratedComplex, ComplexError> {
    shifted(v, eps, Side::Both)
}

/// Perturbs both filters by at most `ε` so that each complex is generic and
/// their tensor product is generic.
pub fn make_generic_pair(
    v1: &DecoratedComplex,
    v2: &DecoratedComplex,
    eps: &BigRational,
) -> Result<(DecoratedComplex, DecoratedComplex), ComplexError> {
    let gamma = v1.gamma().sum(v2.gamma());
    let e1 = effective_eps(v1, eps)?;
    let f1 = v1.filters();
    let d1 = choose_shifts(&f1, &gamma, &e1, &[BigRational::zero()], Side::Both);
    let f1: Vec<BigRational> = f1.iter().zip(&d1).map(|(a, b)| a + b).collect();
    let w1 = v1.with_filters(f1.clone())?;
    let mut offsets = Vec::with_capacity(f1.len() * f1.len());
    for a in &f1 {
        for b in &f1 {
            offsets.push(a - b);
        }
    }
    let e2 = effective_eps(v2, eps)?;
    let f2 = v2.filters();
    let d2 = choose_shifts(&f2, &gamma, &e2, &offsets, Side::Both);
    let w2 = v2.with_filters(f2.iter().zip(&d2).map(|(a, b)| a + b).collect())?;
    Ok((w1, w2))
}

/// `[c(a, F⁻), c(a, F⁺)]` for generic `F⁻ ≤ F ≤ F⁺` within `ε`; for a
/// generic input both ends equal `c(a, F)`.
pub fn spectral_interval(
    v: &DecoratedComplex,
    a: &HomologyClass,
    eps: &BigRational,
) -> Result<(ExtRational, ExtRational), ComplexError> {
    let lo = shifted(v, eps, Side::Down)?;
    let hi = shifted(v, eps, Side::Up)?;
    Ok((lo.spectral_invariant(a)?, hi.spectral_invariant(a)?))
}
