//! Decorated `ℤ₂`-graded filtered complexes over `K_Γ`, normal and spectral
//! bases, spectral invariants and their behaviour under tensor products.

mod chain;
mod generic;
pub mod random;
mod spectral;

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::novikov::{BaseField, ExtRational, NovikovError, NovikovScalar, PeriodGroup};

pub use chain::ChainElement;
pub use generic::{make_generic, make_generic_pair, spectral_interval, Perturbation};
pub use spectral::{normal_basis, HomologyClass, ProductReport, SpectralBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("complex not generic: basis vectors {0} and {1} tie")]
    NotGeneric(String, String),
    #[error("tensor product not in general position; apply make_generic_pair first")]
    NotInGeneralPosition,
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error("element is not a cycle")]
    NotACycle,
    #[error("zero element has no dominant term")]
    Zero,
    #[error("filter perturbation breaks strict decrease at {0}")]
    FilterDecrease(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVector {
    pub label: String,
    pub parity: u8,
    pub filter: BigRational,
}

/// A single failed condition found by [`DecoratedComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DSquared { column: String },
    Parity { from: String, to: String },
    FilterIncrease { vector: String, filter_of_d: BigRational, filter: BigRational },
    Support { from: String, to: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DSquared { column } => write!(f, "d(d {column}) != 0"),
            Violation::Parity { from, to } => {
                write!(f, "d {from} has a component on {to} of the same parity")
            }
            Violation::FilterIncrease {
                vector,
                filter_of_d,
                filter,
            } => write!(f, "F(d {vector}) = {filter_of_d} is not below F({vector}) = {filter}"),
            Violation::Support { from, to } => {
                write!(f, "coefficient of {to} in d {from} has exponents outside Γ")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `(label, F(d x), F(x))` for every basis vector.
    pub filter_drops: Vec<(String, ExtRational, BigRational)>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedComplex {
    field: BaseField,
    gamma: PeriodGroup,
    basis: Vec<BasisVector>,
    /// `columns[i] = d x_i`.
    columns: Vec<ChainElement>,
}

impl DecoratedComplex {
    /// Builds a complex from differential entries `(from, to, scalar)`,
    /// meaning `d x_from` has coefficient `scalar` on `x_to`.
    pub fn new(
        field: BaseField,
        gamma: PeriodGroup,
        basis: Vec<BasisVector>,
        entries: impl IntoIterator<Item = (usize, usize, NovikovScalar)>,
    ) -> Result<Self, ComplexError> {
        let n = basis.len();
        let mut cols: Vec<BTreeMap<usize, NovikovScalar>> = vec![BTreeMap::new(); n];
        for (from, to, c) in entries {
            if from >= n || to >= n {
                return Err(ComplexError::Invalid(format!(
                    "differential entry ({from}, {to}) out of range"
                )));
            }
            if c.field() != field {
                return Err(NovikovError::FieldMismatch(field, c.field()).into());
            }
            let slot = cols[from]
                .entry(to)
                .or_insert_with(|| NovikovScalar::zero(field));
            *slot = slot.checked_add(&c)?;
        }
        if let Some(b) = basis.iter().find(|b| b.parity > 1) {
            return Err(ComplexError::Invalid(format!("parity of {} must be 0 or 1", b.label)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.label.as_str()) {
                return Err(ComplexError::Invalid(format!("duplicate label {}", b.label)));
            }
        }
        let columns = cols
            .into_iter()
            .map(|m| ChainElement::from_map(field, m))
            .collect();
        Ok(DecoratedComplex {
            field,
            gamma,
            basis,
            columns,
        })
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn gamma(&self) -> &PeriodGroup {
        &self.gamma
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn filters(&self) -> Vec<BigRational> {
        self.basis.iter().map(|b| b.filter.clone()).collect()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// `d x_i`.
    pub fn column(&self, i: usize) -> &ChainElement {
        &self.columns[i]
    }

    /// Nonzero entries `(from, to, scalar)` of the differential.
    pub fn entries(&self) -> Vec<(usize, usize, NovikovScalar)> {
        let mut out = Vec::new();
        for (from, col) in self.columns.iter().enumerate() {
            for (to, c) in col.terms() {
                out.push((from, to, c.clone()));
            }
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> ChainElement {
        ChainElement::basis(self.field, i)
    }

    pub fn differential(&self, v: &ChainElement) -> ChainElement {
        let mut out = ChainElement::zero(self.field);
        for (i, c) in v.terms() {
            out.axpy(c, &self.columns[i]);
        }
        out
    }

    /// `F(Σ λ_j x_j) = max_j (ν(λ_j) + F(x_j))`, with `F(0) = −∞`.
    pub fn filter_value(&self, v: &ChainElement) -> ExtRational {
        v.terms()
            .map(|(j, c)| c.valuation().add_rational(&self.basis[j].filter))
            .max()
            .unwrap_or(ExtRational::NegInf)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut drops = Vec::new();
        for (i, col) in self.columns.iter().enumerate() {
            let lab = self.label(i).to_string();
            if !self.differential(col).is_zero() {
                violations.push(Violation::DSquared { column: lab.clone() });
            }
            for (j, c) in col.terms() {
                if self.basis[j].parity == self.basis[i].parity {
                    violations.push(Violation::Parity {
                        from: lab.clone(),
                        to: self.label(j).to_string(),
                    });
                }
                if !c.supported_in(&self.gamma) {
                    violations.push(Violation::Support {
                        from: lab.clone(),
                        to: self.label(j).to_string(),
                    });
                }
            }
            let fd = self.filter_value(col);
            let fx = self.basis[i].filter.clone();
            if let ExtRational::Finite(v) = &fd {
                if *v >= fx {
                    violations.push(Violation::FilterIncrease {
                        vector: lab.clone(),
                        filter_of_d: v.clone(),
                        filter: fx.clone(),
                    });
                }
            }
            drops.push((lab, fd, fx));
        }
        ValidationReport {
            violations,
            filter_drops: drops,
        }
    }

    /// `F(x_i) − F(x_j) ∉ Γ` for all `i ≠ j`.
    pub fn is_generic(&self) -> bool {
        self.genericity_witness().is_none()
    }

    pub(crate) fn genericity_witness(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let d = &self.basis[i].filter - &self.basis[j].filter;
                if self.gamma.contains(&d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Index `p` and coefficient `λ_p` of the unique top term of `v`.
    pub fn dominant(&self, v: &ChainElement) -> Result<(usize, NovikovScalar), ComplexError> {
        let mut best: Option<(ExtRational, usize)> = None;
        let mut tie: Option<usize> = None;
        for (j, c) in v.terms() {
            let val = c.valuation().add_rational(&self.basis[j].filter);
            match &best {
                None => best = Some((val, j)),
                Some((b, _)) if val > *b => {
                    best = Some((val, j));
                    tie = None;
                }
                Some((b, _)) if val == *b => tie = Some(j),
                _ => {}
            }
        }
        let (_, p) = best.ok_or(ComplexError::Zero)?;
        if let Some(t) = tie {
            return Err(ComplexError::NotGeneric(
                self.label(p).to_string(),
                self.label(t).to_string(),
            ));
        }
        Ok((p, v.coeff(p)))
    }

    /// Product complex with basis `x_i ⊗ y_j` in lexicographic order,
    /// `d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`, additive filter and `Γ₁ + Γ₂`.
    pub fn tensor(&self, other: &DecoratedComplex) -> Result<DecoratedComplex, ComplexError> {
        if self.field != other.field {
            return Err(NovikovError::FieldMismatch(self.field, other.field).into());
        }
        let (n1, n2) = (self.dim(), other.dim());
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut basis = Vec::with_capacity(n1 * n2);
        for x in &self.basis {
            for y in &other.basis {
                basis.push(BasisVector {
                    label: format!("{}⊗{}", x.label, y.label),
                    parity: (x.parity + y.parity) % 2,
                    filter: &x.filter + &y.filter,
                });
            }
        }
        let mut entries = Vec::new();
        for i in 0..n1 {
            let odd = self.basis[i].parity == 1;
            for j in 0..n2 {
                for (k, c) in self.columns[i].terms() {
                    entries.push((idx(i, j), idx(k, j), c.clone()));
                }
                for (l, c) in other.columns[j].terms() {
                    let c = if odd { -c } else { c.clone() };
                    entries.push((idx(i, j), idx(i, l), c));
                }
            }
        }
        DecoratedComplex::new(self.field, self.gamma.sum(&other.gamma), basis, entries)
    }

    /// `v ⊗ w` in the basis of `self.tensor(other)`.
    pub fn tensor_chains(&self, other: &DecoratedComplex, v: &ChainElement, w: &ChainElement) -> ChainElement {
        let n2 = other.dim();
        let mut m = BTreeMap::new();
        for (i, a) in v.terms() {
            for (j, b) in w.terms() {
                m.insert(i * n2 + j, a * b);
            }
        }
        ChainElement::from_map(self.field, m)
    }

    /// Same complex with a new filter; checks the strict decrease.
    pub fn with_filters(&self, filters: Vec<BigRational>) -> Result<DecoratedComplex, ComplexError> {
        if filters.len() != self.dim() {
            return Err(ComplexError::Dimension {
                expected: self.dim(),
                got: filters.len(),
            });
        }
        let mut out = self.clone();
        for (b, f) in out.basis.iter_mut().zip(filters) {
            b.filter = f;
        }
        for (i, col) in out.columns.iter().enumerate() {
            if let ExtRational::Finite(v) = out.filter_value(col) {
                if v >= out.basis[i].filter {
                    return Err(ComplexError::FilterDecrease(out.label(i).to_string()));
                }
            }
        }
        Ok(out)
    }

    pub fn perturb_filter(&self, p: &Perturbation) -> Result<DecoratedComplex, ComplexError> {
        let filters = match p {
            Perturbation::Constant(t) => self.basis.iter().map(|b| &b.filter + t).collect(),
            Perturbation::PerBasis(d) => {
                if d.len() != self.dim() {
                    return Err(ComplexError::Dimension {
                        expected: self.dim(),
                        got: d.len(),
                    });
                }
                self.basis.iter().zip(d).map(|(b, t)| &b.filter + t).collect()
            }
        };
        self.with_filters(filters)
    }

    /// Reorders the preferred basis: new vector `k` is old vector `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> DecoratedComplex {
        let mut inv = vec![0; perm.len()];
        for (k, &old) in perm.iter().enumerate() {
            inv[old] = k;
        }
        let basis = perm.iter().map(|&o| self.basis[o].clone()).collect();
        let columns = perm
            .iter()
            .map(|&o| self.columns[o].reindex(&inv))
            .collect();
        DecoratedComplex {
            field: self.field,
            gamma: self.gamma.clone(),
            basis,
            columns,
        }
    }

    /// Replaces `x_i` by `s^α x_i` (α ∈ Γ) with filter `F(x_i) + α`.
    pub fn rescale_basis(&self, i: usize, alpha: &BigRational) -> Result<DecoratedComplex, ComplexError> {
        if !self.gamma.contains(alpha) {
            return Err(ComplexError::Invalid("rescaling exponent not in Γ".into()));
        }
        let f = self.field;
        let up = NovikovScalar::s_pow(f, alpha);
        let down = NovikovScalar::s_pow(f, &-alpha.clone());
        // New coordinates: y_i = s^α x_i, so a coefficient on x_i becomes
        // one on y_i scaled by s^{−α}, and d y_i = s^α d x_i.
        let mut out = self.clone();
        for (k, col) in out.columns.iter_mut().enumerate() {
            let mut m = BTreeMap::new();
            for (j, c) in col.terms() {
                let mut c = c.clone();
                if j == i {
                    c = &c * &down;
                }
                if k == i {
                    c = &c * &up;
                }
                m.insert(j, c);
            }
            *col = ChainElement::from_map(f, m);
        }
        out.basis[i].filter = &out.basis[i].filter + alpha;
        Ok(out)
    }

    pub fn spectral_basis(&self) -> Result<SpectralBasis, ComplexError> {
        SpectralBasis::compute(self)
    }

    pub fn spectral_invariant(&self, a: &HomologyClass) -> Result<ExtRational, ComplexError> {
        self.spectral_basis()?.spectral_invariant(self, a)
    }
}

/// `c(a₁ ⊗ a₂)` against `c(a₁) + c(a₂)`; requires a generic tensor product.
pub fn verify_product_formula(
    v1: &DecoratedComplex,
    v2: &DecoratedComplex,
    a1: &HomologyClass,
    a2: &HomologyClass,
) -> Result<ProductReport, ComplexError> {
    spectral::verify_product_formula(v1, v2, a1, a2)
}

/// Parses `<scalar>*<label> + …` into a chain; the scalar factor is
/// optional and may be parenthesised, as in `(s^(1/2) + 1)*x - y`.
pub fn parse_chain(v: &DecoratedComplex, text: &str) -> Result<ChainElement, ComplexError> {
    use crate::quantum_algebra::element::{split_terms, split_top, strip_outer};
    let f = v.field();
    let mut out = ChainElement::zero(f);
    let terms = split_terms(text).map_err(|e| ComplexError::Invalid(e.to_string()))?;
    for (negative, term) in terms {
        let mut scalar = NovikovScalar::one(f);
        let mut index = None;
        for factor in split_top(&term, '*') {
            let factor = factor.trim();
            if let Some(i) = v.index_of(factor) {
                if index.replace(i).is_some() {
                    return Err(ComplexError::Invalid(format!("two basis vectors in '{term}'")));
                }
            } else {
                scalar = &scalar * &crate::novikov::parse_scalar(f, strip_outer(factor))?;
            }
        }
        let i = index.ok_or_else(|| ComplexError::Invalid(format!("no basis vector in '{}'", term.trim())))?;
        if negative {
            scalar = -scalar;
        }
        out.axpy(&scalar, &ChainElement::basis(f, i));
    }
    Ok(out)
}
