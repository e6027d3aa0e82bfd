use std::collections::BTreeMap;

use crate::novikov::{BaseField, NovikovScalar};

/// Sparse vector `Σ λ_j x_j` in a decorated complex, keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainElement {
    field: BaseField,
    coeffs: BTreeMap<usize, NovikovScalar>,
}

impl ChainElement {
    pub fn zero(field: BaseField) -> Self {
        ChainElement {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(field: BaseField, i: usize) -> Self {
        Self::term(NovikovScalar::one(field), i)
    }

    pub fn term(c: NovikovScalar, i: usize) -> Self {
        let field = c.field();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(i, c);
        }
        ChainElement { field, coeffs }
    }

    pub fn from_map(field: BaseField, mut coeffs: BTreeMap<usize, NovikovScalar>) -> Self {
        coeffs.retain(|_, c| !c.is_zero());
        ChainElement { field, coeffs }
    }

    pub fn from_terms(field: BaseField, terms: impl IntoIterator<Item = (usize, NovikovScalar)>) -> Self {
        let mut out = Self::zero(field);
        for (i, c) in terms {
            out.axpy(&c, &Self::basis(field, i));
        }
        out
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &NovikovScalar)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, i: usize) -> NovikovScalar {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| NovikovScalar::zero(self.field))
    }

    pub fn get(&self, i: usize) -> Option<&NovikovScalar> {
        self.coeffs.get(&i)
    }

    /// `self += c·v`.
    pub fn axpy(&mut self, c: &NovikovScalar, v: &ChainElement) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &v.coeffs {
            let add = c * x;
            match self.coeffs.get_mut(i) {
                Some(slot) => {
                    let s = &*slot + &add;
                    if s.is_zero() {
                        self.coeffs.remove(i);
                    } else {
                        *slot = s;
                    }
                }
                None => {
                    self.coeffs.insert(*i, add);
                }
            }
        }
    }

    pub fn add(&self, other: &ChainElement) -> ChainElement {
        let mut out = self.clone();
        out.axpy(&NovikovScalar::one(self.field), other);
        out
    }

    pub fn sub(&self, other: &ChainElement) -> ChainElement {
        let mut out = self.clone();
        out.axpy(&-NovikovScalar::one(self.field), other);
        out
    }

    pub fn scale(&self, c: &NovikovScalar) -> ChainElement {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        ChainElement {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(i, x)| (*i, c * x)).collect(),
        }
    }

    /// Moves the coefficient of `x_i` to `x_{map[i]}`.
    pub fn reindex(&self, map: &[usize]) -> ChainElement {
        ChainElement {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(i, c)| (map[*i], c.clone())).collect(),
        }
    }
}
