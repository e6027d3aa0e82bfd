use std::collections::BTreeMap;

use super::{QuantumAlgebra, QuantumError};
use crate::novikov::{parse_scalar, BaseField, LambdaElement, NovikovError, NovikovScalar};

/// Element `Σ_i λ_i b_i` with `λ_i ∈ Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QHElement {
    field: BaseField,
    coeffs: BTreeMap<usize, LambdaElement>,
}

impl QHElement {
    pub fn zero(field: BaseField) -> Self {
        QHElement {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(field: BaseField, i: usize) -> Self {
        Self::from_lambda(i, LambdaElement::one(field))
    }

    /// `c·q^k·b_i`.
    pub fn term(c: NovikovScalar, i: usize, k: i64) -> Self {
        Self::from_lambda(i, LambdaElement::term(c, k))
    }

    pub fn from_lambda(i: usize, lam: LambdaElement) -> Self {
        let field = lam.field();
        let mut coeffs = BTreeMap::new();
        if !lam.is_zero() {
            coeffs.insert(i, lam);
        }
        QHElement { field, coeffs }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LambdaElement)> {
        self.coeffs.iter().map(|(i, l)| (*i, l))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn coefficient(&self, i: usize) -> LambdaElement {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| LambdaElement::zero(self.field))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NovikovError> {
        if self.field != other.field {
            return Err(NovikovError::FieldMismatch(self.field, other.field));
        }
        let mut coeffs = self.coeffs.clone();
        for (i, l) in &other.coeffs {
            let v = match coeffs.get(i) {
                Some(x) => x.checked_add(l)?,
                None => l.clone(),
            };
            if v.is_zero() {
                coeffs.remove(i);
            } else {
                coeffs.insert(*i, v);
            }
        }
        Ok(QHElement {
            field: self.field,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NovikovError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QHElement {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(i, l)| (*i, l.neg_ref())).collect(),
        }
    }

    pub fn scale_lambda(&self, lam: &LambdaElement) -> Result<Self, NovikovError> {
        let mut out = Self::zero(self.field);
        for (i, l) in &self.coeffs {
            out = out.checked_add(&Self::from_lambda(*i, l.checked_mul(lam)?))?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &NovikovScalar) -> Result<Self, NovikovError> {
        self.scale_lambda(&LambdaElement::term(c.clone(), 0))
    }

    /// Text form `(<scalar>)*q^(k)*<label> + …` using the algebra's labels.
    pub fn to_text(&self, a: &QuantumAlgebra) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, lam) in &self.coeffs {
            for (k, c) in lam.terms() {
                parts.push(format!("({})*q^({})*{}", c, k, a.basis().label(*i)));
            }
        }
        parts.join(" + ")
    }
}

/// Parses a sum of products of factors. A factor is a parenthesised
/// scalar, a rational number, `s^(e)`, `q`, `q^(k)` or a class label;
/// each term contains exactly one label.
pub fn parse_element(a: &QuantumAlgebra, text: &str) -> Result<QHElement, QuantumError> {
    let f = a.field();
    let mut total = QHElement::zero(f);
    for (negative, term) in split_terms(text)? {
        let mut scalar = NovikovScalar::one(f);
        let mut qpow = 0i64;
        let mut class = None;
        for factor in split_top(&term, '*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(QuantumError::Parse(format!("empty factor in '{term}'")));
            }
            if let Some(i) = a.basis().index_of(factor) {
                if class.replace(i).is_some() {
                    return Err(QuantumError::Parse(format!("two classes in '{term}'")));
                }
            } else if factor == "q" {
                qpow += 1;
            } else if let Some(rest) = factor.strip_prefix("q^") {
                let inner = rest.trim().trim_start_matches('(').trim_end_matches(')');
                qpow += inner
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| QuantumError::Parse(format!("bad q power '{factor}'")))?;
            } else {
                let s = parse_scalar(f, strip_outer(factor))?;
                scalar = &scalar * &s;
            }
        }
        let i = class.ok_or_else(|| QuantumError::Parse(format!("no class in '{term}'")))?;
        if negative {
            scalar = -scalar;
        }
        total = total.checked_add(&QHElement::term(scalar, i, qpow))?;
    }
    Ok(total)
}

/// Removes one pair of parentheses enclosing the whole text.
pub(crate) fn strip_outer(s: &str) -> &str {
    let t = s.trim();
    if !(t.starts_with('(') && t.ends_with(')')) {
        return t;
    }
    let mut depth = 0i32;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 < t.len() {
                    return t;
                }
            }
            _ => {}
        }
    }
    &t[1..t.len() - 1]
}

pub(crate) fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

pub(crate) fn split_terms(s: &str) -> Result<Vec<(bool, String)>, QuantumError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    let mut prev_nonspace: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let is_sep = depth == 0
            && (ch == '+' || ch == '-')
            && !matches!(prev_nonspace, Some('^') | Some('*'));
        if is_sep {
            if !cur.trim().is_empty() {
                out.push((negative, std::mem::take(&mut cur)));
            } else if ch == '-' {
                negative = !negative;
                continue;
            }
            cur.clear();
            negative = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev_nonspace = Some(ch);
        }
    }
    if depth != 0 {
        return Err(QuantumError::Parse("unbalanced parentheses".into()));
    }
    if cur.trim().is_empty() {
        return Err(QuantumError::Parse("empty term".into()));
    }
    out.push((negative, cur));
    Ok(out)
}
