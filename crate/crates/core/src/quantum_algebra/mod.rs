//! Finite-rank graded commutative algebras over `Λ = K[q, q⁻¹]` given by
//! structure constants, modelling quantum homology rings.

mod builtins;
pub(crate) mod element;
mod semisimple;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::novikov::linalg::{self, Matrix};
use crate::novikov::{BaseField, NovikovError, NovikovScalar, PeriodGroup};

pub use builtins::{cpn, cpn_with_kappa, quadric, s2, torus_classical, toy_dual_numbers};
pub use element::{parse_element, QHElement};
pub use semisimple::{Semisimplicity, SemisimpleWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("invalid basis: {0}")]
    Basis(String),
    #[error("class index {0} out of range")]
    Index(usize),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisClass {
    pub label: String,
    pub degree: u32,
}

/// Classes of `H_•(M; F)` with their degrees; exactly one class of degree
/// `2n` (the unity `[M]`) and one of degree 0 (the point).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    classes: Vec<BasisClass>,
    dimension_2n: u32,
    unity: usize,
    point: usize,
}

impl GradedBasis {
    pub fn new(classes: Vec<BasisClass>, dimension_2n: u32) -> Result<Self, QuantumError> {
        if dimension_2n % 2 != 0 {
            return Err(QuantumError::Basis("dimension_2n must be even".into()));
        }
        let top: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].degree == dimension_2n)
            .collect();
        let bottom: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].degree == 0)
            .collect();
        if top.len() != 1 || bottom.len() != 1 || top == bottom {
            return Err(QuantumError::Basis(
                "need exactly one class of top degree and one of degree 0".into(),
            ));
        }
        if let Some(c) = classes.iter().find(|c| c.degree > dimension_2n) {
            return Err(QuantumError::Basis(format!(
                "class {} has degree above {dimension_2n}",
                c.label
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &classes {
            if !seen.insert(c.label.as_str()) {
                return Err(QuantumError::Basis(format!("duplicate label {}", c.label)));
            }
        }
        Ok(GradedBasis {
            classes,
            dimension_2n,
            unity: top[0],
            point: bottom[0],
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[BasisClass] {
        &self.classes
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.classes[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.classes[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn dimension_2n(&self) -> u32 {
        self.dimension_2n
    }

    pub fn unity(&self) -> usize {
        self.unity
    }

    pub fn point(&self) -> usize {
        self.point
    }
}

/// Violations found by [`QuantumAlgebra::check_axioms`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub commutativity: Vec<String>,
    pub unity: Vec<String>,
    pub grading: Vec<String>,
    pub associativity: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.commutativity.is_empty()
            && self.unity.is_empty()
            && self.grading.is_empty()
            && self.associativity.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumAlgebra {
    field: BaseField,
    basis: GradedBasis,
    gamma: PeriodGroup,
    kappa: Option<BigRational>,
    table: Vec<Vec<QHElement>>,
}

impl QuantumAlgebra {
    /// Builds an algebra from table entries. An entry `(i, j)` without a
    /// matching `(j, i)` is mirrored with the graded sign; absent pairs are 0.
    pub fn new(
        field: BaseField,
        basis: GradedBasis,
        gamma: PeriodGroup,
        kappa: Option<BigRational>,
        entries: BTreeMap<(usize, usize), QHElement>,
    ) -> Result<Self, QuantumError> {
        let n = basis.len();
        let mut table = vec![vec![QHElement::zero(field); n]; n];
        for (&(i, j), v) in &entries {
            if i >= n || j >= n {
                return Err(QuantumError::Index(i.max(j)));
            }
            if v.field() != field {
                return Err(NovikovError::FieldMismatch(field, v.field()).into());
            }
            if let Some(k) = v.indices().find(|&k| k >= n) {
                return Err(QuantumError::Index(k));
            }
            table[i][j] = v.clone();
            if !entries.contains_key(&(j, i)) {
                let sign = graded_sign(basis.degree(i), basis.degree(j));
                table[j][i] = if sign { v.neg() } else { v.clone() };
            }
        }
        if let Some(k) = &kappa {
            if *k <= BigRational::zero() {
                return Err(QuantumError::Argument("kappa must be positive".into()));
            }
        }
        Ok(QuantumAlgebra {
            field,
            basis,
            gamma,
            kappa,
            table,
        })
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn gamma(&self) -> &PeriodGroup {
        &self.gamma
    }

    pub fn kappa(&self) -> Option<&BigRational> {
        self.kappa.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &QHElement {
        &self.table[i][j]
    }

    pub fn unity_element(&self) -> QHElement {
        QHElement::basis(self.field, self.basis.unity())
    }

    pub fn point_element(&self) -> QHElement {
        QHElement::basis(self.field, self.basis.point())
    }

    /// Class `b_i` as an element.
    pub fn class(&self, i: usize) -> QHElement {
        QHElement::basis(self.field, i)
    }

    pub fn class_by_label(&self, label: &str) -> Option<QHElement> {
        self.basis.index_of(label).map(|i| self.class(i))
    }

    /// Degree of a homogeneous element; `None` for 0 or mixed degrees.
    pub fn degree_of(&self, x: &QHElement) -> Option<i64> {
        let mut d = None;
        for (i, lam) in x.terms() {
            for (k, _) in lam.terms() {
                let e = self.basis.degree(i) as i64 + 2 * k;
                match d {
                    None => d = Some(e),
                    Some(v) if v != e => return None,
                    _ => {}
                }
            }
        }
        d
    }

    pub fn qprod(&self, x: &QHElement, y: &QHElement) -> Result<QHElement, QuantumError> {
        let mut out = QHElement::zero(self.field);
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let ab = a.checked_mul(b)?;
                let t = self.table[i][j].scale_lambda(&ab)?;
                out = out.checked_add(&t)?;
            }
        }
        Ok(out)
    }

    pub fn check_axioms(&self) -> Result<AxiomReport, QuantumError> {
        let n = self.dim();
        let mut rep = AxiomReport::default();
        let u = self.basis.unity();
        let top = self.basis.dimension_2n() as i64;
        for i in 0..n {
            if self.table[u][i] != self.class(i) || self.table[i][u] != self.class(i) {
                rep.unity.push(format!("[M]*{} != {}", self.basis.label(i), self.basis.label(i)));
            }
            for j in 0..n {
                let sign = graded_sign(self.basis.degree(i), self.basis.degree(j));
                let mirrored = if sign {
                    self.table[j][i].neg()
                } else {
                    self.table[j][i].clone()
                };
                if self.table[i][j] != mirrored {
                    rep.commutativity.push(format!(
                        "{}*{} vs {}*{}",
                        self.basis.label(i),
                        self.basis.label(j),
                        self.basis.label(j),
                        self.basis.label(i)
                    ));
                }
                let want = self.basis.degree(i) as i64 + self.basis.degree(j) as i64 - top;
                for (k, lam) in self.table[i][j].terms() {
                    for (qk, _) in lam.terms() {
                        let got = self.basis.degree(k) as i64 + 2 * qk;
                        if got != want {
                            rep.grading.push(format!(
                                "{}*{} has a term {}q^{} of degree {got}, expected {want}",
                                self.basis.label(i),
                                self.basis.label(j),
                                self.basis.label(k),
                                qk
                            ));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &self.table[i][j];
                for k in 0..n {
                    let left = self.qprod(ij, &self.class(k))?;
                    let right = self.qprod(&self.class(i), &self.table[j][k])?;
                    if left != right {
                        rep.associativity.push(format!(
                            "({}*{})*{}",
                            self.basis.label(i),
                            self.basis.label(j),
                            self.basis.label(k)
                        ));
                    }
                }
            }
        }
        Ok(rep)
    }

    pub fn is_idempotent(&self, x: &QHElement) -> Result<bool, QuantumError> {
        Ok(self.qprod(x, x)? == *x)
    }

    /// `Ω(x, y)`: the `K`-coefficient of `p·q⁰` in `x ∗ y`.
    pub fn omega(&self, x: &QHElement, y: &QHElement) -> Result<NovikovScalar, QuantumError> {
        let xy = self.qprod(x, y)?;
        Ok(xy.coefficient(self.basis.point()).coeff(0))
    }

    /// `Π(x, y) = τ Ω(x, y)`, the free term of `Ω(x, y)`.
    pub fn frobenius(&self, x: &QHElement, y: &QHElement) -> Result<BigRational, QuantumError> {
        Ok(self.omega(x, y)?.free_term())
    }

    /// Gram matrix of `Ω` on classes paired with their complementary
    /// `q`-shifts: entry `(i, j)` is `Ω(b_i, q^{m} b_j)` with `m` chosen so
    /// that the degrees add to `2n` when possible.
    pub fn omega_gram(&self) -> Result<Matrix, QuantumError> {
        let n = self.dim();
        let top = self.basis.dimension_2n() as i64;
        let mut g = vec![vec![NovikovScalar::zero(self.field); n]; n];
        for i in 0..n {
            for j in 0..n {
                let s = self.basis.degree(i) as i64 + self.basis.degree(j) as i64;
                if (top - s) % 2 != 0 {
                    continue;
                }
                let m = (top - s) / 2;
                let bj = QHElement::term(NovikovScalar::one(self.field), j, m);
                g[i][j] = self.omega(&self.class(i), &bj)?;
            }
        }
        Ok(g)
    }

    /// `Ω` is nondegenerate: its Gram matrix has full rank over `K`.
    pub fn frobenius_nondegenerate(&self) -> Result<bool, QuantumError> {
        Ok(linalg::rank(&self.omega_gram()?) == self.dim())
    }

    /// Solves `c ∗ x = a` for `x`, given a homogeneous divisor `c`.
    pub fn divide(
        &self,
        c: &QHElement,
        a: &QHElement,
    ) -> Result<Option<QHElement>, QuantumError> {
        if c.is_zero() {
            return Ok(if a.is_zero() {
                Some(QHElement::zero(self.field))
            } else {
                None
            });
        }
        let dc = self.degree_of(c).ok_or(QuantumError::Inhomogeneous)?;
        let top = self.basis.dimension_2n() as i64;
        let mut total = QHElement::zero(self.field);
        for (da, part) in self.homogeneous_parts(a) {
            let dx = da - dc + top;
            match self.divide_homogeneous(c, &part, da, dx)? {
                Some(x) => total = total.checked_add(&x)?,
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    fn homogeneous_parts(&self, a: &QHElement) -> BTreeMap<i64, QHElement> {
        let mut parts: BTreeMap<i64, QHElement> = BTreeMap::new();
        for (i, lam) in a.terms() {
            for (k, c) in lam.terms() {
                let d = self.basis.degree(i) as i64 + 2 * k;
                let t = QHElement::term(c.clone(), i, k);
                let slot = parts.entry(d).or_insert_with(|| QHElement::zero(self.field));
                *slot = slot.checked_add(&t).expect("same field");
            }
        }
        parts
    }

    fn divide_homogeneous(
        &self,
        c: &QHElement,
        a: &QHElement,
        da: i64,
        dx: i64,
    ) -> Result<Option<QHElement>, QuantumError> {
        let n = self.dim();
        let f = self.field;
        // Unknown x = Σ ξ_i b_i q^{(dx − deg b_i)/2}.
        let unknowns: Vec<(usize, i64)> = (0..n)
            .filter(|&i| (dx - self.basis.degree(i) as i64) % 2 == 0)
            .map(|i| (i, (dx - self.basis.degree(i) as i64) / 2))
            .collect();
        let rows: Vec<(usize, i64)> = (0..n)
            .filter(|&k| (da - self.basis.degree(k) as i64) % 2 == 0)
            .map(|k| (k, (da - self.basis.degree(k) as i64) / 2))
            .collect();
        let mut m = vec![vec![NovikovScalar::zero(f); unknowns.len()]; rows.len()];
        for (col, &(i, qi)) in unknowns.iter().enumerate() {
            let img = self.qprod(c, &QHElement::term(NovikovScalar::one(f), i, qi))?;
            for (row, &(k, qk)) in rows.iter().enumerate() {
                m[row][col] = img.coefficient(k).coeff(qk);
            }
        }
        let rhs: Vec<NovikovScalar> = rows
            .iter()
            .map(|&(k, qk)| a.coefficient(k).coeff(qk))
            .collect();
        if rows.is_empty() {
            return Ok(Some(QHElement::zero(f)));
        }
        let Some(xi) = linalg::solve(f, &m, &rhs) else {
            return Ok(None);
        };
        let mut x = QHElement::zero(f);
        for (v, &(i, qi)) in xi.into_iter().zip(&unknowns) {
            x = x.checked_add(&QHElement::term(v, i, qi))?;
        }
        Ok(Some(x))
    }

    /// Tensor product algebra on the lexicographic basis `b_i ⊗ b'_j` with
    /// the Koszul sign `(−1)^{deg b'_j · deg b_k}`.
    pub fn kunneth(&self, other: &QuantumAlgebra) -> Result<QuantumAlgebra, QuantumError> {
        if self.field != other.field {
            return Err(NovikovError::FieldMismatch(self.field, other.field).into());
        }
        let (n1, n2) = (self.dim(), other.dim());
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut classes = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                classes.push(BasisClass {
                    label: format!("{}⊗{}", self.basis.label(i), other.basis.label(j)),
                    degree: self.basis.degree(i) + other.basis.degree(j),
                });
            }
        }
        let basis = GradedBasis::new(
            classes,
            self.basis.dimension_2n() + other.basis.dimension_2n(),
        )?;
        let mut entries = BTreeMap::new();
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n1 {
                    for l in 0..n2 {
                        let left = &self.table[i][k];
                        let right = &other.table[j][l];
                        let mut v = QHElement::zero(self.field);
                        for (a, la) in left.terms() {
                            for (b, lb) in right.terms() {
                                let lam = la.checked_mul(lb)?;
                                v = v.checked_add(&QHElement::from_lambda(idx(a, b), lam))?;
                            }
                        }
                        if self.field == BaseField::Qmodel
                            && (other.basis.degree(j) * self.basis.degree(k)) % 2 == 1
                        {
                            v = v.neg();
                        }
                        entries.insert((idx(i, j), idx(k, l)), v);
                    }
                }
            }
        }
        let kappa = match (&self.kappa, &other.kappa) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        };
        QuantumAlgebra::new(
            self.field,
            basis,
            self.gamma.sum(&other.gamma),
            kappa,
            entries,
        )
    }

    pub fn is_semisimple(&self) -> Result<Semisimplicity, QuantumError> {
        semisimple::analyse(self)
    }

    pub fn is_semisimple_with(&self, idempotents: &[QHElement]) -> Result<Semisimplicity, QuantumError> {
        semisimple::verify_decomposition(self, idempotents)
    }
}

/// True when the graded sign `(−1)^{ab}` is negative.
fn graded_sign(a: u32, b: u32) -> bool {
    (a * b) % 2 == 1
}

/// `deg S > dim L + 1 − N_L`, with `n_l = None` meaning `N_L = ∞`.
pub fn albers_check(dim_l: i64, n_l: Option<i64>, deg_s: i64) -> Result<bool, QuantumError> {
    match n_l {
        None => Ok(true),
        Some(n) if n < 2 => Err(QuantumError::Argument("N_L must be at least 2".into())),
        Some(n) => Ok(deg_s > dim_l + 1 - n),
    }
}

/// Number `m` of pairwise disjoint Lagrangian spheres forcing
/// non-semisimplicity: `m > β + 1`.
pub fn semisimplicity_obstruction(m: i64, beta: i64) -> Result<bool, QuantumError> {
    if m < 1 || beta < 0 {
        return Err(QuantumError::Argument("need m ≥ 1 and β ≥ 0".into()));
    }
    Ok(m > beta + 1)
}
