//! Semisimplicity of the degree-`2n` part `QH_{2n}` as a `K`-algebra.

use num_rational::BigRational;

use super::{QHElement, QuantumAlgebra, QuantumError};
use crate::novikov::linalg::{self, Matrix};
use crate::novikov::{BaseField, ExtRational, NovikovScalar, PeriodGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemisimpleWitness {
    /// Nonzero determinant of the trace form (characteristic 0 only).
    TraceForm { determinant: NovikovScalar },
    /// The algebra is `K[X]/(X^m − c)` with an irreducible polynomial.
    FieldPresentation {
        generator: QHElement,
        m: usize,
        constant: NovikovScalar,
    },
    /// Orthogonal idempotents summing to the unity with field blocks.
    Decomposition {
        idempotents: Vec<QHElement>,
        block_dims: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Semisimplicity {
    Semisimple(SemisimpleWitness),
    /// A nonzero nilpotent element of `QH_{2n}`.
    NotSemisimple(QHElement),
    Inconclusive(String),
}

impl Semisimplicity {
    pub fn is_semisimple(&self) -> bool {
        matches!(self, Semisimplicity::Semisimple(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Semisimplicity::Semisimple(_) => "semisimple",
            Semisimplicity::NotSemisimple(_) => "not-semisimple",
            Semisimplicity::Inconclusive(_) => "inconclusive",
        }
    }
}

/// `QH_{2n}` in the basis `e_i = b_i q^{(2n − deg b_i)/2}` over even classes.
pub(crate) struct EvenPart<'a> {
    alg: &'a QuantumAlgebra,
    classes: Vec<usize>,
    shifts: Vec<i64>,
    consts: Vec<Vec<Vec<NovikovScalar>>>,
}

impl<'a> EvenPart<'a> {
    pub(crate) fn new(alg: &'a QuantumAlgebra) -> Result<Self, QuantumError> {
        let top = alg.basis().dimension_2n() as i64;
        let classes: Vec<usize> = (0..alg.dim())
            .filter(|&i| alg.basis().degree(i) % 2 == 0)
            .collect();
        let shifts: Vec<i64> = classes
            .iter()
            .map(|&i| (top - alg.basis().degree(i) as i64) / 2)
            .collect();
        let mut part = EvenPart {
            alg,
            classes,
            shifts,
            consts: Vec::new(),
        };
        let m = part.classes.len();
        let mut consts = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let prod = alg.qprod(&part.element_of(i), &part.element_of(j))?;
                consts[i][j] = part
                    .to_vec(&prod)
                    .ok_or_else(|| QuantumError::Argument("product leaves QH_2n".into()))?;
            }
        }
        part.consts = consts;
        Ok(part)
    }

    pub(crate) fn dim(&self) -> usize {
        self.classes.len()
    }

    fn field(&self) -> BaseField {
        self.alg.field()
    }

    fn element_of(&self, i: usize) -> QHElement {
        QHElement::term(
            NovikovScalar::one(self.alg.field()),
            self.classes[i],
            self.shifts[i],
        )
    }

    pub(crate) fn to_element(&self, v: &[NovikovScalar]) -> QHElement {
        let mut out = QHElement::zero(self.field());
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let t = QHElement::term(c.clone(), self.classes[i], self.shifts[i]);
                out = out.checked_add(&t).expect("same field");
            }
        }
        out
    }

    /// Coordinates of an element of `QH_{2n}`; `None` if it has other degrees.
    pub(crate) fn to_vec(&self, x: &QHElement) -> Option<Vec<NovikovScalar>> {
        let mut v = vec![NovikovScalar::zero(self.field()); self.dim()];
        for (cls, lam) in x.terms() {
            let pos = self.classes.iter().position(|&c| c == cls)?;
            for (k, c) in lam.terms() {
                if k != self.shifts[pos] {
                    return None;
                }
                v[pos] = c.clone();
            }
        }
        Some(v)
    }

    pub(crate) fn mul(&self, x: &[NovikovScalar], y: &[NovikovScalar]) -> Vec<NovikovScalar> {
        let f = self.field();
        let m = self.dim();
        let mut out = vec![NovikovScalar::zero(f); m];
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..m {
                    let c = &self.consts[i][j][k];
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    fn unit_vec(&self, i: usize) -> Vec<NovikovScalar> {
        let f = self.field();
        let mut v = vec![NovikovScalar::zero(f); self.dim()];
        v[i] = NovikovScalar::one(f);
        v
    }

    fn unity_vec(&self) -> Vec<NovikovScalar> {
        let pos = self
            .classes
            .iter()
            .position(|&c| c == self.alg.basis().unity())
            .expect("unity is even");
        self.unit_vec(pos)
    }

    /// Matrix of left multiplication `L_x` (columns `x·e_j`).
    fn mult_matrix(&self, x: &[NovikovScalar]) -> Matrix {
        let m = self.dim();
        let cols: Vec<Vec<NovikovScalar>> = (0..m).map(|j| self.mul(x, &self.unit_vec(j))).collect();
        (0..m)
            .map(|r| (0..m).map(|c| cols[c][r].clone()).collect())
            .collect()
    }

    fn trace(&self, x: &[NovikovScalar]) -> NovikovScalar {
        let l = self.mult_matrix(x);
        (0..self.dim()).fold(NovikovScalar::zero(self.field()), |acc, i| &acc + &l[i][i])
    }

    fn trace_form(&self) -> Matrix {
        let m = self.dim();
        let traces: Vec<NovikovScalar> = (0..m).map(|k| self.trace(&self.unit_vec(k))).collect();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        self.consts[i][j]
                            .iter()
                            .zip(&traces)
                            .fold(NovikovScalar::zero(self.field()), |acc, (c, t)| {
                                &acc + &(c * t)
                            })
                    })
                    .collect()
            })
            .collect()
    }

    fn is_nilpotent(&self, x: &[NovikovScalar]) -> bool {
        if x.iter().all(|c| c.is_zero()) {
            return false;
        }
        let mut p = x.to_vec();
        for _ in 0..self.dim() {
            p = self.mul(&p, x);
            if p.iter().all(|c| c.is_zero()) {
                return true;
            }
        }
        false
    }

    /// Tries `X = candidate` inside the block with unity `unit` and
    /// dimension `r`: checks `X^r = c·unit` with `unit, X, …, X^{r−1}`
    /// independent and `X^r − c` irreducible.
    fn power_presentation(
        &self,
        unit: &[NovikovScalar],
        candidate: &[NovikovScalar],
        r: usize,
        gamma: &PeriodGroup,
    ) -> Option<NovikovScalar> {
        let mut powers = vec![unit.to_vec()];
        for _ in 1..=r {
            let next = self.mul(powers.last().unwrap(), candidate);
            powers.push(next);
        }
        let last = powers.pop().unwrap();
        let rows: Matrix = powers.clone();
        if linalg::rank(&rows) != r {
            return None;
        }
        let pos = unit.iter().position(|c| !c.is_zero())?;
        let c = last[pos].checked_div(&unit[pos]).ok()?;
        let expect: Vec<NovikovScalar> = unit.iter().map(|u| u * &c).collect();
        if last != expect || c.is_zero() {
            return None;
        }
        if binomial_irreducible(self.field(), &c, r, gamma) {
            Some(c)
        } else {
            None
        }
    }
}

fn primes_dividing(m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn valuation_in_multiple(v: &BigRational, mult: usize, gamma: &PeriodGroup) -> bool {
    let g = gamma.generator() * BigRational::from_integer(mult.into());
    PeriodGroup::new(g).contains(v)
}

/// Sufficient test that `X^m − c` is irreducible over `K_Γ`: for each prime
/// `p | m`, `c` is not a `p`-th power because `ν(c) ∉ pΓ`; when `4 | m`, also
/// `c ∉ −4K⁴`.
pub(crate) fn binomial_irreducible(
    field: BaseField,
    c: &NovikovScalar,
    m: usize,
    gamma: &PeriodGroup,
) -> bool {
    if m == 1 {
        return true;
    }
    let ExtRational::Finite(v) = c.valuation() else {
        return false;
    };
    for p in primes_dividing(m) {
        if valuation_in_multiple(&v, p, gamma) {
            return false;
        }
    }
    if m % 4 == 0 && field != BaseField::F2 && valuation_in_multiple(&v, 4, gamma) {
        return false;
    }
    true
}

pub(crate) fn analyse(alg: &QuantumAlgebra) -> Result<Semisimplicity, QuantumError> {
    let part = EvenPart::new(alg)?;
    let m = part.dim();
    let f = alg.field();
    if f == BaseField::Qmodel {
        let t = part.trace_form();
        let det = linalg::determinant(f, &t);
        if !det.is_zero() {
            return Ok(Semisimplicity::Semisimple(SemisimpleWitness::TraceForm {
                determinant: det,
            }));
        }
        for v in linalg::nullspace(f, &t, m) {
            if part.is_nilpotent(&v) {
                return Ok(Semisimplicity::NotSemisimple(part.to_element(&v)));
            }
        }
        return Ok(Semisimplicity::Inconclusive(
            "trace form degenerate but no nilpotent kernel vector".into(),
        ));
    }
    for i in 0..m {
        let e = part.unit_vec(i);
        if part.is_nilpotent(&e) {
            return Ok(Semisimplicity::NotSemisimple(part.to_element(&e)));
        }
    }
    if let Some(w) = field_presentation(&part, alg.gamma()) {
        return Ok(Semisimplicity::Semisimple(w));
    }
    Ok(Semisimplicity::Inconclusive(
        "no certificate found in characteristic 2".into(),
    ))
}

fn field_presentation(part: &EvenPart, gamma: &PeriodGroup) -> Option<SemisimpleWitness> {
    let unit = part.unity_vec();
    let m = part.dim();
    for i in 0..m {
        let cand = part.unit_vec(i);
        if cand == unit {
            continue;
        }
        if let Some(c) = part.power_presentation(&unit, &cand, m, gamma) {
            return Some(SemisimpleWitness::FieldPresentation {
                generator: part.to_element(&cand),
                m,
                constant: c,
            });
        }
    }
    if m == 1 {
        return Some(SemisimpleWitness::FieldPresentation {
            generator: part.to_element(&unit),
            m: 1,
            constant: NovikovScalar::one(part.field()),
        });
    }
    None
}

/// Verifies a proposed splitting into orthogonal idempotents and certifies
/// each block `e·QH_{2n}` as a field.
pub(crate) fn verify_decomposition(
    alg: &QuantumAlgebra,
    idempotents: &[QHElement],
) -> Result<Semisimplicity, QuantumError> {
    let part = EvenPart::new(alg)?;
    let f = alg.field();
    let mut vecs = Vec::new();
    for e in idempotents {
        let v = part
            .to_vec(e)
            .ok_or_else(|| QuantumError::Argument("idempotent not in QH_2n".into()))?;
        vecs.push(v);
    }
    let mut sum = vec![NovikovScalar::zero(f); part.dim()];
    for (a, va) in vecs.iter().enumerate() {
        if part.mul(va, va) != *va || va.iter().all(|c| c.is_zero()) {
            return Ok(Semisimplicity::Inconclusive(format!(
                "element {a} is not a nonzero idempotent"
            )));
        }
        for (b, vb) in vecs.iter().enumerate().skip(a + 1) {
            if part.mul(va, vb).iter().any(|c| !c.is_zero()) {
                return Ok(Semisimplicity::Inconclusive(format!(
                    "elements {a} and {b} are not orthogonal"
                )));
            }
        }
        sum = sum.iter().zip(va).map(|(x, y)| x + y).collect();
    }
    if sum != part.unity_vec() {
        return Ok(Semisimplicity::Inconclusive(
            "idempotents do not sum to the unity".into(),
        ));
    }
    let mut dims = Vec::new();
    for (a, v) in vecs.iter().enumerate() {
        let r = linalg::rank(&part.mult_matrix(v));
        if r > 1 {
            let ok = (0..part.dim()).any(|i| {
                let cand = part.mul(v, &part.unit_vec(i));
                cand != *v && part.power_presentation(v, &cand, r, alg.gamma()).is_some()
            });
            if !ok {
                return Ok(Semisimplicity::Inconclusive(format!(
                    "block {a} of dimension {r} not certified as a field"
                )));
            }
        }
        dims.push(r);
    }
    Ok(Semisimplicity::Semisimple(SemisimpleWitness::Decomposition {
        idempotents: idempotents.to_vec(),
        block_dims: dims,
    }))
}
