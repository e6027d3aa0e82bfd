use num_rational::BigRational;

use super::{ChainElement, ComplexError, DecoratedComplex};
use crate::novikov::{ExtRational, NovikovScalar};

/// Normalized vectors `e_k = x_{p_k} + o(x_{p_k})` kept in reduced form:
/// every `e_k` has coefficient 0 on the pivots of the others.
#[derive(Debug, Clone, Default)]
struct Reducer {
    pivots: Vec<usize>,
    vecs: Vec<ChainElement>,
    /// Tracked companions, transformed alongside `vecs`.
    tags: Vec<ChainElement>,
}

impl Reducer {
    /// Subtracts the pivot components of `w` (and the matching multiples of
    /// the tags from `t`).
    fn reduce(&self, w: &mut ChainElement, t: &mut ChainElement) {
        for k in 0..self.vecs.len() {
            if let Some(c) = w.get(self.pivots[k]).cloned() {
                let c = -c;
                w.axpy(&c, &self.vecs[k]);
                t.axpy(&c, &self.tags[k]);
            }
        }
    }

    /// Adds a reduced nonzero vector, normalizing by its dominant
    /// coefficient and clearing its pivot column from earlier entries.
    fn push(
        &mut self,
        v: &DecoratedComplex,
        w: ChainElement,
        t: ChainElement,
        clear_others: bool,
    ) -> Result<(), ComplexError> {
        let (p, lam) = v.dominant(&w)?;
        let inv = lam.inverse()?;
        let e = w.scale(&inv);
        let te = t.scale(&inv);
        if clear_others {
            for k in 0..self.vecs.len() {
                if let Some(c) = self.vecs[k].get(p).cloned() {
                    let c = -c;
                    self.vecs[k].axpy(&c, &e);
                    self.tags[k].axpy(&c, &te);
                }
            }
        }
        self.pivots.push(p);
        self.vecs.push(e);
        self.tags.push(te);
        Ok(())
    }
}

/// Normal basis of the span of `spanning`, built by processing the inputs
/// in order: each is reduced against the normal vectors found so far and,
/// if nonzero, normalized at its dominant index.
pub fn normal_basis(v: &DecoratedComplex, spanning: &[ChainElement]) -> Result<Vec<ChainElement>, ComplexError> {
    if let Some((i, j)) = v.genericity_witness() {
        return Err(ComplexError::NotGeneric(v.label(i).into(), v.label(j).into()));
    }
    let f = v.field();
    let mut r = Reducer::default();
    for s in spanning {
        let mut w = s.clone();
        let mut t = ChainElement::zero(f);
        r.reduce(&mut w, &mut t);
        if !w.is_zero() {
            r.push(v, w, t, true)?;
        }
    }
    Ok(r.vecs)
}

/// Spectral basis: normal `g`'s spanning `Im d`, extended by normal `h`'s to
/// a basis of `Ker d`, and the remaining preferred vectors `x`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    g: Vec<ChainElement>,
    g_pivots: Vec<usize>,
    /// `d(g_pre[k]) = g[k]`.
    g_pre: Vec<ChainElement>,
    h: Vec<ChainElement>,
    h_pivots: Vec<usize>,
    x: Vec<usize>,
}

impl SpectralBasis {
    pub(crate) fn compute(v: &DecoratedComplex) -> Result<Self, ComplexError> {
        if let Some((i, j)) = v.genericity_witness() {
            return Err(ComplexError::NotGeneric(v.label(i).into(), v.label(j).into()));
        }
        let f = v.field();
        let mut image = Reducer::default();
        let mut cycles = Vec::new();
        for i in 0..v.dim() {
            let mut w = v.column(i).clone();
            let mut y = ChainElement::basis(f, i);
            image.reduce(&mut w, &mut y);
            if w.is_zero() {
                cycles.push(y);
            } else {
                image.push(v, w, y, true)?;
            }
        }
        // The g's stay fixed; h's are reduced against them and among
        // themselves only.
        let mut kernel = Reducer::default();
        for z in cycles {
            let mut w = z;
            let mut t = ChainElement::zero(f);
            image.reduce(&mut w, &mut t);
            kernel.reduce(&mut w, &mut t);
            if !w.is_zero() {
                kernel.push(v, w, t, true)?;
            }
        }
        let used: std::collections::BTreeSet<usize> =
            image.pivots.iter().chain(&kernel.pivots).copied().collect();
        let x = (0..v.dim()).filter(|i| !used.contains(i)).collect();
        Ok(SpectralBasis {
            g: image.vecs,
            g_pivots: image.pivots,
            g_pre: image.tags,
            h: kernel.vecs,
            h_pivots: kernel.pivots,
            x,
        })
    }

    /// `dim H = p`.
    pub fn p(&self) -> usize {
        self.h.len()
    }

    /// `rank d = q`.
    pub fn q(&self) -> usize {
        self.g.len()
    }

    pub fn g_part(&self) -> &[ChainElement] {
        &self.g
    }

    pub fn h_part(&self) -> &[ChainElement] {
        &self.h
    }

    /// Chains with `d(g_preimages[k]) = g_part[k]`.
    pub fn g_preimages(&self) -> &[ChainElement] {
        &self.g_pre
    }

    pub fn x_part(&self) -> &[usize] {
        &self.x
    }

    pub fn g_dominant(&self) -> &[usize] {
        &self.g_pivots
    }

    pub fn h_dominant(&self) -> &[usize] {
        &self.h_pivots
    }

    /// Class `Σ λ_i [h_i]`.
    pub fn class(&self, v: &DecoratedComplex, lambdas: &[NovikovScalar]) -> Result<HomologyClass, ComplexError> {
        if lambdas.len() != self.p() {
            return Err(ComplexError::Dimension {
                expected: self.p(),
                got: lambdas.len(),
            });
        }
        let mut rep = ChainElement::zero(v.field());
        for (l, h) in lambdas.iter().zip(&self.h) {
            rep.axpy(l, h);
        }
        Ok(HomologyClass { representative: rep })
    }

    /// Coordinates `λ_i` of a cycle with respect to `[h_1], …, [h_p]`.
    pub fn coordinates(&self, v: &DecoratedComplex, z: &ChainElement) -> Result<Vec<NovikovScalar>, ComplexError> {
        if !v.differential(z).is_zero() {
            return Err(ComplexError::NotACycle);
        }
        let mut w = z.clone();
        for (k, g) in self.g.iter().enumerate() {
            if let Some(c) = w.get(self.g_pivots[k]).cloned() {
                w.axpy(&-c, g);
            }
        }
        Ok(self.h_pivots.iter().map(|&p| w.coeff(p)).collect())
    }

    /// `c(a) = max_i F(λ_i h_i) = max_i ν(λ_i) + F(x_{p_i})`.
    pub fn spectral_invariant(&self, v: &DecoratedComplex, a: &HomologyClass) -> Result<ExtRational, ComplexError> {
        let lam = self.coordinates(v, &a.representative)?;
        Ok(lam
            .iter()
            .zip(&self.h_pivots)
            .map(|(l, &p)| l.valuation().add_rational(&v.basis()[p].filter))
            .max()
            .unwrap_or(ExtRational::NegInf))
    }

    /// Independent route: reduce the representative by the normal basis of
    /// `Im d` alone; the remainder is the filter-minimal representative.
    pub fn spectral_invariant_by_reduction(
        &self,
        v: &DecoratedComplex,
        a: &HomologyClass,
    ) -> Result<ExtRational, ComplexError> {
        if !v.differential(&a.representative).is_zero() {
            return Err(ComplexError::NotACycle);
        }
        let mut w = a.representative.clone();
        for (k, g) in self.g.iter().enumerate() {
            if let Some(c) = w.get(self.g_pivots[k]).cloned() {
                w.axpy(&-c, g);
            }
        }
        Ok(v.filter_value(&w))
    }
}

/// Class in `H(V)`, held by a cycle representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    representative: ChainElement,
}

impl HomologyClass {
    pub fn from_cycle(v: &DecoratedComplex, z: ChainElement) -> Result<Self, ComplexError> {
        if !v.differential(&z).is_zero() {
            return Err(ComplexError::NotACycle);
        }
        Ok(HomologyClass { representative: z })
    }

    pub fn zero(v: &DecoratedComplex) -> Self {
        HomologyClass {
            representative: ChainElement::zero(v.field()),
        }
    }

    pub fn representative(&self) -> &ChainElement {
        &self.representative
    }

    pub fn add(&self, other: &HomologyClass) -> HomologyClass {
        HomologyClass {
            representative: self.representative.add(&other.representative),
        }
    }

    pub fn scale(&self, c: &NovikovScalar) -> HomologyClass {
        HomologyClass {
            representative: self.representative.scale(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    pub c1: ExtRational,
    pub c2: ExtRational,
    pub c_product: ExtRational,
    /// `c(a₁ ⊗ a₂)` recomputed by reducing against the image normal basis.
    pub c_product_by_reduction: ExtRational,
}

impl ProductReport {
    pub fn sum(&self) -> ExtRational {
        self.c1.add(&self.c2)
    }

    pub fn holds(&self) -> bool {
        self.sum() == self.c_product && self.c_product == self.c_product_by_reduction
    }

    /// `|c₁ + c₂ − c(a₁⊗a₂)|` when all are finite.
    pub fn defect(&self) -> Option<BigRational> {
        match (self.sum(), &self.c_product) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => {
                let d = a - b;
                Some(if d < BigRational::from_integer(0.into()) { -d } else { d })
            }
            _ => None,
        }
    }
}

pub(crate) fn verify_product_formula(
    v1: &DecoratedComplex,
    v2: &DecoratedComplex,
    a1: &HomologyClass,
    a2: &HomologyClass,
) -> Result<ProductReport, ComplexError> {
    let prod = v1.tensor(v2)?;
    if !v1.is_generic() || !v2.is_generic() || !prod.is_generic() {
        return Err(ComplexError::NotInGeneralPosition);
    }
    let b1 = v1.spectral_basis()?;
    let b2 = v2.spectral_basis()?;
    let bp = prod.spectral_basis()?;
    let c1 = b1.spectral_invariant(v1, a1)?;
    let c2 = b2.spectral_invariant(v2, a2)?;
    let rep = v1.tensor_chains(v2, &a1.representative, &a2.representative);
    let ap = HomologyClass::from_cycle(&prod, rep)?;
    let c_product = bp.spectral_invariant(&prod, &ap)?;
    let c_product_by_reduction = bp.spectral_invariant_by_reduction(&prod, &ap)?;
    Ok(ProductReport {
        c1,
        c2,
        c_product,
        c_product_by_reduction,
    })
}
