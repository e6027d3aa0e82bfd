//! The toric model of the partial quasi-state: on pullbacks `Φ*f` of
//! functions on the moment polytope, `ζ(Φ*f) = f(p_spec)`.
//!
//! This is the value forced on pullback test functions by superheaviness of
//! the special fiber (`inf_L H ≤ ζ(H) ≤ sup_L H` with `H` constant on the
//! fiber `L`). It is not a quasi-state on all of `C(M)`, and heaviness
//! statements here are relative to the pullback test class only.

mod fourier;
mod pl;
pub mod random;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use fourier::{fourier_reduction_demo, FourierConfig, FourierReport, FourierRow, SmoothSampler};
pub use pl::{cell_vertices, Affine, Halfspace, PLFunction};

use crate::novikov::rat;
use crate::toric::qlinalg::{dot, sub, Point};
use crate::toric::{fmt_point, ConvexBody, MomentData, ToricError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QStateError {
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("dimension {0} does not match")]
    Dimension(usize),
    #[error("simplex {0} is degenerate")]
    DegenerateSimplex(usize),
    #[error("simplices {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("values are discontinuous at vertex {0}")]
    Discontinuous(String),
    #[error("the functions have no common full-dimensional domain")]
    EmptyDomain,
    #[error("p_spec = {0} lies outside the function's domain")]
    OutsideDomain(String),
    #[error("sampler does not decay: |H| = {boundary:e} on the support box boundary")]
    NonDecaying { boundary: f64 },
    #[error("the Fourier demo supports dimension ≤ 2, got {0}")]
    Unsupported(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Monotone moment data with its special point cached.
#[derive(Debug, Clone)]
pub struct ModelState {
    moment: MomentData,
    p_spec: Point,
}

impl ModelState {
    pub fn new(moment: MomentData) -> Result<Self, QStateError> {
        let p_spec = moment.special_point()?.point;
        Ok(ModelState { moment, p_spec })
    }

    pub fn moment(&self) -> &MomentData {
        &self.moment
    }

    pub fn p_spec(&self) -> &Point {
        &self.p_spec
    }

    pub fn dimension(&self) -> usize {
        self.p_spec.len()
    }

    /// `ζ(Φ*f) = f(p_spec)`, exactly.
    pub fn zeta(&self, f: &PLFunction) -> Result<BigRational, QStateError> {
        if f.dimension() != self.dimension() {
            return Err(QStateError::Dimension(f.dimension()));
        }
        f.evaluate(&self.p_spec)
            .ok_or_else(|| QStateError::OutsideDomain(fmt_point(&self.p_spec)))
    }

    /// Heaviness of a finite union of closed bodies over the pullback test
    /// class, which reduces to `p_spec ∈ X̄`.
    pub fn model_heavy(&self, bodies: &[ConvexBody]) -> HeavyReport {
        let containing = bodies.iter().position(|b| b.contains(&self.p_spec));
        HeavyReport {
            heavy: containing.is_some(),
            superheavy: containing.is_some(),
            containing_body: containing,
            test_class: TEST_CLASS,
        }
    }

    /// Checks that at most one body of a pairwise-disjoint family is heavy.
    pub fn intersection_property(&self, family: &[ConvexBody]) -> Result<IntersectionReport, QStateError> {
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                if !disjoint(&family[i], &family[j])? {
                    return Err(QStateError::Invalid(format!("bodies {i} and {j} intersect")));
                }
            }
        }
        let heavy: Vec<usize> = (0..family.len())
            .filter(|&i| self.model_heavy(std::slice::from_ref(&family[i])).heavy)
            .collect();
        Ok(IntersectionReport {
            bodies: family.len(),
            holds: heavy.len() <= 1,
            heavy,
        })
    }

    /// Runs every model axiom exactly over the sample and all its pairs.
    pub fn axiom_suite(&self, sample: &[PLFunction]) -> Result<AxiomReport, QStateError> {
        let mut r = AxiomReport::default();
        let delta = &self.moment.polytope;
        let one = PLFunction::constant(delta, BigRational::one());
        r.record("normalization", self.zeta(&one)? == BigRational::one(), || "ζ(1) ≠ 1".into());

        let alphas = [BigRational::zero(), rat(1, 3), rat(2, 1), rat(7, 5)];
        let shifts = [rat(5, 1), rat(-3, 4)];
        let z: Vec<BigRational> = sample.iter().map(|f| self.zeta(f)).collect::<Result<_, _>>()?;
        for (i, f) in sample.iter().enumerate() {
            for a in &alphas {
                let ok = self.zeta(&f.scale(a))? == a * &z[i];
                r.record("semi_homogeneity", ok, || format!("f{i}, α = {a}"));
            }
            for c in &shifts {
                let ok = self.zeta(&f.add_constant(c))? == &z[i] + c;
                r.record("constants", ok, || format!("f{i}, c = {c}"));
            }
            self.check_vanishing(&mut r, i, f)?;
            if let Some(cut) = self.cut_function(f)? {
                self.check_vanishing(&mut r, i, &cut)?;
            }
        }
        for i in 0..sample.len() {
            for j in i + 1..sample.len() {
                let (f, g) = (&sample[i], &sample[j]);
                let cells = f.common_cells(g);
                let values = pl::refinement_values_of(&cells);
                if values.is_empty() {
                    continue;
                }
                let sum = pl::sum_of_cells(f.dimension(), &cells)?;
                let ok = self.zeta(&sum)? <= &z[i] + &z[j];
                r.record("triangle", ok, || format!("f{i}, f{j}"));
                // Smallest shift c with f ≤ g + c at every refinement vertex.
                let shift = values.iter().map(|(_, x, y)| x - y).max().unwrap();
                let ok = z[i] <= self.zeta(&g.add_constant(&shift))?;
                r.record("monotonicity", ok, || format!("f{i} ≤ f{j} + {shift}"));
                if values.iter().all(|(_, x, y)| x <= y) {
                    r.record("monotonicity", z[i] <= z[j], || format!("f{i} ≤ f{j}"));
                }
                if values.iter().all(|(_, x, y)| y <= x) {
                    r.record("monotonicity", z[j] <= z[i], || format!("f{j} ≤ f{i}"));
                }
                let bound = values.iter().map(|(_, x, y)| (x - y).abs()).max().unwrap();
                let ok = (&z[i] - &z[j]).abs() <= bound;
                r.record("lipschitz", ok, || format!("f{i}, f{j}"));
            }
        }
        Ok(r)
    }

    fn check_vanishing(&self, r: &mut AxiomReport, i: usize, f: &PLFunction) -> Result<(), QStateError> {
        if !self.moment.compressible {
            return Ok(());
        }
        let Some(y) = f.support_hull() else { return Ok(()) };
        let shifted = ConvexBody::new(y.dimension(), y.generators().iter().map(|g| sub(g, &self.p_spec)).collect())?;
        if self.moment.stable_displaceability_certificate(&shifted)?.is_some() {
            let ok = self.zeta(f)?.is_zero();
            r.record("vanishing", ok, || format!("f{i} with certified support"));
        }
        Ok(())
    }

    /// `max(0, ℓ − b)` on `Δ`, with `ℓ` the gradient of `f` on its first
    /// simplex and `b` halfway between `ℓ(p_spec)` and `max_Δ ℓ`. Its support
    /// misses `p_spec`, so it exercises the vanishing clause.
    fn cut_function(&self, f: &PLFunction) -> Result<Option<PLFunction>, QStateError> {
        let k = self.dimension();
        let delta = &self.moment.polytope;
        let mut grad = gradient_of(f);
        if grad.iter().all(|x| x.is_zero()) {
            grad = (0..k).map(|j| if j == 0 { BigRational::one() } else { BigRational::zero() }).collect();
        }
        let at_spec = dot(&grad, &self.p_spec);
        let top = delta.vertices().iter().map(|v| dot(&grad, v)).max().unwrap();
        if top <= at_spec {
            return Ok(None);
        }
        let b = (&at_spec + &top) / BigRational::from_integer(2.into());
        let facets: Vec<Halfspace> = delta.facets().iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        let mut upper = facets.clone();
        upper.push((grad.clone(), b.clone()));
        let mut lower = facets;
        lower.push((grad.iter().map(|x| -x).collect(), -b.clone()));
        let zero = Affine {
            gradient: vec![BigRational::zero(); k],
            constant: BigRational::zero(),
        };
        let ramp = Affine {
            gradient: grad,
            constant: -b,
        };
        Ok(Some(PLFunction::from_pieces(k, &[(upper, ramp), (lower, zero)])?))
    }
}

fn gradient_of(f: &PLFunction) -> Point {
    let s = &f.simplices()[0];
    let p0 = &f.vertices()[s[0]];
    let rows: Vec<Point> = s[1..].iter().map(|&i| sub(&f.vertices()[i], p0)).collect();
    let rhs: Vec<BigRational> = s[1..].iter().map(|&i| &f.values()[i] - &f.values()[s[0]]).collect();
    crate::toric::qlinalg::solve(&rows, &rhs).expect("non-degenerate simplex")
}

/// Two bodies are disjoint iff `0 ∉ A − B`.
pub fn disjoint(a: &ConvexBody, b: &ConvexBody) -> Result<bool, QStateError> {
    let diffs: Vec<Point> = a
        .generators()
        .iter()
        .flat_map(|x| b.generators().iter().map(move |y| sub(x, y)))
        .collect();
    Ok(!ConvexBody::new(a.dimension(), diffs)?.contains_origin())
}

pub const TEST_CLASS: &str = "pullbacks Φ*f of functions f on the moment polytope";

#[derive(Debug, Clone, PartialEq)]
pub struct HeavyReport {
    pub heavy: bool,
    pub superheavy: bool,
    pub containing_body: Option<usize>,
    pub test_class: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionReport {
    pub bodies: usize,
    pub heavy: Vec<usize>,
    pub holds: bool,
}

/// Instances checked and violations found, per axiom.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AxiomReport {
    pub checks: std::collections::BTreeMap<&'static str, usize>,
    pub violations: Vec<(&'static str, String)>,
}

impl AxiomReport {
    fn record(&mut self, axiom: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        *self.checks.entry(axiom).or_default() += 1;
        if !ok {
            self.violations.push((axiom, witness()));
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, axiom: &str) -> usize {
        self.checks.get(axiom).copied().unwrap_or(0)
    }
}
