use nalgebra::DMatrix;

use super::{complex_structure, is_symmetric, IndexError};

/// One piece `exp(t·J·S)` of a [`MatrixPath`].
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub generator: DMatrix<f64>,
    pub duration: f64,
}

/// Identity-based path in `Sp(2k)` that multiplies on the left by
/// `exp(t·J·S_i)` over each segment in turn.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPath {
    k: usize,
    segments: Vec<Segment>,
}

impl MatrixPath {
    pub fn new(k: usize, segments: Vec<Segment>) -> Result<Self, IndexError> {
        if k == 0 {
            return Err(IndexError::Invalid("k must be positive".into()));
        }
        if segments.is_empty() {
            return Err(IndexError::Invalid("a path needs at least one segment".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if s.generator.nrows() != 2 * k || s.generator.ncols() != 2 * k {
                return Err(IndexError::Dimension(format!(
                    "segment {i}: generator must be {0}×{0}",
                    2 * k
                )));
            }
            if !is_symmetric(&s.generator, 1e-9) {
                return Err(IndexError::Invalid(format!("segment {i}: generator not symmetric")));
            }
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return Err(IndexError::Invalid(format!("segment {i}: duration must be positive")));
            }
        }
        Ok(MatrixPath { k, segments })
    }

    /// `exp(t·J·S)` for `t ∈ [0, duration]`.
    pub fn single(generator: DMatrix<f64>, duration: f64) -> Result<Self, IndexError> {
        let k = generator.nrows() / 2;
        Self::new(k, vec![Segment { generator, duration }])
    }

    /// Counterclockwise rotation by `2π·turns` in every coordinate plane.
    pub fn rotation(k: usize, turns: f64) -> Self {
        Self::single(DMatrix::identity(2 * k, 2 * k), 2.0 * std::f64::consts::PI * turns)
            .expect("valid rotation")
    }

    pub fn constant(k: usize) -> Self {
        Self::single(DMatrix::zeros(2 * k, 2 * k), 1.0).expect("valid constant path")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Runs `self`, then `other` starting from the end point of `self`.
    pub fn concat(&self, other: &MatrixPath) -> Result<MatrixPath, IndexError> {
        if self.k != other.k {
            return Err(IndexError::Dimension("concatenated paths differ in dimension".into()));
        }
        let mut segs = self.segments.clone();
        segs.extend(other.segments.iter().cloned());
        MatrixPath::new(self.k, segs)
    }

    pub fn endpoint(&self) -> DMatrix<f64> {
        let j = complex_structure(self.k);
        let mut a = DMatrix::identity(2 * self.k, 2 * self.k);
        for s in &self.segments {
            a = (&j * &s.generator * s.duration).exp() * a;
        }
        a
    }

    pub fn to_path(&self) -> SymPath {
        SymPath::Exp(ExpPath::new(self))
    }
}

/// [`MatrixPath`] reparametrized over `τ ∈ [0, 1]` with cached segment
/// start points.
#[derive(Debug, Clone)]
pub struct ExpPath {
    /// `J·S_i·T`, the τ-derivative generator of each segment.
    gens: Vec<DMatrix<f64>>,
    starts: Vec<DMatrix<f64>>,
    /// Segment boundaries in τ.
    knots: Vec<f64>,
}

impl ExpPath {
    fn new(p: &MatrixPath) -> Self {
        let j = complex_structure(p.k);
        let total = p.total_duration();
        let mut gens = Vec::new();
        let mut starts = Vec::new();
        let mut knots = vec![0.0];
        let mut a = DMatrix::identity(2 * p.k, 2 * p.k);
        let mut acc = 0.0;
        for s in &p.segments {
            let g = &j * &s.generator * total;
            starts.push(a.clone());
            a = (&g * (s.duration / total)).exp() * a;
            gens.push(g);
            acc += s.duration;
            knots.push(acc / total);
        }
        *knots.last_mut().unwrap() = 1.0;
        ExpPath { gens, starts, knots }
    }

    fn segment_for(&self, hint: f64) -> usize {
        let n = self.gens.len();
        (0..n)
            .find(|&i| hint < self.knots[i + 1])
            .unwrap_or(n - 1)
    }

    fn eval(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let i = self.segment_for(hint);
        let g = &self.gens[i];
        let a = (g * (tau - self.knots[i])).exp() * &self.starts[i];
        let d = g * &a;
        (a, d)
    }
}

/// A smooth-by-pieces path `τ ↦ A(τ)` in a symplectic group on `[0, 1]`,
/// with exact derivatives.
#[derive(Debug, Clone)]
pub enum SymPath {
    Exp(ExpPath),
    /// Pointwise product `A(τ)·B(τ)`.
    Product(Box<SymPath>, Box<SymPath>),
    /// `B·A(τ)·B⁻¹`.
    Conjugate {
        b: DMatrix<f64>,
        b_inv: DMatrix<f64>,
        inner: Box<SymPath>,
    },
    /// `I ⊕ A(τ)`.
    Stabilized(Box<SymPath>),
    /// `A(τ)·M` for a fixed `M`.
    Shifted { inner: Box<SymPath>, right: DMatrix<f64> },
}

impl SymPath {
    pub fn dim(&self) -> usize {
        match self {
            SymPath::Exp(e) => e.starts[0].nrows(),
            SymPath::Product(a, _) => a.dim(),
            SymPath::Conjugate { b, .. } => b.nrows(),
            SymPath::Stabilized(a) => 2 * a.dim(),
            SymPath::Shifted { right, .. } => right.nrows(),
        }
    }

    /// Sorted breakpoints including 0 and 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = match self {
            SymPath::Exp(e) => e.knots.clone(),
            SymPath::Product(a, b) => {
                let mut v = a.breakpoints();
                v.extend(b.breakpoints());
                v
            }
            SymPath::Conjugate { inner, .. } | SymPath::Stabilized(inner) | SymPath::Shifted { inner, .. } => {
                inner.breakpoints()
            }
        };
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        v
    }

    /// `(A(τ), A′(τ))`, using the smooth piece that contains `hint`.
    pub fn eval(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        match self {
            SymPath::Exp(e) => e.eval(tau, hint),
            SymPath::Product(a, b) => {
                let (x, dx) = a.eval(tau, hint);
                let (y, dy) = b.eval(tau, hint);
                (&x * &y, &dx * &y + &x * &dy)
            }
            SymPath::Conjugate { b, b_inv, inner } => {
                let (x, dx) = inner.eval(tau, hint);
                (b * x * b_inv, b * dx * b_inv)
            }
            SymPath::Stabilized(inner) => {
                let (x, dx) = inner.eval(tau, hint);
                let n = x.nrows();
                let mut a = DMatrix::identity(2 * n, 2 * n);
                let mut d = DMatrix::zeros(2 * n, 2 * n);
                a.view_mut((n, n), (n, n)).copy_from(&x);
                d.view_mut((n, n), (n, n)).copy_from(&dx);
                (a, d)
            }
            SymPath::Shifted { inner, right } => {
                let (x, dx) = inner.eval(tau, hint);
                (x * right, dx * right)
            }
        }
    }

    pub fn at(&self, tau: f64) -> DMatrix<f64> {
        self.eval(tau, tau.min(1.0 - 1e-12)).0
    }

    pub fn product(a: SymPath, b: SymPath) -> SymPath {
        SymPath::Product(Box::new(a), Box::new(b))
    }

    pub fn shifted(inner: SymPath, right: DMatrix<f64>) -> SymPath {
        SymPath::Shifted {
            inner: Box::new(inner),
            right,
        }
    }

    pub fn conjugate(b: &DMatrix<f64>, inner: SymPath) -> Result<SymPath, IndexError> {
        let b_inv = b
            .clone()
            .try_inverse()
            .ok_or_else(|| IndexError::Invalid("conjugating matrix is singular".into()))?;
        Ok(SymPath::Conjugate {
            b: b.clone(),
            b_inv,
            inner: Box::new(inner),
        })
    }
}
