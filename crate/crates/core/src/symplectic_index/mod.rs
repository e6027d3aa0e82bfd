//! Robbin–Salamon, `Ind`, Conley–Zehnder and Maslov indices of paths of
//! Lagrangian subspaces and symplectic matrices.
//!
//! Conventions: coordinates `(q, p)`, `J = [[0, −I], [I, 0]]`,
//! `ω(u, v) = uᵀΩv` with `Ω = Jᵀ`, so `ω(u, Ju) = |u|²`. Segment paths
//! follow `A′ = J·S·A`; for `S = I` this is the counterclockwise rotation.

mod engine;
mod path;
pub mod random;

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use engine::{Frames, Space};
pub use path::{ExpPath, MatrixPath, Segment, SymPath};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symplectic (defect {0:.3e})")]
    NotSymplectic(f64),
    #[error("frame is not Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("non-regular crossing near t = {t} after regularization retries")]
    NonRegular { t: f64 },
    #[error("index not resolved (residual {residual:.3e})")]
    Unresolved { residual: f64 },
    #[error("path is not closed at the identity (distance {0:.3e})")]
    NotClosed(f64),
    #[error("Maslov index of a loop must be even, got {0}")]
    Odd(i64),
    #[error("transversality failed: {0}")]
    Transversality(String),
}

/// Numerical thresholds; all are configurable.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub symplectic: f64,
    pub lagrangian: f64,
    pub bisection: f64,
    /// Singular values below this count as kernel at a crossing.
    pub kernel: f64,
    pub zero_eigenvalue: f64,
    pub snap: f64,
    pub closed: f64,
    pub transversality: f64,
    pub initial_delta: f64,
    pub max_retries: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symplectic: 1e-9,
            lagrangian: 1e-9,
            bisection: 1e-9,
            kernel: 1e-6,
            zero_eigenvalue: 1e-7,
            snap: 1e-6,
            closed: 1e-6,
            transversality: 1e-7,
            initial_delta: 1e-3,
            max_retries: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRecord {
    pub t: f64,
    pub kernel_dimension: usize,
    pub signature: i64,
    pub at_endpoint: bool,
}

/// A half-integer index with the data that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexValue {
    /// Twice the index.
    pub halves: i64,
    /// Continuous estimate from the determinant-phase route.
    pub estimate: f64,
    /// `|estimate − halves/2|`.
    pub residual: f64,
    pub crossings: Vec<CrossingRecord>,
    /// The δ used when crossings had to be regularized.
    pub regularization: Option<f64>,
}

impl IndexValue {
    pub fn value(&self) -> f64 {
        self.halves as f64 / 2.0
    }
}

/// `[[0, −I], [I, 0]]` on `ℝ^{2k}`.
pub fn complex_structure(k: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        j[(k + i, i)] = 1.0;
        j[(i, k + i)] = -1.0;
    }
    j
}

/// Matrix `Ω` of the standard form, `ω(u, v) = uᵀΩv`.
pub fn standard_form(k: usize) -> DMatrix<f64> {
    complex_structure(k).transpose()
}

pub(crate) fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && (m - m.transpose()).amax() <= tol * m.amax().max(1.0)
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

fn standard_space(k: usize) -> Space {
    let mut chart = DMatrix::zeros(k, 2 * k);
    for i in 0..k {
        chart[(i, i)] = Complex::new(1.0, 0.0);
        chart[(i, k + i)] = Complex::new(0.0, 1.0);
    }
    Space {
        omega: standard_form(k),
        chart,
        rotation: complex_structure(k),
    }
}

/// `ℝ^{2k} × ℝ^{2k}` with `−ω ⊕ ω`; regularization rotates the second factor.
fn doubled_space(k: usize) -> Space {
    let omega = block_diag(&-standard_form(k), &standard_form(k));
    let mut chart = DMatrix::zeros(2 * k, 4 * k);
    for i in 0..k {
        chart[(i, i)] = Complex::new(1.0, 0.0);
        chart[(i, k + i)] = Complex::new(0.0, -1.0);
        chart[(k + i, 2 * k + i)] = Complex::new(1.0, 0.0);
        chart[(k + i, 3 * k + i)] = Complex::new(0.0, 1.0);
    }
    let rotation = block_diag(&DMatrix::zeros(2 * k, 2 * k), &complex_structure(k));
    Space {
        omega,
        chart,
        rotation,
    }
}

/// `A ∈ Sp(2k)`, checked to `AᵀΩA = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    k: usize,
    m: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self, IndexError> {
        if !m.is_square() || m.nrows() % 2 != 0 || m.nrows() == 0 {
            return Err(IndexError::Dimension("symplectic matrix must be 2k×2k".into()));
        }
        let k = m.nrows() / 2;
        let o = standard_form(k);
        let defect = (m.transpose() * &o * &m - &o).amax();
        if defect > tol * m.norm_squared().max(1.0) {
            return Err(IndexError::NotSymplectic(defect));
        }
        Ok(SymplecticMatrix { k, m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
}

/// `2k × k` frame spanning a Lagrangian subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    x: DMatrix<f64>,
}

impl LagrangianFrame {
    pub fn new(x: DMatrix<f64>, tol: f64) -> Result<Self, IndexError> {
        let k = x.ncols();
        if x.nrows() != 2 * k || k == 0 {
            return Err(IndexError::Dimension("Lagrangian frame must be 2k×k".into()));
        }
        let sv = x.singular_values();
        let smin = sv.min();
        if smin <= tol {
            return Err(IndexError::NotLagrangian(format!("rank deficient (σ_min = {smin:.3e})")));
        }
        let q = x.clone().qr().q();
        let defect = (q.transpose() * standard_form(k) * &q).amax();
        if defect > tol {
            return Err(IndexError::NotLagrangian(format!("ω does not vanish (defect {defect:.3e})")));
        }
        Ok(LagrangianFrame { x })
    }

    /// The `(q₁, …, q_k)` coordinate plane.
    pub fn q_plane(k: usize) -> Self {
        let mut x = DMatrix::zeros(2 * k, k);
        for i in 0..k {
            x[(i, i)] = 1.0;
        }
        LagrangianFrame { x }
    }

    pub fn p_plane(k: usize) -> Self {
        let mut x = DMatrix::zeros(2 * k, k);
        for i in 0..k {
            x[(k + i, i)] = 1.0;
        }
        LagrangianFrame { x }
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    pub fn transformed(&self, a: &DMatrix<f64>) -> LagrangianFrame {
        LagrangianFrame { x: a * &self.x }
    }
}

/// `τ ↦ A(τ)·V`.
struct Induced<'a> {
    path: &'a SymPath,
    v: &'a DMatrix<f64>,
}

impl Frames for Induced<'_> {
    fn breakpoints(&self) -> Vec<f64> {
        self.path.breakpoints()
    }

    fn frame(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let (a, da) = self.path.eval(tau, hint);
        (&a * self.v, &da * self.v)
    }
}

/// `τ ↦ Gr A(τ) = {(x, A(τ)x)}`.
struct Graph<'a> {
    path: &'a SymPath,
}

impl Frames for Graph<'_> {
    fn breakpoints(&self) -> Vec<f64> {
        self.path.breakpoints()
    }

    fn frame(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let (a, da) = self.path.eval(tau, hint);
        let n = a.nrows();
        let mut x = DMatrix::zeros(2 * n, n);
        let mut dx = DMatrix::zeros(2 * n, n);
        x.view_mut((0, 0), (n, n)).fill_with_identity();
        x.view_mut((n, 0), (n, n)).copy_from(&a);
        dx.view_mut((n, 0), (n, n)).copy_from(&da);
        (x, dx)
    }
}

/// Piecewise fit `X(τ) = exp(((τ − τ_i)/Δτ_i)·G_i)·X_i` through sampled
/// frames, with `G_i = J·S_i` the realification of `iH_i` for the
/// Hermitian log `H_i` of the unitary step between consecutive samples.
#[derive(Debug, Clone)]
pub struct SampledPath {
    knots: Vec<f64>,
    frames: Vec<DMatrix<f64>>,
    gens: Vec<DMatrix<f64>>,
}

fn to_unitary(x: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    let k = x.ncols();
    DMatrix::from_fn(k, k, |i, j| Complex::new(x[(i, j)], x[(k + i, j)]))
}

fn from_unitary(u: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let k = u.nrows();
    DMatrix::from_fn(2 * k, u.ncols(), |i, j| if i < k { u[(i, j)].re } else { u[(i - k, j)].im })
}

/// Orthogonal polar factor of a square real matrix.
fn orthogonal_polar(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

impl SampledPath {
    /// Frames sampled at `τ_i = i/(n−1)`.
    pub fn fit(samples: &[LagrangianFrame]) -> Result<Self, IndexError> {
        if samples.len() < 2 {
            return Err(IndexError::Invalid("need at least two samples".into()));
        }
        let k = samples[0].k();
        if samples.iter().any(|s| s.k() != k) {
            return Err(IndexError::Dimension("samples differ in dimension".into()));
        }
        let n = samples.len();
        let knots: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let mut us: Vec<DMatrix<Complex<f64>>> = Vec::with_capacity(n);
        for s in samples {
            let q = s.columns().clone().qr().q();
            let mut u = to_unitary(&q);
            if let Some(prev) = us.last() {
                // Right O(k) factor bringing U closest to the previous sample.
                let m = (u.adjoint() * prev).map(|z| z.re);
                let o = orthogonal_polar(&m).map(|v| Complex::new(v, 0.0));
                u *= o;
            }
            us.push(u);
        }
        let mut gens = Vec::with_capacity(n - 1);
        for w in us.windows(2) {
            let step = &w[1] * w[0].adjoint();
            let (lambda, qm) = engine::unitary_eigen(&step);
            let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                k,
                lambda.iter().map(|z| Complex::new(z.arg(), 0.0)),
            ));
            let h = &qm * phases * qm.adjoint();
            // iH as a real 2k×2k matrix: [[−H_i, −H_r], [H_r, −H_i]].
            let ih = h.map(|z| Complex::new(-z.im, z.re));
            let mut g = DMatrix::zeros(2 * k, 2 * k);
            for i in 0..k {
                for j in 0..k {
                    let z = ih[(i, j)];
                    g[(i, j)] = z.re;
                    g[(i, k + j)] = -z.im;
                    g[(k + i, j)] = z.im;
                    g[(k + i, k + j)] = z.re;
                }
            }
            gens.push(g);
        }
        let frames = us.iter().map(from_unitary).collect();
        Ok(SampledPath {
            knots,
            frames,
            gens,
        })
    }
}

impl Frames for SampledPath {
    fn breakpoints(&self) -> Vec<f64> {
        self.knots.clone()
    }

    fn frame(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.gens.len();
        let i = (0..n).find(|&i| hint < self.knots[i + 1]).unwrap_or(n - 1);
        let dt = self.knots[i + 1] - self.knots[i];
        let g = &self.gens[i] / dt;
        let x = (&g * (tau - self.knots[i])).exp() * &self.frames[i];
        let dx = &g * &x;
        (x, dx)
    }
}

/// A path of Lagrangian subspaces in `ℝ^{2k}`.
#[derive(Debug, Clone)]
pub enum LagrangianPath {
    /// `A(τ)·V`.
    Induced { path: SymPath, frame: LagrangianFrame },
    Sampled(SampledPath),
}

impl LagrangianPath {
    pub fn induced(path: &MatrixPath, frame: &LagrangianFrame) -> Self {
        LagrangianPath::Induced {
            path: path.to_path(),
            frame: frame.clone(),
        }
    }

    pub fn sampled(samples: &[LagrangianFrame]) -> Result<Self, IndexError> {
        Ok(LagrangianPath::Sampled(SampledPath::fit(samples)?))
    }

    fn k(&self) -> usize {
        match self {
            LagrangianPath::Induced { frame, .. } => frame.k(),
            LagrangianPath::Sampled(s) => s.frames[0].ncols(),
        }
    }
}

/// `RS({L_t}, V)`: sum of crossing signatures, halved at the ends of each
/// smooth piece.
pub fn rs_index(l: &LagrangianPath, v: &LagrangianFrame, tol: &Tolerances) -> Result<IndexValue, IndexError> {
    let k = l.k();
    if v.k() != k {
        return Err(IndexError::Dimension("reference Lagrangian has the wrong dimension".into()));
    }
    let space = standard_space(k);
    match l {
        LagrangianPath::Induced { path, frame } => {
            let src = Induced {
                path,
                v: frame.columns(),
            };
            engine::rs_index(&src, v.columns(), &space, tol)
        }
        LagrangianPath::Sampled(s) => engine::rs_index(s, v.columns(), &space, tol),
    }
}

/// `Ind_{2k}({A_t}, V) = RS({A_t V}, V)`.
pub fn ind(path: &SymPath, v: &LagrangianFrame, tol: &Tolerances) -> Result<IndexValue, IndexError> {
    let k = v.k();
    if path.dim() != 2 * k {
        return Err(IndexError::Dimension("path and Lagrangian differ in dimension".into()));
    }
    let src = Induced {
        path,
        v: v.columns(),
    };
    engine::rs_index(&src, v.columns(), &standard_space(k), tol)
}

fn diagonal_frame(k: usize) -> DMatrix<f64> {
    let n = 2 * k;
    let mut d = DMatrix::zeros(2 * n, n);
    d.view_mut((0, 0), (n, n)).fill_with_identity();
    d.view_mut((n, 0), (n, n)).fill_with_identity();
    d
}

/// `CZ_matr({A_t}) = RS({Gr A_t}, Δ)` in `(ℝ^{4k}, −ω ⊕ ω)`.
pub fn cz_matr(path: &SymPath, tol: &Tolerances) -> Result<IndexValue, IndexError> {
    let k = path.dim() / 2;
    engine::rs_index(&Graph { path }, &diagonal_frame(k), &doubled_space(k), tol)
}

/// `Ind_{4k}({I ⊕ A_t}, Δ)`, computed as an induced path in the doubled space.
pub fn ind_doubled(path: &SymPath, tol: &Tolerances) -> Result<IndexValue, IndexError> {
    let k = path.dim() / 2;
    let stab = SymPath::Stabilized(Box::new(path.clone()));
    let delta = diagonal_frame(k);
    let src = Induced {
        path: &stab,
        v: &delta,
    };
    engine::rs_index(&src, &delta, &doubled_space(k), tol)
}

/// Maslov index of a loop by crossings, with the winding of `det U(τ)` for
/// the unitary polar factor `U` as the independent route.
#[derive(Debug, Clone, PartialEq)]
pub struct MaslovValue {
    pub value: i64,
    pub crossing_route: IndexValue,
    /// `2·winding(det U)`.
    pub winding_route: f64,
    pub residual: f64,
}

fn unitary_det(a: &DMatrix<f64>) -> Complex<f64> {
    let k = a.nrows() / 2;
    let o = orthogonal_polar(a);
    let u = DMatrix::from_fn(k, k, |i, j| Complex::new(o[(i, j)], o[(k + i, j)]));
    u.determinant()
}

/// `2·(winding of det U(τ))`, sampled with adaptive refinement.
pub fn rho_winding(path: &SymPath) -> f64 {
    fn step(path: &SymPath, t0: f64, d0: Complex<f64>, t1: f64, hint: f64, depth: u32) -> f64 {
        let d1 = unitary_det(&path.eval(t1, hint).0);
        let s = (d1 / d0).arg();
        if s.abs() < 0.5 || depth > 30 {
            return s;
        }
        let tm = 0.5 * (t0 + t1);
        let dm = unitary_det(&path.eval(tm, hint).0);
        step(path, t0, d0, tm, hint, depth + 1) + step(path, tm, dm, t1, hint, depth + 1)
    }
    let bps = path.breakpoints();
    let mut total = 0.0;
    for w in bps.windows(2) {
        let (a, b) = (w[0], w[1]);
        let hint = 0.5 * (a + b);
        let n = 64;
        let mut prev = unitary_det(&path.eval(a, hint).0);
        for i in 1..=n {
            let t0 = a + (b - a) * (i - 1) as f64 / n as f64;
            let t1 = a + (b - a) * i as f64 / n as f64;
            total += step(path, t0, prev, t1, hint, 0);
            prev = unitary_det(&path.eval(t1, hint).0);
        }
    }
    total / std::f64::consts::PI
}

/// Frame `[I; B]` of `Gr B` in the doubled space.
fn graph_frame(b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = b.nrows();
    let mut x = DMatrix::zeros(2 * n, n);
    x.view_mut((0, 0), (n, n)).fill_with_identity();
    x.view_mut((n, 0), (n, n)).copy_from(b);
    x
}

/// The Maslov index of a loop does not depend on the reference Lagrangian,
/// so crossings are counted against `Gr R_θ`, transverse to `Gr I` at both
/// ends. `θ` starts at `π` and moves down by `π/10` while a crossing is
/// non-regular.
pub fn maslov_loop(path: &SymPath, tol: &Tolerances) -> Result<MaslovValue, IndexError> {
    let n = path.dim();
    let k = n / 2;
    let end = path.at(1.0);
    let dist = (end - DMatrix::<f64>::identity(n, n)).amax();
    if dist > tol.closed {
        return Err(IndexError::NotClosed(dist));
    }
    let w = rho_winding(path);
    let strict = Tolerances {
        max_retries: 0,
        ..tol.clone()
    };
    let mut last = None;
    for attempt in 0..=tol.max_retries.min(8) {
        let theta = std::f64::consts::PI * (1.0 - 0.1 * attempt as f64);
        let reference = graph_frame(&(complex_structure(k) * theta).exp());
        match engine::rs_index(&Graph { path }, &reference, &doubled_space(k), &strict) {
            Ok(cz) => {
                let residual = (w - cz.value()).abs();
                if residual >= tol.snap {
                    return Err(IndexError::Unresolved { residual });
                }
                if cz.halves % 4 != 0 {
                    return Err(IndexError::Odd(cz.halves / 2));
                }
                return Ok(MaslovValue {
                    value: cz.halves / 2,
                    crossing_route: cz,
                    winding_route: w,
                    residual,
                });
            }
            Err(e @ IndexError::NonRegular { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `CZ_F = n − CZ_matr`, returned as twice its value.
pub fn cz_floer(path: &SymPath, n: usize, tol: &Tolerances) -> Result<i64, IndexError> {
    if path.dim() != 2 * n {
        return Err(IndexError::Dimension(format!("path must lie in Sp({})", 2 * n)));
    }
    Ok(2 * n as i64 - cz_matr(path, tol)?.halves)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LerayReport {
    pub ind_product: IndexValue,
    pub ind_a: IndexValue,
    pub ind_b: IndexValue,
    /// `sign(Q_{A₁} − Q_{B₁⁻¹})`, the correction term that is used.
    pub signature: i64,
    /// `sign(Q_{A₁} + Q_{B₁})`; equals `signature` when `B₁` has `E = H`,
    /// e.g. for rotations, but not in general.
    pub signature_symmetric: Option<i64>,
    /// Twice the left side.
    pub lhs_halves: i64,
    /// Twice the right side.
    pub rhs_halves: i64,
    /// `|lhs − rhs|` from the unsnapped estimates.
    pub residual: f64,
}

impl LerayReport {
    pub fn holds(&self) -> bool {
        self.lhs_halves == self.rhs_halves
    }
}

/// Blocks of `S = [[E, F], [G, H]]`.
fn blocks(s: &DMatrix<f64>) -> [DMatrix<f64>; 4] {
    let k = s.nrows() / 2;
    [
        s.view((0, 0), (k, k)).into_owned(),
        s.view((0, k), (k, k)).into_owned(),
        s.view((k, 0), (k, k)).into_owned(),
        s.view((k, k), (k, k)).into_owned(),
    ]
}

/// Smallest singular value of `F`; `S·L ∩ L = 0` exactly when it is nonzero.
pub fn leray_transversality(s: &DMatrix<f64>) -> f64 {
    let [_, f, _, _] = blocks(s);
    f.singular_values().min()
}

/// `Q_S = F⁻¹E`, symmetric for symplectic `S` with `F` invertible.
pub fn leray_form(s: &DMatrix<f64>, tol: &Tolerances) -> Result<DMatrix<f64>, IndexError> {
    let [e, f, _, _] = blocks(s);
    let fi = f
        .try_inverse()
        .ok_or_else(|| IndexError::Transversality("F block is singular".into()))?;
    let q = fi * e;
    let asym = (&q - q.transpose()).amax();
    if asym > tol.transversality * q.amax().max(1.0) {
        return Err(IndexError::Transversality(format!("Q_S is not symmetric (defect {asym:.3e})")));
    }
    Ok((&q + q.transpose()) * 0.5)
}

/// Inverse of a symplectic matrix, `−ΩSᵀΩ`.
pub fn symplectic_inverse(s: &DMatrix<f64>) -> DMatrix<f64> {
    let o = standard_form(s.nrows() / 2);
    -(&o * s.transpose() * &o)
}

/// The Lagrangian `L` with `S·L ∩ L = 0 ⇔ F` invertible: the span of the
/// last `k` coordinates.
pub fn leray_lagrangian(k: usize) -> LagrangianFrame {
    LagrangianFrame::p_plane(k)
}

fn signature(m: &DMatrix<f64>, tol: f64) -> Option<i64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone()).eigenvalues;
    if eig.iter().any(|l| l.abs() < tol) {
        return None;
    }
    Some(eig.iter().map(|l| if *l > 0.0 { 1 } else { -1 }).sum())
}

/// Both sides of `Ind(AB, L) = Ind(A, L) + Ind(B, L) + ½ sign(Q_{A₁} − Q_{B₁⁻¹})`.
pub fn leray_verify(a: &SymPath, b: &SymPath, tol: &Tolerances) -> Result<LerayReport, IndexError> {
    let k = a.dim() / 2;
    if b.dim() != a.dim() {
        return Err(IndexError::Dimension("paths differ in dimension".into()));
    }
    let (a1, b1) = (a.at(1.0), b.at(1.0));
    let ab1 = &a1 * &b1;
    for (name, m) in [("A₁L ∩ L = 0", &a1), ("B₁L ∩ L = 0", &b1), ("A₁B₁L ∩ L = 0", &ab1)] {
        let s = leray_transversality(m);
        if s <= tol.transversality {
            return Err(IndexError::Transversality(format!("{name} fails (σ_min = {s:.3e})")));
        }
    }
    let qa = leray_form(&a1, tol)?;
    let qb = leray_form(&b1, tol)?;
    let qb_inv = leray_form(&symplectic_inverse(&b1), tol)?;
    let sig = signature(&(&qa - &qb_inv), tol.transversality)
        .ok_or_else(|| IndexError::Transversality("Q_{A₁} − Q_{B₁⁻¹} is degenerate".into()))?;
    let signature_symmetric = signature(&(&qa + &qb), tol.transversality);
    let l = leray_lagrangian(k);
    let prod = SymPath::product(a.clone(), b.clone());
    let ind_product = ind(&prod, &l, tol)?;
    let ind_a = ind(a, &l, tol)?;
    let ind_b = ind(b, &l, tol)?;
    let lhs_halves = ind_product.halves;
    let rhs_halves = ind_a.halves + ind_b.halves + sig;
    let lhs = ind_product.estimate;
    let rhs = ind_a.estimate + ind_b.estimate + sig as f64 / 2.0;
    Ok(LerayReport {
        residual: (lhs - rhs).abs(),
        ind_product,
        ind_a,
        ind_b,
        signature: sig,
        signature_symmetric,
        lhs_halves,
        rhs_halves,
    })
}


/// `|CZ(a·b) − CZ(a) − CZ(b)|` for the pointwise product.
pub fn qm_defect(a: &SymPath, b: &SymPath, tol: &Tolerances) -> Result<f64, IndexError> {
    let ab = SymPath::product(a.clone(), b.clone());
    let h = cz_matr(&ab, tol)?.halves - cz_matr(a, tol)?.halves - cz_matr(b, tol)?.halves;
    Ok(h.abs() as f64 / 2.0)
}

/// Recorded corpus bound on `qm_defect`: the largest defect over 200 seeded
/// pairs in each of `Sp(2)` and `Sp(4)` (seed 2024). Later runs are held to
/// `C_EMP + 1`.
pub const C_EMP: f64 = 2.0;

/// Empirical quasi-morphism defect over random path pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectSample {
    pub trials: usize,
    /// `C_emp`, the largest defect seen.
    pub max: f64,
    pub mean: f64,
    /// Pairs skipped because an index could not be resolved.
    pub failures: usize,
}

/// `qm_defect` over `trials` random pairs in `Sp(2k)` for each `k`.
pub fn sample_defect<R: rand::Rng + ?Sized>(
    rng: &mut R,
    ks: &[usize],
    trials: usize,
    tol: &Tolerances,
) -> DefectSample {
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    let mut done = 0;
    let mut failures = 0;
    for &k in ks {
        for _ in 0..trials {
            let a = random::random_path(rng, k, 3, 1.0).to_path();
            let b = random::random_path(rng, k, 3, 1.0).to_path();
            match qm_defect(&a, &b, tol) {
                Ok(d) => {
                    max = max.max(d);
                    sum += d;
                    done += 1;
                }
                Err(_) => failures += 1,
            }
        }
    }
    DefectSample {
        trials: done,
        max,
        mean: if done == 0 { 0.0 } else { sum / done as f64 },
        failures,
    }
}
