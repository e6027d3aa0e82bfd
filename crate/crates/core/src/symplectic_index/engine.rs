//! Robbin–Salamon index of a Lagrangian path by two routes: located
//! crossings with their crossing forms, and the continuous phase of
//! `det W(τ)` for the unitary model `W = U Uᵀ` of the Lagrangian.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use super::{CrossingRecord, IndexError, IndexValue, Tolerances};

type CMat = DMatrix<Complex<f64>>;

/// Symplectic vector space data: the form, a unitary chart sending
/// orthonormal Lagrangian frames to unitary matrices, and the generator
/// used for δ-regularization.
#[derive(Debug, Clone)]
pub(crate) struct Space {
    pub omega: DMatrix<f64>,
    pub chart: CMat,
    pub rotation: DMatrix<f64>,
}

/// Source of frames `X(τ)` (columns spanning `L(τ)`) with exact `X′(τ)`.
pub(crate) trait Frames {
    fn breakpoints(&self) -> Vec<f64>;
    fn frame(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>);
}

/// `exp(δτG)·X(τ)`.
struct Regularized<'a> {
    inner: &'a dyn Frames,
    delta: f64,
    generator: &'a DMatrix<f64>,
}

impl Frames for Regularized<'_> {
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }

    fn frame(&self, tau: f64, hint: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let (x, dx) = self.inner.frame(tau, hint);
        let r = (self.generator * (self.delta * tau)).exp();
        let rx = &r * &x;
        let d = self.generator * &rx * self.delta + &r * dx;
        (rx, d)
    }
}

fn thin_qr(x: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = x.clone().qr();
    (qr.q(), qr.r())
}

/// Eigen-decomposition `M = Q·diag(λ)·Q*` of a unitary matrix: `Re λ` from
/// the Hermitian part, then `Im λ` from the skew part on each cluster of
/// equal real parts.
pub(crate) fn unitary_eigen(m: &CMat) -> (Vec<Complex<f64>>, CMat) {
    let n = m.nrows();
    let herm = (m + m.adjoint()) * Complex::new(0.5, 0.0);
    let re = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| re.eigenvalues[a].total_cmp(&re.eigenvalues[b]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = CMat::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && re.eigenvalues[order[end]] - re.eigenvalues[order[end - 1]] < 1e-6 {
            end += 1;
        }
        let basis = CMat::from_fn(n, end - start, |i, j| re.eigenvectors[(i, order[start + j])]);
        let block = basis.adjoint() * m * &basis;
        let skew = (&block - block.adjoint()) * Complex::new(0.0, -0.5);
        let im = SymmetricEigen::new(skew);
        let local = &basis * &im.eigenvectors;
        for j in 0..end - start {
            let v = local.column(j);
            values.push((v.adjoint() * m * v)[(0, 0)]);
            vectors.set_column(start + j, &v);
        }
        start = end;
    }
    (values, vectors)
}

fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex::new(v, 0.0))
}

struct Problem<'a> {
    frames: &'a dyn Frames,
    /// `V̂ᵀΩ` for an orthonormal frame `V̂` of the reference Lagrangian.
    v_omega: DMatrix<f64>,
    omega: &'a DMatrix<f64>,
    chart: &'a CMat,
    /// `conj(W_V)`.
    w_v_conj: CMat,
    tol: &'a Tolerances,
}

impl Problem<'_> {
    /// Smallest singular value of `V̂ᵀΩX̂(τ)`; zero exactly at crossings.
    fn gap(&self, tau: f64, hint: f64) -> f64 {
        let (x, _) = self.frames.frame(tau, hint);
        let (q, _) = thin_qr(&x);
        let m = &self.v_omega * q;
        m.singular_values().min()
    }

    fn golden_min(&self, mut lo: f64, mut hi: f64, hint: f64) -> (f64, f64) {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut a = hi - phi * (hi - lo);
        let mut b = lo + phi * (hi - lo);
        let mut fa = self.gap(a, hint);
        let mut fb = self.gap(b, hint);
        while hi - lo > self.tol.bisection {
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - phi * (hi - lo);
                fa = self.gap(a, hint);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + phi * (hi - lo);
                fb = self.gap(b, hint);
            }
        }
        if fa <= fb {
            (a, fa)
        } else {
            (b, fb)
        }
    }

    /// Signature of the crossing form `ω(Xu, X′u)` on `L(τ) ∩ V`.
    fn crossing(&self, tau: f64, hint: f64, at_endpoint: bool) -> Result<CrossingRecord, IndexError> {
        let (x, dx) = self.frames.frame(tau, hint);
        let (q, r) = thin_qr(&x);
        let m = &self.v_omega * &q;
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let kernel: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] < self.tol.kernel)
            .collect();
        let r_inv = r
            .try_inverse()
            .ok_or_else(|| IndexError::Invalid("degenerate Lagrangian frame".into()))?;
        let kd = kernel.len();
        let mut form = DMatrix::zeros(kd, kd);
        let us: Vec<_> = kernel.iter().map(|&i| v_t.row(i).transpose()).collect();
        let xs: Vec<_> = us.iter().map(|u| &q * u).collect();
        let dxs: Vec<_> = us.iter().map(|u| &dx * (&r_inv * u)).collect();
        for i in 0..kd {
            for j in 0..kd {
                let a = (xs[i].transpose() * self.omega * &dxs[j])[(0, 0)];
                let b = (xs[j].transpose() * self.omega * &dxs[i])[(0, 0)];
                form[(i, j)] = 0.5 * (a + b);
            }
        }
        let eig = SymmetricEigen::new(form).eigenvalues;
        if eig.iter().any(|l| l.abs() < self.tol.zero_eigenvalue) {
            return Err(IndexError::NonRegular { t: tau });
        }
        let pos = eig.iter().filter(|l| **l > 0.0).count() as i64;
        let neg = kd as i64 - pos;
        Ok(CrossingRecord {
            t: tau,
            kernel_dimension: kd,
            signature: pos - neg,
            at_endpoint,
        })
    }

    fn samples(&self, a: f64, b: f64, hint: f64, density: usize) -> usize {
        let mut speed: f64 = 0.0;
        for i in 0..=4 {
            let t = a + (b - a) * i as f64 / 4.0;
            let (x, dx) = self.frames.frame(t, hint);
            let (_, r) = thin_qr(&x);
            if let Some(ri) = r.try_inverse() {
                speed = speed.max((dx * ri).norm());
            }
        }
        let n = (speed * (b - a) * 16.0).ceil() as usize;
        (n.max(64) * density).min(200_000)
    }

    /// Crossings on one smooth piece `[a, b]`.
    fn piece_crossings(&self, a: f64, b: f64, density: usize) -> Result<Vec<CrossingRecord>, IndexError> {
        let hint = 0.5 * (a + b);
        let n = self.samples(a, b, hint, density);
        let ts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let gs: Vec<f64> = ts.iter().map(|&t| self.gap(t, hint)).collect();
        let thr = self.tol.kernel;
        let mut out = Vec::new();
        if gs[0] < thr {
            out.push(self.crossing(a, hint, true)?);
        }
        let near_end = |t: f64| (t - a).abs() < 1e3 * self.tol.bisection || (b - t).abs() < 1e3 * self.tol.bisection;
        let mut found: Vec<f64> = Vec::new();
        for i in 0..=n {
            let left = if i == 0 { f64::INFINITY } else { gs[i - 1] };
            let right = if i == n { f64::INFINITY } else { gs[i + 1] };
            if gs[i] > left || gs[i] > right {
                continue;
            }
            // Near a zero the gap is V-shaped, so its value is at most about
            // twice the jump to a neighbour; flat stretches are skipped.
            let jump = [left, right]
                .iter()
                .filter(|g| g.is_finite())
                .map(|g| g - gs[i])
                .fold(0.0, f64::max);
            if gs[i] > 2.0 * jump + thr {
                continue;
            }
            let lo = ts[i.saturating_sub(1)];
            let hi = ts[(i + 1).min(n)];
            let (t, g) = self.golden_min(lo, hi, hint);
            if g >= thr || near_end(t) {
                continue;
            }
            if found.iter().any(|f| (f - t).abs() < 1e2 * self.tol.bisection) {
                continue;
            }
            found.push(t);
            out.push(self.crossing(t, hint, false)?);
        }
        if gs[n] < thr {
            out.push(self.crossing(b, hint, true)?);
        }
        Ok(out)
    }

    fn det_phase_point(&self, tau: f64, hint: f64) -> Complex<f64> {
        let (x, _) = self.frames.frame(tau, hint);
        let (q, _) = thin_qr(&x);
        let u = self.chart * complexify(&q);
        let d = u.determinant();
        d * d
    }

    /// Continuous change of `arg det W` along one piece.
    fn phase_change(&self, a: f64, b: f64, n: usize) -> f64 {
        let hint = 0.5 * (a + b);
        let mut total = 0.0;
        let mut prev_t = a;
        let mut prev = self.det_phase_point(a, hint);
        for i in 1..=n {
            let t = a + (b - a) * i as f64 / n as f64;
            total += self.phase_step(prev_t, prev, t, hint, 0);
            prev_t = t;
            prev = self.det_phase_point(t, hint);
        }
        total
    }

    fn phase_step(&self, t0: f64, d0: Complex<f64>, t1: f64, hint: f64, depth: u32) -> f64 {
        let d1 = self.det_phase_point(t1, hint);
        let step = (d1 / d0).arg();
        if step.abs() < 0.5 || depth > 30 {
            return step;
        }
        let tm = 0.5 * (t0 + t1);
        let dm = self.det_phase_point(tm, hint);
        self.phase_step(t0, d0, tm, hint, depth + 1) + self.phase_step(tm, dm, t1, hint, depth + 1)
    }

    /// `Σ φ(θ_j)` over eigen-angles of `conj(W_V)·W` at one end, where
    /// `φ(θ) = 1/2 − θ/2π` on `(0, 2π)` and `φ(0) = 0`.
    fn endpoint_term(&self, tau: f64, hint: f64) -> f64 {
        let (x, _) = self.frames.frame(tau, hint);
        let (q, _) = thin_qr(&x);
        let u = self.chart * complexify(&q);
        let w = &u * u.transpose();
        let what = &self.w_v_conj * w;
        let (eig, _) = unitary_eigen(&what);
        eig.iter()
            .map(|l| {
                let th = l.arg();
                if th.abs() < 2.0 * self.tol.kernel {
                    0.0
                } else {
                    let a = if th < 0.0 { th + 2.0 * std::f64::consts::PI } else { th };
                    0.5 - a / (2.0 * std::f64::consts::PI)
                }
            })
            .sum()
    }

    fn run(&self, density: usize) -> Result<(i64, f64, Vec<CrossingRecord>), IndexError> {
        let bps = self.frames.breakpoints();
        let mut halves = 0i64;
        let mut crossings = Vec::new();
        let mut phase = 0.0;
        for w in bps.windows(2) {
            let (a, b) = (w[0], w[1]);
            for c in self.piece_crossings(a, b, density)? {
                halves += if c.at_endpoint { c.signature } else { 2 * c.signature };
                crossings.push(c);
            }
            let n = self.samples(a, b, 0.5 * (a + b), 1);
            phase += self.phase_change(a, b, n);
        }
        let first = bps[0];
        let last = *bps.last().unwrap();
        let h0 = 0.5 * (bps[0] + bps[1]);
        let h1 = 0.5 * (bps[bps.len() - 2] + last);
        let estimate = phase / (2.0 * std::f64::consts::PI) + self.endpoint_term(last, h1)
            - self.endpoint_term(first, h0);
        Ok((halves, estimate, crossings))
    }
}

/// Index of `frames` relative to the Lagrangian spanned by `v`, with
/// δ-regularization retries for non-regular crossings.
pub(crate) fn rs_index(
    frames: &dyn Frames,
    v: &DMatrix<f64>,
    space: &Space,
    tol: &Tolerances,
) -> Result<IndexValue, IndexError> {
    let (vq, _) = thin_qr(v);
    let uv = &space.chart * complexify(&vq);
    let w_v_conj = (&uv * uv.transpose()).map(|z| z.conj());
    let v_omega = vq.transpose() * &space.omega;
    let mut delta = 0.0;
    let mut last_err = None;
    for attempt in 0..=tol.max_retries {
        if attempt > 0 {
            delta = if attempt == 1 { tol.initial_delta } else { delta / 2.0 };
        }
        let reg = Regularized {
            inner: frames,
            delta,
            generator: &space.rotation,
        };
        let problem = Problem {
            frames: if attempt == 0 { frames } else { &reg },
            v_omega: v_omega.clone(),
            omega: &space.omega,
            chart: &space.chart,
            w_v_conj: w_v_conj.clone(),
            tol,
        };
        let mut result = problem.run(1);
        if let Ok((h, est, _)) = &result {
            if (est - *h as f64 / 2.0).abs() >= tol.snap {
                // A dense rerun catches crossings closer than the grid.
                result = problem.run(8);
            }
        }
        match result {
            Ok((halves, estimate, crossings)) => {
                let residual = (estimate - halves as f64 / 2.0).abs();
                if residual >= tol.snap {
                    return Err(IndexError::Unresolved { residual });
                }
                return Ok(IndexValue {
                    halves,
                    estimate,
                    residual,
                    crossings,
                    regularization: (attempt > 0).then_some(delta),
                });
            }
            Err(e @ IndexError::NonRegular { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}
