//! Numerical Fourier reduction: a compactly supported `H̄` on `ℝ^k` is
//! replaced by the lattice sum
//! `H̄_{R,ε}(p) = Σ_{v ∈ εℤ^k, |v| ≤ R} ε^k (sin⟨v,p⟩ F(v) + cos⟨v,p⟩ G(v))`
//! whose terms are functions of single linear coordinates. The model `ζ` of
//! each partial sum is its value at `p_spec`.
//!
//! `F` and `G` are the sine and cosine coefficients
//! `(2π)^{-k} ∫ H̄(x) {sin, cos}⟨v,x⟩ dx`, computed by the trapezoidal rule
//! on a uniform grid over the support box. Float-only.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{ModelState, QStateError};

/// A float function on `ℝ^k` that vanishes outside `[lo, hi]`.
#[derive(Clone)]
pub struct SmoothSampler {
    pub eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl std::fmt::Debug for SmoothSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothSampler").field("lo", &self.lo).field("hi", &self.hi).finish()
    }
}

impl SmoothSampler {
    pub fn new(eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        SmoothSampler {
            eval: Arc::new(eval),
            lo,
            hi,
        }
    }

    /// `exp(−|x − c|²/(2σ²))` on the box `c ± half_width`.
    pub fn gaussian(center: &[f64], sigma: f64, half_width: f64) -> Self {
        let c = center.to_vec();
        let lo = c.iter().map(|x| x - half_width).collect();
        let hi = c.iter().map(|x| x + half_width).collect();
        Self::new(
            move |x| {
                let r2: f64 = x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
                (-r2 / (2.0 * sigma * sigma)).exp()
            },
            lo,
            hi,
        )
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierConfig {
    /// Quadrature nodes per axis.
    pub grid: usize,
    /// Largest `|H̄|` allowed on the box boundary, relative to `max(1, sup|H̄|)`.
    pub tail_threshold: f64,
    pub jobs: usize,
}

impl Default for FourierConfig {
    fn default() -> Self {
        FourierConfig {
            grid: 256,
            tail_threshold: 1e-8,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierRow {
    pub radius: f64,
    pub eps: f64,
    pub lattice_points: usize,
    pub zeta: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierReport {
    pub zeta: f64,
    pub target: f64,
    pub error: f64,
    /// Rows for `R/4, R/2, R` against `4ε, 2ε, ε`; the last row is `(R, ε)`.
    pub table: Vec<FourierRow>,
}

/// Pairwise summation, for a reduction order independent of thread count.
fn pairwise(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise(a) + pairwise(b)
}

fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h }).collect()
}

pub fn fourier_reduction_demo(
    state: &ModelState,
    sampler: &SmoothSampler,
    radius: f64,
    eps: f64,
    config: &FourierConfig,
) -> Result<FourierReport, QStateError> {
    let k = state.dimension();
    if k > 2 {
        return Err(QStateError::Unsupported(k));
    }
    if sampler.dimension() != k {
        return Err(QStateError::Dimension(sampler.dimension()));
    }
    if !(radius > 0.0 && eps > 0.0 && radius.is_finite() && eps.is_finite()) {
        return Err(QStateError::Invalid("R and ε must be positive".into()));
    }
    if config.grid < 3 {
        return Err(QStateError::Invalid("the quadrature grid needs at least 3 nodes".into()));
    }
    if sampler.lo.iter().zip(&sampler.hi).any(|(a, b)| !(a < b)) {
        return Err(QStateError::Invalid("empty support box".into()));
    }
    let n = config.grid;
    let axes: Vec<Vec<f64>> = (0..k)
        .map(|d| {
            let (a, b) = (sampler.lo[d], sampler.hi[d]);
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
        })
        .collect();
    let steps: Vec<f64> = (0..k).map(|d| (sampler.hi[d] - sampler.lo[d]) / (n - 1) as f64).collect();
    if steps.iter().any(|h| radius * h >= std::f64::consts::PI) {
        return Err(QStateError::Invalid(format!("grid too coarse to resolve frequencies up to R = {radius}")));
    }

    // Samples on the grid, row-major in (x₁, x₂).
    let total = n.pow(k as u32);
    let point = |flat: usize| -> Vec<f64> {
        let mut idx = flat;
        let mut x = vec![0.0; k];
        for d in (0..k).rev() {
            x[d] = axes[d][idx % n];
            idx /= n;
        }
        x
    };
    let values: Vec<f64> = (0..total).map(|i| (sampler.eval)(&point(i))).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(QStateError::Invalid("sampler returned a non-finite value".into()));
    }
    let on_boundary = |flat: usize| {
        let mut idx = flat;
        (0..k).any(|_| {
            let i = idx % n;
            idx /= n;
            i == 0 || i == n - 1
        })
    };
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let boundary = (0..total).filter(|&i| on_boundary(i)).fold(0.0f64, |m, i| m.max(values[i].abs()));
    if boundary > config.tail_threshold * sup.max(1.0) {
        return Err(QStateError::NonDecaying { boundary });
    }

    let half = (radius / eps + 1e-9).floor() as i64;
    let freqs: Vec<f64> = (-half..=half).map(|j| j as f64 * eps).collect();
    let m = freqs.len();
    let norm = (2.0 * std::f64::consts::PI).powi(k as i32);
    let weights: Vec<Vec<f64>> = steps.iter().map(|&h| trapezoid_weights(n, h)).collect();
    // phase[d][j][i] = w_i e^{−i v_j x_i} along axis d.
    let phase: Vec<Vec<Vec<Complex<f64>>>> = (0..k)
        .map(|d| {
            freqs
                .iter()
                .map(|&v| {
                    (0..n)
                        .map(|i| Complex::from_polar(weights[d][i], -v * axes[d][i]))
                        .collect()
                })
                .collect()
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| QStateError::Invalid(e.to_string()))?;
    // coeff[j₁ · m + j₂] = (2π)^{-k} ∫ H̄ e^{−i⟨v,x⟩} dx.
    let coeff: Vec<Complex<f64>> = pool.install(|| match k {
        1 => (0..m)
            .into_par_iter()
            .map(|j| phase[0][j].iter().zip(&values).map(|(p, h)| p * h).sum::<Complex<f64>>() / norm)
            .collect(),
        _ => {
            // Inner transform along x₂ for every x₁ row.
            let inner: Vec<Vec<Complex<f64>>> = (0..n)
                .into_par_iter()
                .map(|a| {
                    let row = &values[a * n..(a + 1) * n];
                    (0..m)
                        .map(|j2| phase[1][j2].iter().zip(row).map(|(p, h)| p * h).sum())
                        .collect()
                })
                .collect();
            (0..m * m)
                .into_par_iter()
                .map(|flat| {
                    let (j1, j2) = (flat / m, flat % m);
                    if freqs[j1].hypot(freqs[j2]) > radius + 1e-12 {
                        return Complex::new(0.0, 0.0);
                    }
                    (0..n).map(|a| phase[0][j1][a] * inner[a][j2]).sum::<Complex<f64>>() / norm
                })
                .collect()
        }
    });

    let p: Vec<f64> = state.p_spec().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let target = (sampler.eval)(&p);
    let mut table = Vec::new();
    for r_scale in [0.25, 0.5, 1.0] {
        for stride in [4i64, 2, 1] {
            let r = radius * r_scale;
            let step = eps * stride as f64;
            let mut terms = Vec::new();
            let lattice = |j: usize| -> Option<f64> {
                let idx = j as i64 - half;
                (idx % stride == 0).then(|| freqs[j])
            };
            let dims: Vec<usize> = vec![m; k];
            let count: usize = dims.iter().product();
            for flat in 0..count {
                let (j1, j2) = if k == 1 { (flat, 0) } else { (flat / m, flat % m) };
                let Some(v1) = lattice(j1) else { continue };
                let v2 = if k == 1 { Some(0.0) } else { lattice(j2) };
                let Some(v2) = v2 else { continue };
                let v = if k == 1 { vec![v1] } else { vec![v1, v2] };
                if v.iter().map(|x| x * x).sum::<f64>().sqrt() > r + 1e-12 {
                    continue;
                }
                let c = coeff[if k == 1 { j1 } else { j1 * m + j2 }];
                let (g, f) = (c.re, -c.im);
                let s: f64 = v.iter().zip(&p).map(|(a, b)| a * b).sum();
                terms.push(step.powi(k as i32) * (s.sin() * f + s.cos() * g));
            }
            let zeta = pairwise(&terms);
            table.push(FourierRow {
                radius: r,
                eps: step,
                lattice_points: terms.len(),
                zeta,
                error: (zeta - target).abs(),
            });
        }
    }
    let last = table.last().unwrap();
    Ok(FourierReport {
        zeta: last.zeta,
        target,
        error: last.error,
        table,
    })
}
