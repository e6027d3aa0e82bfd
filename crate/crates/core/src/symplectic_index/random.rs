//! Seeded generators of symplectic paths and matrices.

use nalgebra::DMatrix;
use rand::Rng;

use super::{complex_structure, MatrixPath, Segment};

/// Symmetric matrix with entries uniform in `[−scale, scale]`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-scale..=scale);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// Path of `1..=max_segments` segments with random symmetric generators and
/// durations in `[0.2, 1.5]`.
pub fn random_path<R: Rng + ?Sized>(rng: &mut R, k: usize, max_segments: usize, scale: f64) -> MatrixPath {
    let n = rng.gen_range(1..=max_segments.max(1));
    let segs = (0..n)
        .map(|_| Segment {
            generator: random_symmetric(rng, 2 * k, scale),
            duration: rng.gen_range(0.2..1.5),
        })
        .collect();
    MatrixPath::new(k, segs).expect("random segments are valid")
}

/// Random element `exp(J·S)` of `Sp(2k)`.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, k: usize, scale: f64) -> DMatrix<f64> {
    let s = random_symmetric(rng, 2 * k, scale);
    (complex_structure(k) * s).exp()
}

/// Loop `exp(2πl·J·S)` with `S = Pᵀ P` conjugated to the standard rotation;
/// its Maslov index is `2l·k`.
pub fn random_loop<R: Rng + ?Sized>(rng: &mut R, k: usize, turns: u32, scale: f64) -> MatrixPath {
    let p = random_symplectic(rng, k, scale);
    let s = p.transpose() * &p;
    MatrixPath::single(s, 2.0 * std::f64::consts::PI * turns as f64).expect("valid loop")
}
