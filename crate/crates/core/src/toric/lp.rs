//! Exact phase-one simplex (Bland's rule) for systems `A x ≥ b`, `x` free.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::qlinalg::Point;

/// A point with `A x ≥ b`, or `None` when the system is infeasible.
pub fn feasible_point(a: &[Point], b: &[BigRational]) -> Option<Point> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // Columns: x⁺ (n), x⁻ (n), surplus (m), artificial (m), then rhs.
    let cols = 2 * n + 2 * m;
    let mut t: Vec<Point> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let sign = if b[i].is_negative() { -BigRational::one() } else { BigRational::one() };
        let mut row = vec![BigRational::zero(); cols + 1];
        for j in 0..n {
            row[j] = &sign * &a[i][j];
            row[n + j] = -&row[j];
        }
        row[2 * n + i] = -sign.clone();
        row[2 * n + m + i] = BigRational::one();
        row[cols] = &sign * &b[i];
        t.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + m + i).collect();
    // Objective row: minimize the sum of artificials, stored as reduced costs.
    let mut obj = vec![BigRational::zero(); cols + 1];
    for row in &t {
        for j in 0..cols + 1 {
            if j < 2 * n + m || j == cols {
                obj[j] -= &row[j];
            }
        }
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][cols] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase-one objective is bounded below");
        let inv = t[r][enter].recip();
        for x in t[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..cols + 1 {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..cols + 1 {
                obj[j] -= &f * &pivot_row[j];
            }
        }
        basis[r] = enter;
    }
    if !obj[cols].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] += &t[i][cols];
        } else if j < 2 * n {
            x[j - n] -= &t[i][cols];
        }
    }
    Some(x)
}
