//! Gaussian elimination over the Novikov field.

use super::{BaseField, NovikovScalar};

pub type Matrix = Vec<Vec<NovikovScalar>>;

fn cost(x: &NovikovScalar) -> usize {
    x.numerator().terms().len() + x.denominator().terms().len()
}

/// Reduced row echelon form. Returns the reduced matrix and the pivot
/// columns of its nonzero rows.
pub fn rref(mut m: Matrix) -> (Matrix, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Cheapest nonzero pivot keeps intermediate fractions small.
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| cost(&m[i][c]))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                if m[r][j].is_zero() {
                    continue;
                }
                let t = &factor * &m[r][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m.clone()).1.len()
}

/// Determinant of a square matrix by fraction-tracking elimination.
pub fn determinant(field: BaseField, m: &Matrix) -> NovikovScalar {
    let n = m.len();
    let mut a = m.clone();
    let mut det = NovikovScalar::one(field);
    for c in 0..n {
        let Some(p) = (c..n)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| cost(&a[i][c]))
        else {
            return NovikovScalar::zero(field);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inverse().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            for j in c..n {
                if a[c][j].is_zero() {
                    continue;
                }
                let t = &factor * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    det
}

/// Some solution of `m·x = b`, or `None` if the system is inconsistent.
pub fn solve(field: BaseField, m: &Matrix, b: &[NovikovScalar]) -> Option<Vec<NovikovScalar>> {
    let cols = m.first().map_or(0, |r| r.len());
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![NovikovScalar::zero(field); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[r][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : m·x = 0}`.
pub fn nullspace(field: BaseField, m: &Matrix, cols: usize) -> Vec<Vec<NovikovScalar>> {
    let (red, pivots) = rref(m.clone());
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![NovikovScalar::zero(field); cols];
        v[free] = NovikovScalar::one(field);
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -&red[r][free];
        }
        out.push(v);
    }
    out
}

pub fn mat_vec(field: BaseField, m: &Matrix, v: &[NovikovScalar]) -> Vec<NovikovScalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(NovikovScalar::zero(field), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::{int, Exp};

    fn s(c: i64, e: i64) -> NovikovScalar {
        NovikovScalar::monomial(BaseField::Qmodel, int(c), Exp::from_integer(e))
    }

    #[test]
    fn determinant_and_solve() {
        let f = BaseField::Qmodel;
        let m = vec![vec![s(1, 1), s(2, 0)], vec![s(1, 0), s(1, -1)]];
        // s·s⁻¹ − 2 = −1
        assert_eq!(determinant(f, &m), s(-1, 0));
        let b = vec![s(1, 0), s(0, 0)];
        let x = solve(f, &m, &b).unwrap();
        assert_eq!(mat_vec(f, &m, &x), b);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = BaseField::Qmodel;
        let m = vec![vec![s(1, 1), s(1, 0)], vec![s(2, 1), s(2, 0)]];
        let ns = nullspace(f, &m, 2);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(f, &m, &ns[0]).iter().all(|x| x.is_zero()));
        assert_eq!(rank(&m), 1);
    }
}
