//! Small dense linear algebra for ambient dimensions up to 16.

use alloc::vec;
use alloc::vec::Vec;

use crate::num;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    num::sqrt(dot(a, a))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// `a + t * u`
pub fn add_scaled(a: &[f64], t: f64, u: &[f64]) -> Vec<f64> {
    a.iter().zip(u).map(|(x, d)| x + t * d).collect()
}

pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// v' * Q * v
pub fn quad_form(q: &[Vec<f64>], v: &[f64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(i, vi)| vi * dot(&q[i], v))
        .sum()
}

/// Cholesky-based SPD check with a relative pivot floor.
pub fn is_spd(q: &[Vec<f64>]) -> bool {
    let n = q.len();
    if q.iter().any(|row| row.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..i {
            if num::abs(q[i][j] - q[j][i]) > 1e-12 * (1.0 + num::abs(q[i][j])) {
                return false;
            }
        }
    }
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = q[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 1e-14 * (1.0 + num::abs(q[i][i])) {
                    return false;
                }
                l[i][i] = num::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Solve an n x n system by Gaussian elimination with partial pivoting.
/// Returns `None` when the pivot falls under a relative floor.
pub fn solve(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut b = rhs.to_vec();
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, x| m.max(num::abs(*x)));
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, num::abs(a[r][col])))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_abs <= 1e-12 * (1.0 + scale) {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}
