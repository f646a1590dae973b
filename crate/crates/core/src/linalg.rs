//! Small exact linear algebra over the rationals (dimensions never exceed a handful).

use num_traits::{One, Zero};

use crate::scalar::{ExactScalar, Point};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Point], ncols: usize) -> (Vec<Point>, Vec<usize>) {
    let mut m: Vec<Point> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = ExactScalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Point]) -> usize {
    match rows.first() {
        None => 0,
        Some(first) => rref(rows, first.len()).1.len(),
    }
}

/// Basis of `{x : row · x = 0 for all rows}` in `R^ncols`.
pub fn nullspace(rows: &[Point], ncols: usize) -> Vec<Point> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); ncols];
            v[f] = ExactScalar::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves a square system; `None` when singular.
pub fn solve(a: &[Point], b: &[ExactScalar]) -> Option<Point> {
    let n = a.len();
    let aug: Vec<Point> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p == n) {
        return None;
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Affine dimension of a point set (`-1` for the empty set is reported as `None`).
pub fn affine_dim(points: &[&Point]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let dirs: Vec<Point> = rest.iter().map(|p| crate::scalar::sub(p, first)).collect();
    Some(rank(&dirs))
}
