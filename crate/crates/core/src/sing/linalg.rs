//! Small dense linear algebra over ℚ, enough for 4×4 coordinate changes.

use num_traits::{One, Zero};

use crate::expr::ExactScalar;

pub(crate) type Matrix = Vec<Vec<ExactScalar>>;

pub(crate) fn from_ints(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| crate::expr::int_scalar(v)).collect())
        .collect()
}

/// Row echelon form in place; returns the rank and the sign-adjusted product
/// of pivots (the determinant when the matrix is square).
#[allow(clippy::needless_range_loop)]
fn eliminate(m: &mut Matrix) -> (usize, ExactScalar) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut det = ExactScalar::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            det = ExactScalar::zero();
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            det = -det;
        }
        let p = m[rank][col].clone();
        det *= &p;
        for r in rank + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..cols {
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (rank, det)
}

pub(crate) fn rank(m: &Matrix) -> usize {
    eliminate(&mut m.clone()).0
}

pub(crate) fn det(m: &Matrix) -> ExactScalar {
    let (rank, det) = eliminate(&mut m.clone());
    if rank < m.len() {
        ExactScalar::zero()
    } else {
        det
    }
}

/// Inverse of a square matrix, or `None` when singular.
#[allow(clippy::needless_range_loop)]
pub(crate) fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..2 * n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
