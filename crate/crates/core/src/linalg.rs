//! Gaussian elimination over F_q with first-nonzero pivoting.

use crate::field::{Scalar, ScalarField};

pub(crate) type Matrix = Vec<Vec<Scalar>>;

/// Row-reduces in place and returns the rank.
fn reduce(f: &ScalarField, m: &mut Matrix, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != Scalar::ZERO) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = f.inv(m[rank][col]).expect("pivot is nonzero");
        for c in 0..m[rank].len() {
            m[rank][c] = f.mul(m[rank][c], inv);
        }
        for r in 0..rows {
            if r != rank && m[r][col] != Scalar::ZERO {
                let factor = m[r][col];
                for c in 0..m[r].len() {
                    let t = f.mul(factor, m[rank][c]);
                    m[r][c] = f.sub(m[r][c], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn rank(f: &ScalarField, m: &Matrix) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut work = m.clone();
    reduce(f, &mut work, cols)
}

/// Inverse of a square matrix, or `None` if singular.
pub(crate) fn inverse(f: &ScalarField, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::ONE } else { Scalar::ZERO }));
            r
        })
        .collect();
    if reduce(f, &mut aug, n) < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
