//! Small dense helpers on top of nalgebra.

use crate::error::{Error, Result};
use crate::tensor::{Complex, ComplexMatrix};
use nalgebra::{DMatrix, DVector};

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    a.clone().lu().try_inverse().ok_or(Error::Singular)
}

/// Solves `a x = b`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.clone().lu().solve(b).ok_or(Error::Singular)
}

pub fn eigenvalues(a: &ComplexMatrix) -> Vec<Complex> {
    let schur = a.clone().schur();
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|k| t[(k, k)]).collect()
}

pub fn determinant(a: &ComplexMatrix) -> Complex {
    a.clone().lu().determinant()
}

/// `exp(a)`; diagonal input takes a fast exact path.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    if is_diagonal(a) {
        let d = DVector::from_iterator(a.nrows(), (0..a.nrows()).map(|k| a[(k, k)].exp()));
        return DMatrix::from_diagonal(&d);
    }
    a.clone().exp()
}

pub fn is_diagonal(a: &ComplexMatrix) -> bool {
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            if r != c && a[(r, c)] != Complex::new(0.0, 0.0) {
                return false;
            }
        }
    }
    true
}

pub fn diag(entries: &[Complex]) -> ComplexMatrix {
    DMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

/// Largest distance in an optimal-ish pairing of two multisets of equal size.
///
/// Greedy closest-pair matching; exact whenever the sets are well separated
/// relative to the mismatch, which is the only regime the result is used in.
pub fn multiset_distance(a: &[Complex], b: &[Complex]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut done = vec![false; a.len()];
    let mut worst: f64 = 0.0;
    for (dist, i, j) in pairs {
        if done[i] || used[j] {
            continue;
        }
        done[i] = true;
        used[j] = true;
        worst = worst.max(dist);
    }
    worst
}
