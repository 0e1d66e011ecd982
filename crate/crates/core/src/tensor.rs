//! Dense operators on tensor powers of the natural representation `V = C^m`.
//!
//! Basis vectors `e_{a_1} (x) ... (x) e_{a_n}` are ordered lexicographically:
//! the row index is `sum_k (a_k - 1) m^{n-k}`. Factor and basis indices in the
//! public API are 1-based.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Complex = Complex64;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Largest total dimension `m^n` accepted for dense storage.
pub const MAX_TOTAL_DIM: usize = 4096;

pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);
pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);

/// `V^{(x) n}` with `dim V = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorSpace {
    m: usize,
    n: usize,
    dim: usize,
}

impl TensorSpace {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("dim V must be >= 2, got {m}")));
        }
        if n < 1 {
            return Err(Error::InvalidParameter("need at least one tensor factor".into()));
        }
        let mut dim = 1usize;
        for _ in 0..n {
            dim = dim.saturating_mul(m);
            if dim > MAX_TOTAL_DIM {
                return Err(Error::SpaceTooLarge { dim, max: MAX_TOTAL_DIM });
            }
        }
        Ok(Self { m, n, dim })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total dimension `m^n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 0-based digits `(a_1 - 1, ..., a_n - 1)` of a 0-based basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = index % self.m;
            index /= self.m;
        }
        out
    }

    /// Inverse of [`TensorSpace::digits`].
    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.m + d)
    }

    fn check_factor(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, max: self.n })
        } else {
            Ok(())
        }
    }
}

/// An ordered pair of distinct factor indices `(i, j)`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorPair {
    i: usize,
    j: usize,
}

impl FactorPair {
    pub fn new(i: usize, j: usize, space: &TensorSpace) -> Result<Self> {
        space.check_factor(i)?;
        space.check_factor(j)?;
        if i == j {
            return Err(Error::InvalidParameter(format!("factor pair ({i}, {j}) is not distinct")));
        }
        Ok(Self { i, j })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }
}

/// `E_{ab}` in `gl_m`: a single one at row `a`, column `b` (1-based).
pub fn elementary_matrix(a: usize, b: usize, m: usize) -> Result<ComplexMatrix> {
    for idx in [a, b] {
        if idx == 0 || idx > m {
            return Err(Error::IndexOutOfRange { index: idx, max: m });
        }
    }
    let mut e = ComplexMatrix::zeros(m, m);
    e[(a - 1, b - 1)] = ONE;
    Ok(e)
}

fn check_dim(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidParameter(format!("dim V must be >= 2, got {m}")))
    } else {
        Ok(())
    }
}

/// The Casimir `Omega = sum_{a,b} E_ab (x) E_ba`, i.e. the flip on `V (x) V`.
pub fn casimir_omega(m: usize) -> Result<ComplexMatrix> {
    check_dim(m)?;
    let mut omega = ComplexMatrix::zeros(m * m, m * m);
    for a in 0..m {
        for b in 0..m {
            omega[(a * m + b, b * m + a)] = ONE;
        }
    }
    Ok(omega)
}

/// `[Omega] = sum_a E_aa (x) E_aa`, the diagonal part of the Casimir.
pub fn diagonal_omega(m: usize) -> Result<ComplexMatrix> {
    check_dim(m)?;
    let mut d = ComplexMatrix::zeros(m * m, m * m);
    for a in 0..m {
        d[(a * m + a, a * m + a)] = ONE;
    }
    Ok(d)
}

/// Acts with `op in End(V (x) V)` on factors `(i, j)` of the tensor space,
/// the first slot of `op` on factor `i`.
pub fn embed_pair(op: &ComplexMatrix, pair: FactorPair, space: &TensorSpace) -> Result<ComplexMatrix> {
    let m = space.m();
    let m2 = m * m;
    if op.nrows() != m2 || op.ncols() != m2 {
        return Err(Error::DimensionMismatch {
            expected: format!("{m2}x{m2}"),
            got: format!("{}x{}", op.nrows(), op.ncols()),
        });
    }
    let (fi, fj) = (pair.i() - 1, pair.j() - 1);
    let dim = space.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    let mut digits = vec![0; space.n()];
    for col in 0..dim {
        digits.copy_from_slice(&space.digits(col));
        let (ci, cj) = (digits[fi], digits[fj]);
        let op_col = ci * m + cj;
        for a in 0..m {
            for b in 0..m {
                let v = op[(a * m + b, op_col)];
                if v == ZERO {
                    continue;
                }
                digits[fi] = a;
                digits[fj] = b;
                out[(space.index(&digits), col)] += v;
            }
        }
    }
    Ok(out)
}

/// Acts with `op in End(V)` on factor `i` (1-based).
pub fn embed_single(op: &ComplexMatrix, i: usize, space: &TensorSpace) -> Result<ComplexMatrix> {
    let m = space.m();
    if op.nrows() != m || op.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: format!("{m}x{m}"),
            got: format!("{}x{}", op.nrows(), op.ncols()),
        });
    }
    space.check_factor(i)?;
    let left = ComplexMatrix::identity(m.pow((i - 1) as u32), m.pow((i - 1) as u32));
    let right = ComplexMatrix::identity(m.pow((space.n() - i) as u32), m.pow((space.n() - i) as u32));
    Ok(left.kronecker(op).kronecker(&right))
}

/// The permutation `T_i` of factors `i` and `i + 1`.
pub fn permutation_t(i: usize, space: &TensorSpace) -> Result<ComplexMatrix> {
    if i == 0 || i + 1 > space.n() {
        return Err(Error::IndexOutOfRange { index: i, max: space.n().saturating_sub(1) });
    }
    let dim = space.dim();
    let mut t = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut digits = space.digits(col);
        digits.swap(i - 1, i);
        t[(space.index(&digits), col)] = ONE;
    }
    Ok(t)
}

/// `sum_{i<j} Omega_ij` on the tensor space.
pub fn casimir_sum(space: &TensorSpace) -> Result<ComplexMatrix> {
    pair_sum(space, &casimir_omega(space.m())?)
}

/// `sum_{i<j} [Omega]_ij` on the tensor space.
pub fn diagonal_casimir_sum(space: &TensorSpace) -> Result<ComplexMatrix> {
    pair_sum(space, &diagonal_omega(space.m())?)
}

fn pair_sum(space: &TensorSpace, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(space.dim(), space.dim());
    for i in 1..=space.n() {
        for j in i + 1..=space.n() {
            out += embed_pair(op, FactorPair::new(i, j, space)?, space)?;
        }
    }
    Ok(out)
}

/// Frobenius norm, the residual norm used throughout.
pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn elementary_matrices() {
        let e11 = elementary_matrix(1, 1, 2).unwrap();
        assert_eq!(e11, ComplexMatrix::from_row_slice(2, 2, &[c(1.), c(0.), c(0.), c(0.)]));
        let e12 = elementary_matrix(1, 2, 2).unwrap();
        assert_eq!(e12, ComplexMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(0.), c(0.)]));
        let e21 = elementary_matrix(2, 1, 3).unwrap();
        for r in 0..3 {
            for k in 0..3 {
                let want = if (r, k) == (1, 0) { 1.0 } else { 0.0 };
                assert_eq!(e21[(r, k)], c(want));
            }
        }
        assert!(matches!(elementary_matrix(3, 1, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(elementary_matrix(0, 1, 2).is_err());
    }

    #[test]
    fn casimir_is_flip() {
        let omega = casimir_omega(2).unwrap();
        let flip = [[1., 0., 0., 0.], [0., 0., 1., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.]];
        for r in 0..4 {
            for k in 0..4 {
                assert_eq!(omega[(r, k)], c(flip[r][k]));
            }
        }
        assert_eq!(&omega * &omega, ComplexMatrix::identity(4, 4));

        // brute force over basis pairs for m = 3
        let m = 3;
        let omega = casimir_omega(m).unwrap();
        for a in 0..m {
            for b in 0..m {
                let mut x = nalgebra::DVector::<Complex>::zeros(m * m);
                x[a * m + b] = ONE;
                let y = &omega * x;
                for k in 0..m * m {
                    let want = if k == b * m + a { ONE } else { ZERO };
                    assert_eq!(y[k], want);
                }
            }
        }
        assert!(casimir_omega(1).is_err());
    }

    #[test]
    fn diagonal_omega_pattern() {
        let d2 = diagonal_omega(2).unwrap();
        assert_eq!(d2, ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.), c(0.), c(0.), c(1.)])));
        for m in 2..6 {
            assert_eq!(diagonal_omega(m).unwrap().trace(), c(m as f64));
        }
        let d3 = diagonal_omega(3).unwrap();
        for k in 0..9 {
            let want = if k == 0 || k == 4 || k == 8 { 1.0 } else { 0.0 };
            assert_eq!(d3[(k, k)], c(want));
        }
        // the diagonal part of the Casimir, entrywise
        for m in 2..5 {
            let omega = casimir_omega(m).unwrap();
            let d = diagonal_omega(m).unwrap();
            for r in 0..m * m {
                for k in 0..m * m {
                    let want = if r == k { omega[(r, k)] } else { ZERO };
                    assert_eq!(d[(r, k)], want);
                }
            }
        }
    }

    #[test]
    fn embed_pair_conventions() {
        let s22 = TensorSpace::new(2, 2).unwrap();
        let omega = casimir_omega(2).unwrap();
        assert_eq!(embed_pair(&omega, FactorPair::new(1, 2, &s22).unwrap(), &s22).unwrap(), omega);

        // rank one X (x) Y on factors (1, 3) is X (x) 1 (x) Y
        let s23 = TensorSpace::new(2, 3).unwrap();
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(1.), c(2.), c(3.), c(4.)]);
        let y = ComplexMatrix::from_row_slice(2, 2, &[c(0.), Complex::new(0., 1.), c(-1.), c(5.)]);
        let op = x.kronecker(&y);
        let got = embed_pair(&op, FactorPair::new(1, 3, &s23).unwrap(), &s23).unwrap();
        let want = x.kronecker(&ComplexMatrix::identity(2, 2)).kronecker(&y);
        assert_eq!(got, want);

        // reversed slots: op on (3, 1) puts its first slot on factor 3
        let got = embed_pair(&op, FactorPair::new(3, 1, &s23).unwrap(), &s23).unwrap();
        let want = y.kronecker(&ComplexMatrix::identity(2, 2)).kronecker(&x);
        assert_eq!(got, want);

        let s24 = TensorSpace::new(2, 4).unwrap();
        let a = embed_pair(&omega, FactorPair::new(1, 2, &s24).unwrap(), &s24).unwrap();
        let b = embed_pair(&omega, FactorPair::new(3, 4, &s24).unwrap(), &s24).unwrap();
        assert_eq!(frobenius(&commutator(&a, &b)), 0.0);

        assert!(embed_pair(&ComplexMatrix::identity(3, 3), FactorPair::new(1, 2, &s22).unwrap(), &s22).is_err());
        assert!(FactorPair::new(2, 2, &s22).is_err());
        assert!(FactorPair::new(1, 3, &s22).is_err());
    }

    #[test]
    fn embed_single_conventions() {
        let s = TensorSpace::new(2, 2).unwrap();
        let u = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.), c(7.)]));
        let got = embed_single(&u, 1, &s).unwrap();
        assert_eq!(got.diagonal().iter().copied().collect::<Vec<_>>(), vec![c(3.), c(3.), c(7.), c(7.)]);
        assert_eq!(embed_single(&ComplexMatrix::identity(2, 2), 2, &s).unwrap(), ComplexMatrix::identity(4, 4));
        assert!(embed_single(&u, 3, &s).is_err());

        // sum_i u^(i) is invariant under every T_i
        let s3 = TensorSpace::new(3, 3).unwrap();
        let u3 = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.), Complex::new(0., 2.), c(-0.5)]));
        let mut total = ComplexMatrix::zeros(27, 27);
        for i in 1..=3 {
            total += embed_single(&u3, i, &s3).unwrap();
        }
        for i in 1..=2 {
            let t = permutation_t(i, &s3).unwrap();
            assert_eq!(&t * &total * &t, total);
        }
    }

    #[test]
    fn permutations() {
        let s = TensorSpace::new(2, 2).unwrap();
        assert_eq!(permutation_t(1, &s).unwrap(), casimir_omega(2).unwrap());
        let s3 = TensorSpace::new(3, 3).unwrap();
        let t1 = permutation_t(1, &s3).unwrap();
        let t2 = permutation_t(2, &s3).unwrap();
        assert_eq!(&t1 * &t1, ComplexMatrix::identity(27, 27));
        assert_eq!(&t1 * &t2 * &t1, &t2 * &t1 * &t2);
        assert!(permutation_t(3, &s3).is_err());
        assert!(permutation_t(0, &s3).is_err());
    }

    #[test]
    fn space_limits() {
        assert!(TensorSpace::new(2, 12).is_ok());
        assert!(matches!(TensorSpace::new(2, 13), Err(Error::SpaceTooLarge { .. })));
        assert!(TensorSpace::new(1, 3).is_err());
        let s = TensorSpace::new(3, 4).unwrap();
        for idx in [0, 5, 17, 80] {
            assert_eq!(s.index(&s.digits(idx)), idx);
        }
        assert_eq!(s.digits(5), vec![0, 0, 1, 2]);
    }
}
