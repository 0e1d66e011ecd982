//! Braid group representations `b_i ↦ T_i R^{i,i+1}` and Yang–Baxter checks.

use crate::error::{Error, Result};
use crate::linalg;
use crate::tensor::{embed_pair, frobenius, permutation_t, Complex, ComplexMatrix, FactorPair, TensorSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A word in the generators `b_1..b_{n-1}`; negative letters are inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("braid needs at least one strand".into()));
        }
        for &l in &letters {
            let i = l.unsigned_abs() as usize;
            if l == 0 || i >= n {
                return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
            }
        }
        Ok(Self { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn inverse(&self) -> Self {
        Self { n: self.n, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::StrandMismatch { expected: self.n, got: other.n });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self { n: self.n, letters })
    }
}

/// `ρ(b_i) = T_i R^{i,i+1}` with generators and their inverses cached.
#[derive(Debug, Clone)]
pub struct BraidRepresentation {
    space: TensorSpace,
    r: ComplexMatrix,
    generators: Vec<ComplexMatrix>,
    inverses: Vec<ComplexMatrix>,
}

pub fn build_representation(r: &ComplexMatrix, space: TensorSpace) -> Result<BraidRepresentation> {
    let m2 = space.m() * space.m();
    if r.nrows() != m2 || r.ncols() != m2 {
        return Err(Error::DimensionMismatch { expected: format!("{m2}x{m2}"), got: format!("{}x{}", r.nrows(), r.ncols()) });
    }
    let mut generators = Vec::new();
    let mut inverses = Vec::new();
    for i in 1..space.n() {
        let g = permutation_t(i, &space)? * embed_pair(r, FactorPair::new(i, i + 1, &space)?, &space)?;
        inverses.push(linalg::inverse(&g)?);
        generators.push(g);
    }
    Ok(BraidRepresentation { space, r: r.clone(), generators, inverses })
}

impl BraidRepresentation {
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn r(&self) -> &ComplexMatrix {
        &self.r
    }

    /// `ρ(b_i)`, 1-based.
    pub fn generator(&self, i: usize) -> Result<&ComplexMatrix> {
        self.generators.get(i.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: i, max: self.generators.len() })
    }

    pub fn generator_inverse(&self, i: usize) -> Result<&ComplexMatrix> {
        self.inverses.get(i.wrapping_sub(1)).ok_or(Error::IndexOutOfRange { index: i, max: self.inverses.len() })
    }

    /// Product of the letters' images, left to right.
    pub fn evaluate_word(&self, w: &BraidWord) -> Result<ComplexMatrix> {
        if w.n() != self.space.n() {
            return Err(Error::StrandMismatch { expected: self.space.n(), got: w.n() });
        }
        let d = self.space.dim();
        let mut out = ComplexMatrix::identity(d, d);
        for &l in w.letters() {
            let i = l.unsigned_abs() as usize;
            out = if l > 0 { out * self.generator(i)? } else { out * self.generator_inverse(i)? };
        }
        Ok(out)
    }
}

/// `‖R¹²R¹³R²³ - R²³R¹³R¹²‖ / ‖R‖³` on `V^{⊗3}`.
pub fn ybe_residual(r: &ComplexMatrix, m: usize) -> Result<f64> {
    let space = TensorSpace::new(m, 3)?;
    let r12 = embed_pair(r, FactorPair::new(1, 2, &space)?, &space)?;
    let r13 = embed_pair(r, FactorPair::new(1, 3, &space)?, &space)?;
    let r23 = embed_pair(r, FactorPair::new(2, 3, &space)?, &space)?;
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    Ok(frobenius(&(lhs - rhs)) / frobenius(r).powi(3))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraidResiduals {
    /// `max ‖b_i b_j - b_j b_i‖ / (‖b_i‖‖b_j‖)` over `|i - j| > 1`; `None` for `n < 4`.
    pub far_commutation: Option<f64>,
    /// `max ‖b_i b_{i+1} b_i - b_{i+1} b_i b_{i+1}‖ / (‖b_i‖²‖b_{i+1}‖)`.
    pub braid: f64,
}

pub fn braid_relation_residuals(rep: &BraidRepresentation) -> Result<BraidResiduals> {
    let n = rep.space().n();
    if n < 3 {
        return Err(Error::TooFewStrands { needed: 3, got: n });
    }
    let g = &rep.generators;
    let mut braid: f64 = 0.0;
    for i in 0..n - 2 {
        let (a, b) = (&g[i], &g[i + 1]);
        let res = frobenius(&(a * b * a - b * a * b)) / (frobenius(a).powi(2) * frobenius(b));
        braid = braid.max(res);
    }
    let far_commutation = if n >= 4 {
        let mut far: f64 = 0.0;
        for i in 0..n - 1 {
            for j in i + 2..n - 1 {
                let (a, b) = (&g[i], &g[j]);
                far = far.max(frobenius(&(a * b - b * a)) / (frobenius(a) * frobenius(b)));
            }
        }
        Some(far)
    } else {
        None
    };
    Ok(BraidResiduals { far_commutation, braid })
}

/// `R + amplitude · N` with `N` entrywise uniform in the unit square, seeded.
pub fn perturb(r: &ComplexMatrix, amplitude: f64, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = r.clone();
    for z in out.iter_mut() {
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = rng.random_range(-1.0..1.0);
        *z += Complex::new(re, im) * amplitude;
    }
    out
}
