//! Formal fundamental solutions `H(z) z^{[A]} e^{zΛ}` of `dF/dz = (Λ + A/z) F`
//! at the irregular singular point `z = ∞`.

use crate::error::{Error, Result};
use crate::linalg;
use crate::tensor::{frobenius, Complex, ComplexMatrix, ZERO};
use nalgebra::DMatrix;

/// Default number of series coefficients.
pub const N_MAX: usize = 64;

/// Relative tolerance under which two eigenvalues of Λ count as equal.
const BLOCK_TOL: f64 = 1e-12;

/// Where an [`IrregularOde`] came from; the dKZ-specific operations need it.
#[derive(Debug, Clone, PartialEq)]
pub enum OdeOrigin {
    Generic,
    /// `Λ = u^{(1)}/κ`, `A = Ω/κ` on `V ⊗ V`.
    Dkz2 { m: usize, kappa: Complex },
    /// `Λ = Σ ξ_i u^{(i)}/κ`, `A = Σ_{i<j} Ω_ij/κ` on `V^{⊗n}`.
    PulledBack { m: usize, n: usize, kappa: Complex, xi: Vec<f64> },
}

/// `dF/dz = (Λ + A/z) F` with Λ diagonal.
#[derive(Debug, Clone)]
pub struct IrregularOde {
    lambda: Vec<Complex>,
    a: ComplexMatrix,
    a_diag: ComplexMatrix,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    origin: OdeOrigin,
}

impl IrregularOde {
    pub fn new(lambda: Vec<Complex>, a: ComplexMatrix) -> Result<Self> {
        Self::with_origin(lambda, a, OdeOrigin::Generic)
    }

    pub fn with_origin(lambda: Vec<Complex>, a: ComplexMatrix, origin: OdeOrigin) -> Result<Self> {
        let d = lambda.len();
        if d == 0 {
            return Err(Error::InvalidParameter("empty system".into()));
        }
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d}"),
                got: format!("{}x{}", a.nrows(), a.ncols()),
            });
        }
        if lambda.iter().chain(a.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let (blocks, block_of) = eigen_blocks(&lambda);
        let a_diag = project_with(&a, &block_of);
        Ok(Self { lambda, a, a_diag, blocks, block_of, origin })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Complex] {
        &self.lambda
    }

    pub fn lambda_matrix(&self) -> ComplexMatrix {
        linalg::diag(&self.lambda)
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    /// `[A]`, the projection of `A` to the centralizer of Λ.
    pub fn a_diag(&self) -> &ComplexMatrix {
        &self.a_diag
    }

    /// Index sets of equal Λ-eigenvalues, in order of first appearance.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn origin(&self) -> &OdeOrigin {
        &self.origin
    }

    /// `Λ + A/z`.
    pub fn coefficient(&self, z: Complex) -> ComplexMatrix {
        let mut m = &self.a / z;
        for (k, l) in self.lambda.iter().enumerate() {
            m[(k, k)] += l;
        }
        m
    }

    /// Smallest nonzero `|λ_a - λ_b|`, or `None` when Λ is scalar.
    pub fn min_gap(&self) -> Option<f64> {
        self.gaps().reduce(f64::min)
    }

    pub fn max_gap(&self) -> Option<f64> {
        self.gaps().reduce(f64::max)
    }

    fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        let reps: Vec<Complex> = self.blocks.iter().map(|b| self.lambda[b[0]]).collect();
        let n = reps.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).map(move |(i, j)| (reps[i] - reps[j]).norm())
    }
}

fn eigen_blocks(lambda: &[Complex]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let scale = 1.0 + lambda.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0; lambda.len()];
    for (k, l) in lambda.iter().enumerate() {
        match blocks.iter().position(|b| (lambda[b[0]] - l).norm() <= BLOCK_TOL * scale) {
            Some(p) => {
                blocks[p].push(k);
                block_of[k] = p;
            }
            None => {
                block_of[k] = blocks.len();
                blocks.push(vec![k]);
            }
        }
    }
    (blocks, block_of)
}

fn project_with(a: &ComplexMatrix, block_of: &[usize]) -> ComplexMatrix {
    DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| if block_of[r] == block_of[c] { a[(r, c)] } else { ZERO })
}

/// Keeps the entries `(a, b)` of `a` with `λ_a = λ_b` and zeroes the rest.
pub fn project_centralizer(a: &ComplexMatrix, lambda: &[Complex]) -> Result<ComplexMatrix> {
    if a.nrows() != lambda.len() || a.ncols() != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", lambda.len()),
            got: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    Ok(project_with(a, &eigen_blocks(lambda).1))
}

/// A point on the universal cover of `C^*`: `log z = ln r + iθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverPoint {
    pub r: f64,
    pub theta: f64,
}

impl CoverPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !theta.is_finite() {
            return Err(Error::ZeroArgument);
        }
        Ok(Self { r, theta })
    }

    /// The principal-branch lift of `z`.
    pub fn principal(z: Complex) -> Result<Self> {
        Self::new(z.norm(), z.arg())
    }

    pub fn z(&self) -> Complex {
        Complex::from_polar(self.r, self.theta)
    }

    pub fn log(&self) -> Complex {
        Complex::new(self.r.ln(), self.theta)
    }
}

/// Truncated formal solution; `coeffs[0]` is the identity.
#[derive(Debug, Clone)]
pub struct FormalSolution {
    ode: IrregularOde,
    coeffs: Vec<ComplexMatrix>,
}

/// Builds `H_1..H_N` from `[Λ, H_{k+1}] = H_k[A] - A H_k - k H_k`.
///
/// The off-block part of `H_{k+1}` comes from dividing by `λ_a - λ_b`; the
/// block-diagonal part is forced by solvability one order higher:
/// `D[A] - [A]D - (k+1)D = bd(A_off O_{k+1})`, solved blockwise.
pub fn formal_series(ode: &IrregularOde, order: usize) -> Result<FormalSolution> {
    let d = ode.dim();
    let ad = ode.a_diag();
    let a_off = ode.a() - ad;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(ComplexMatrix::identity(d, d));
    for k in 0..order {
        let hk = &coeffs[k];
        let rhs = hk * ad - ode.a() * hk - hk * Complex::from(k as f64);
        let mut next = ComplexMatrix::zeros(d, d);
        for c in 0..d {
            for r in 0..d {
                if !ode.same_block(r, c) {
                    let gap = ode.lambda[r] - ode.lambda[c];
                    if gap.norm() == 0.0 {
                        return Err(Error::SingularLambda { a: r + 1, b: c + 1 });
                    }
                    next[(r, c)] = rhs[(r, c)] / gap;
                }
            }
        }
        let forced = &a_off * &next;
        for block in ode.blocks() {
            let sol = solve_block(ad, &forced, block, (k + 1) as f64).ok_or(Error::Resonance { order: k + 1 })?;
            for (p, &r) in block.iter().enumerate() {
                for (q, &c) in block.iter().enumerate() {
                    next[(r, c)] = sol[(p, q)];
                }
            }
        }
        coeffs.push(next);
    }
    Ok(FormalSolution { ode: ode.clone(), coeffs })
}

/// Solves `D A_B - A_B D - s D = rhs_B` on one block; `None` if inconsistent.
fn solve_block(ad: &ComplexMatrix, rhs: &ComplexMatrix, block: &[usize], s: f64) -> Option<ComplexMatrix> {
    let b = block.len();
    let ab = DMatrix::from_fn(b, b, |p, q| ad[(block[p], block[q])]);
    let rb = DMatrix::from_fn(b, b, |p, q| rhs[(block[p], block[q])]);
    let scale = frobenius(&ab) + s;
    if b == 1 {
        let coef = -Complex::from(s);
        return Some(DMatrix::from_element(1, 1, rb[(0, 0)] / coef));
    }
    // column-major vec: vec(D A) = (A^T ⊗ 1) vec D, vec(A D) = (1 ⊗ A) vec D
    let id = ComplexMatrix::identity(b, b);
    let op = ab.transpose().kronecker(&id) - id.kronecker(&ab) - ComplexMatrix::identity(b * b, b * b) * Complex::from(s);
    let v = nalgebra::DVector::from_column_slice(rb.as_slice());
    let svd = op.clone().svd(true, true);
    let x = svd.solve(&v, 1e-10 * scale).ok()?;
    let res = (&op * &x - &v).norm();
    if res > 1e-10 * v.norm() && res > 1e-300 {
        return None;
    }
    Some(DMatrix::from_column_slice(b, b, x.as_slice()))
}

impl FormalSolution {
    pub fn ode(&self) -> &IrregularOde {
        &self.ode
    }

    /// `H_0..H_N`.
    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// `N`, the highest available coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.order() {
            Err(Error::InvalidParameter(format!("order {order} exceeds series length {}", self.order())))
        } else {
            Ok(())
        }
    }

    /// `(Σ_{j≤k} H_j z^{-j})`, and its derivative.
    fn partial_sum(&self, z: Complex, order: usize) -> (ComplexMatrix, ComplexMatrix) {
        let d = self.ode.dim();
        let zinv = z.inv();
        let mut s = ComplexMatrix::zeros(d, d);
        let mut ds = ComplexMatrix::zeros(d, d);
        let mut p = Complex::new(1.0, 0.0);
        for (j, h) in self.coeffs.iter().take(order + 1).enumerate() {
            s += h * p;
            if j > 0 {
                ds -= h * (p * zinv * j as f64);
            }
            p *= zinv;
        }
        (s, ds)
    }

    /// `z^{[A]} e^{zΛ}` on the branch of `point`.
    pub fn leading(&self, point: CoverPoint) -> ComplexMatrix {
        let z = point.z();
        let mut e = linalg::expm(&(self.ode.a_diag() * point.log()));
        for (k, l) in self.ode.lambda().iter().enumerate() {
            let f = (l * z).exp();
            for r in 0..e.nrows() {
                e[(r, k)] *= f;
            }
        }
        e
    }

    /// `(Σ_{j≤k} H_j z^{-j}) z^{[A]} e^{zΛ}`.
    pub fn evaluate(&self, point: CoverPoint, order: usize) -> Result<ComplexMatrix> {
        self.check_order(order)?;
        let (s, _) = self.partial_sum(point.z(), order);
        Ok(s * self.leading(point))
    }

    /// `‖H' + H(Λ + [A]/z) - (Λ + A/z)H‖` for the truncated series `H`, i.e.
    /// the substitution defect of `F` with the factor `z^{[A]} e^{zΛ}` removed.
    pub fn substitution_residual(&self, point: CoverPoint, order: usize) -> Result<f64> {
        self.check_order(order)?;
        let z = point.z();
        let (s, ds) = self.partial_sum(z, order);
        let inner = self.ode.a_diag() / z + self.ode.lambda_matrix();
        let res = ds + &s * inner - self.ode.coefficient(z) * &s;
        Ok(frobenius(&res))
    }

    /// Order `k ≥ 1` minimising `‖H_k‖ r^{-k}`.
    ///
    /// A series that terminates returns its last nonzero index. Fails when the
    /// terms already grow from `k = 1` to `k = 2`.
    pub fn optimal_truncation(&self, r: f64) -> Result<usize> {
        if !(r > 0.0) {
            return Err(Error::ZeroArgument);
        }
        let terms = self.term_sizes(r);
        if let Some(k) = (1..terms.len()).find(|&k| terms[k] == 0.0) {
            return Ok(k - 1);
        }
        if terms.len() > 2 && terms[2] > terms[1] {
            return Err(Error::MatchRadiusTooSmall(format!("series terms grow from k = 1 at |z| = {r}")));
        }
        Ok(self.least_term_order(r))
    }

    /// `argmin_{k≥1} ‖H_k‖ r^{-k}` without the growth check of
    /// [`FormalSolution::optimal_truncation`].
    pub fn least_term_order(&self, r: f64) -> usize {
        let terms = self.term_sizes(r);
        if let Some(k) = (1..terms.len()).find(|&k| terms[k] == 0.0) {
            return k - 1;
        }
        let mut best = 1.min(self.order());
        for k in 1..terms.len() {
            if terms[k] < terms[best] {
                best = k;
            }
        }
        best
    }

    /// `‖H_k‖ r^{-k}` for `k = 0..=N`.
    pub fn term_sizes(&self, r: f64) -> Vec<f64> {
        let lr = r.ln();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, h)| {
                let n = frobenius(h);
                if n == 0.0 {
                    0.0
                } else {
                    (n.ln() - k as f64 * lr).exp()
                }
            })
            .collect()
    }

    /// Size of the first omitted term at the optimal order, an estimate of
    /// the truncation error at radius `r`.
    pub fn tail_estimate(&self, r: f64) -> Result<(usize, f64)> {
        let k = self.optimal_truncation(r)?;
        let terms = self.term_sizes(r);
        if terms[k + 1..].iter().all(|t| *t == 0.0) {
            return Ok((k, 0.0));
        }
        Ok((k, terms.get(k + 1).copied().unwrap_or(0.0).max(if k == 0 { 0.0 } else { terms[k] })))
    }
}

/// Optimal truncation order at `z` using a series of length [`N_MAX`].
pub fn optimal_truncation(ode: &IrregularOde, z: Complex) -> Result<usize> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    formal_series(ode, N_MAX)?.optimal_truncation(z.norm())
}
