//! Parameters of the dKZ equations and the ODEs built from them.

use crate::error::{Error, Result};
use crate::formal::{IrregularOde, OdeOrigin};
use crate::tensor::{casimir_omega, diagonal_omega, embed_pair, Complex, ComplexMatrix, FactorPair, TensorSpace};

/// Relative tolerance of the purely-imaginary and distinctness checks.
pub const VALIDATION_TOL: f64 = 1e-12;

/// `u = diag(u_1..u_m)` and `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DkzParams {
    u: Vec<Complex>,
    kappa: Complex,
    permissive: bool,
}

impl DkzParams {
    /// Requires distinct `u_a` and, unless `permissive`, purely imaginary `u_a/κ`.
    pub fn new(u: Vec<Complex>, kappa: Complex, permissive: bool) -> Result<Self> {
        if u.len() < 2 {
            return Err(Error::InvalidParameter(format!("dim V must be >= 2, got {}", u.len())));
        }
        let finite = |z: &Complex| z.re.is_finite() && z.im.is_finite();
        if !u.iter().all(finite) || !finite(&kappa) {
            return Err(Error::InvalidParameter("non-finite u or kappa".into()));
        }
        if kappa.norm() == 0.0 {
            return Err(Error::InvalidParameter("kappa must be nonzero".into()));
        }
        let scale = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for a in 0..u.len() {
            for b in a + 1..u.len() {
                if (u[a] - u[b]).norm() <= VALIDATION_TOL * scale {
                    return Err(Error::NonDistinct { a: a + 1, b: b + 1 });
                }
            }
        }
        if !permissive {
            for (k, x) in u.iter().enumerate() {
                let w = x / kappa;
                if w.re.abs() > VALIDATION_TOL * (1.0 + w.norm()) {
                    return Err(Error::NotPurelyImaginary { index: k + 1, real: w.re });
                }
            }
        }
        Ok(Self { u, kappa, permissive })
    }

    pub fn m(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[Complex] {
        &self.u
    }

    pub fn kappa(&self) -> Complex {
        self.kappa
    }

    pub fn permissive(&self) -> bool {
        self.permissive
    }

    /// `u` and `κ` multiplied by the same real factor.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.u.iter().map(|x| x * factor).collect(), self.kappa * factor, self.permissive)
    }

    /// `Λ = u^{(1)}/κ`, `A = Ω/κ` on `V ⊗ V`.
    pub fn two_point_ode(&self) -> Result<IrregularOde> {
        let m = self.m();
        let lambda = (0..m * m).map(|k| self.u[k / m] / self.kappa).collect();
        IrregularOde::with_origin(lambda, casimir_omega(m)? / self.kappa, OdeOrigin::Dkz2 { m, kappa: self.kappa })
    }

    /// `Λ = Σ ξ_i u^{(i)}/κ`, `A = Σ_{i<j} Ω_ij/κ` on `V^{⊗n}`, `n = ξ.len()`.
    pub fn pulled_back_ode(&self, xi: &[f64]) -> Result<IrregularOde> {
        let space = TensorSpace::new(self.m(), xi.len())?;
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite xi".into()));
        }
        let conn = self.connection(xi.len())?;
        let lambda: Vec<Complex> = (0..space.dim())
            .map(|k| {
                let digits = space.digits(k);
                digits.iter().zip(xi).map(|(&a, &x)| self.u[a] * x).sum::<Complex>() / self.kappa
            })
            .collect();
        let mut a = ComplexMatrix::zeros(space.dim(), space.dim());
        for (_, _, om) in &conn.omegas {
            a += om;
        }
        IrregularOde::with_origin(
            lambda,
            a / self.kappa,
            OdeOrigin::PulledBack { m: self.m(), n: xi.len(), kappa: self.kappa, xi: xi.to_vec() },
        )
    }

    /// Precomputed pieces of the dKZ connection on `n` points.
    pub fn connection(&self, n: usize) -> Result<DkzConnection> {
        let space = TensorSpace::new(self.m(), n)?;
        let omega = casimir_omega(self.m())?;
        let mut omegas = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                omegas.push((i - 1, j - 1, embed_pair(&omega, FactorPair::new(i, j, &space)?, &space)?));
            }
        }
        let u_diag = (0..n)
            .map(|i| (0..space.dim()).map(|k| self.u[space.digits(k)[i]]).collect())
            .collect();
        Ok(DkzConnection { space, kappa: self.kappa, u_diag, omegas })
    }

    /// `Σ_{i<j} [Ω]_ij` entries on the diagonal of `V^{⊗n}`.
    pub fn diagonal_casimirs(&self, n: usize) -> Result<Vec<(usize, usize, Vec<f64>)>> {
        let space = TensorSpace::new(self.m(), n)?;
        let d = diagonal_omega(self.m())?;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let e = embed_pair(&d, FactorPair::new(i, j, &space)?, &space)?;
                out.push((i - 1, j - 1, e.diagonal().iter().map(|z| z.re).collect()));
            }
        }
        Ok(out)
    }
}

/// The dKZ connection on `V^{⊗n}` with embedded operators cached.
#[derive(Debug, Clone)]
pub struct DkzConnection {
    space: TensorSpace,
    kappa: Complex,
    u_diag: Vec<Vec<Complex>>,
    omegas: Vec<(usize, usize, ComplexMatrix)>,
}

impl DkzConnection {
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    /// `(1/κ) Σ_i (u^{(i)} + Σ_{j≠i} Ω_ij/(z_i - z_j)) ż_i`.
    pub fn pullback(&self, z: &[Complex], dz: &[Complex]) -> ComplexMatrix {
        let dim = self.space.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (a, b, om) in &self.omegas {
            let (a, b) = (*a, *b);
            let w = (dz[a] - dz[b]) / (z[a] - z[b]);
            if w != Complex::new(0.0, 0.0) {
                m += om * w;
            }
        }
        for (i, ud) in self.u_diag.iter().enumerate() {
            if dz[i] == Complex::new(0.0, 0.0) {
                continue;
            }
            for k in 0..dim {
                m[(k, k)] += ud[k] * dz[i];
            }
        }
        m / self.kappa
    }

    /// The coefficient of `dz_i` alone.
    pub fn component(&self, z: &[Complex], i: usize) -> ComplexMatrix {
        let mut dz = vec![Complex::new(0.0, 0.0); z.len()];
        dz[i] = Complex::new(1.0, 0.0);
        self.pullback(z, &dz)
    }
}
