//! The `U_q(sl_2)` R-matrix on `C² ⊗ C²` and its comparison with Stokes multipliers.

use crate::error::{Error, Result};
use crate::linalg;
use crate::stokes::StokesData;
use crate::tensor::{casimir_omega, frobenius, Complex, ComplexMatrix};
use std::f64::consts::PI;

/// `q` together with a tag naming the normalization of [`uq_sl2_r`].
#[derive(Debug, Clone, PartialEq)]
pub struct QParameter {
    q: Complex,
    convention: String,
}

pub const CONVENTION: &str = "q^{-1/2}[[q,0,0,0],[0,1,0,0],[0,q-1/q,1,0],[0,0,0,q]], principal q^{1/2}";

impl QParameter {
    pub fn new(q: Complex) -> Result<Self> {
        if q.norm() == 0.0 || !q.re.is_finite() || !q.im.is_finite() {
            return Err(Error::InvalidParameter(format!("q must be finite and nonzero, got {q}")));
        }
        Ok(Self { q, convention: CONVENTION.to_string() })
    }

    /// `q = e^{πi/κ}`.
    pub fn from_kappa(kappa: Complex) -> Result<Self> {
        if kappa.norm() == 0.0 {
            return Err(Error::InvalidParameter("kappa must be nonzero".into()));
        }
        Self::new((Complex::new(0.0, PI) / kappa).exp())
    }

    pub fn q(&self) -> Complex {
        self.q
    }

    pub fn convention(&self) -> &str {
        &self.convention
    }

    pub fn inverse(&self) -> Self {
        Self { q: self.q.inv(), convention: self.convention.clone() }
    }
}

/// `q^{-1/2} [[q,0,0,0],[0,1,0,0],[0,q-q^{-1},1,0],[0,0,0,q]]` in the basis
/// `e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2`.
pub fn uq_sl2_r(q: &QParameter) -> ComplexMatrix {
    let q = q.q();
    let one = Complex::new(1.0, 0.0);
    let z = Complex::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = ComplexMatrix::from_row_slice(4, 4, &[
        q, z, z, z,
        z, one, z, z,
        z, q - q.inv(), one, z,
        z, z, z, q,
    ]);
    m / q.sqrt()
}

/// `‖(Ř - q^{1/2})(Ř + q^{-3/2})‖` with `Ř = P R`.
pub fn hecke_residual(q: &QParameter) -> f64 {
    let p = casimir_omega(2).expect("m = 2");
    let rc = &p * uq_sl2_r(q);
    let id = ComplexMatrix::identity(4, 4);
    let h = q.q().sqrt();
    let lhs = (&rc - &id * h) * (&rc + &id * (h.powi(3)).inv());
    frobenius(&lhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variant {
    /// `R_q`.
    Standard,
    /// `R_q^{21} = P R_q P`.
    Flipped,
    /// `R_q^{-1}`.
    Inverse,
    /// `(R_q^{21})^{-1}`.
    FlippedInverse,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Standard, Variant::Flipped, Variant::Inverse, Variant::FlippedInverse];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Standard => "R_q",
            Variant::Flipped => "R_q^21",
            Variant::Inverse => "R_q^-1",
            Variant::FlippedInverse => "(R_q^21)^-1",
        }
    }
}

pub fn variant_matrix(q: &QParameter, v: Variant) -> Result<ComplexMatrix> {
    let r = uq_sl2_r(q);
    let p = casimir_omega(2)?;
    Ok(match v {
        Variant::Standard => r,
        Variant::Flipped => &p * r * &p,
        Variant::Inverse => linalg::inverse(&r)?,
        Variant::FlippedInverse => linalg::inverse(&(&p * r * &p))?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeMode {
    Strict,
    DiagonalGauge,
}

/// Optimal `λ (D⊗D) X (D⊗D)^{-1}`, `D = diag(1, d)`, approximating a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeFit {
    pub d: Complex,
    pub scalar: Complex,
    /// Frobenius norm of the remaining difference.
    pub residual: f64,
}

fn gauged(x: &ComplexMatrix, d: Complex) -> ComplexMatrix {
    let dd = [Complex::new(1.0, 0.0), d, d, d * d];
    ComplexMatrix::from_fn(4, 4, |r, c| x[(r, c)] * dd[r] / dd[c])
}

/// Least-squares scalar and the residual it leaves.
fn best_scalar(x: &ComplexMatrix, target: &ComplexMatrix) -> (Complex, ComplexMatrix) {
    let num: Complex = x.iter().zip(target.iter()).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = x.iter().map(|a| a.norm_sqr()).sum();
    let lambda = if den > 0.0 { num / den } else { Complex::new(0.0, 0.0) };
    (lambda, target - x * lambda)
}

fn objective(x: &ComplexMatrix, target: &ComplexMatrix, p: [f64; 2]) -> (Complex, Complex, Vec<f64>) {
    let d = Complex::from_polar(p[0].exp(), p[1]);
    let (lambda, res) = best_scalar(&gauged(x, d), target);
    let flat = res.iter().flat_map(|z| [z.re, z.im]).collect();
    (d, lambda, flat)
}

/// Levenberg–Marquardt over `(ln|d|, arg d)`, the scalar solved in closed form.
pub fn fit_diagonal_gauge(x: &ComplexMatrix, target: &ComplexMatrix) -> Result<GaugeFit> {
    if x.shape() != (4, 4) || target.shape() != (4, 4) {
        return Err(Error::DimensionMismatch { expected: "4x4".into(), got: format!("{:?}", x.shape()) });
    }
    let norm2 = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
    let mut p = [0.0f64, 0.0];
    let (_, _, mut r) = objective(x, target, p);
    let mut mu = 1e-3;
    let h = 1e-7;
    for _ in 0..100 {
        let mut jac = [vec![0.0; r.len()], vec![0.0; r.len()]];
        for (k, col) in jac.iter_mut().enumerate() {
            let mut a = p;
            let mut b = p;
            a[k] += h;
            b[k] -= h;
            let (_, _, ra) = objective(x, target, a);
            let (_, _, rb) = objective(x, target, b);
            for (c, (u, v)) in col.iter_mut().zip(ra.iter().zip(&rb)) {
                *c = (u - v) / (2.0 * h);
            }
        }
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let g = [dot(&jac[0], &r), dot(&jac[1], &r)];
        if g[0].abs().max(g[1].abs()) < 1e-15 {
            break;
        }
        let jtj = [[dot(&jac[0], &jac[0]), dot(&jac[0], &jac[1])], [dot(&jac[1], &jac[0]), dot(&jac[1], &jac[1])]];
        let mut improved = false;
        for _ in 0..20 {
            let a = [[jtj[0][0] * (1.0 + mu), jtj[0][1]], [jtj[1][0], jtj[1][1] * (1.0 + mu)]];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det == 0.0 || !det.is_finite() {
                mu *= 10.0;
                continue;
            }
            let step = [-(a[1][1] * g[0] - a[0][1] * g[1]) / det, -(a[0][0] * g[1] - a[1][0] * g[0]) / det];
            let trial = [p[0] + step[0], p[1] + step[1]];
            let (_, _, rt) = objective(x, target, trial);
            if norm2(&rt) < norm2(&r) {
                p = trial;
                r = rt;
                mu = (mu / 10.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let (d, scalar, r) = objective(x, target, p);
    Ok(GaugeFit { d, scalar, residual: norm2(&r).sqrt() })
}

#[derive(Debug, Clone)]
pub struct VariantFit {
    pub variant: Variant,
    pub q: Complex,
    pub fit: GaugeFit,
}

#[derive(Debug, Clone)]
pub struct QgroupReport {
    pub q: QParameter,
    pub mode: GaugeMode,
    pub r_stokes: ComplexMatrix,
    pub r_q: ComplexMatrix,
    /// `max |R_stokes - R_q|` entrywise.
    pub strict_residual: f64,
    /// Fits of `R` against the four variants at `q`, then at `1/q`.
    pub variants: Vec<VariantFit>,
    /// Same for `R_-`.
    pub variants_minus: Vec<VariantFit>,
    pub best: VariantFit,
}

fn fits(target: &ComplexMatrix, q: &QParameter, mode: GaugeMode) -> Result<Vec<VariantFit>> {
    let mut out = Vec::new();
    for qq in [q.clone(), q.inverse()] {
        for v in Variant::ALL {
            let x = variant_matrix(&qq, v)?;
            let fit = match mode {
                GaugeMode::DiagonalGauge => fit_diagonal_gauge(&x, target)?,
                GaugeMode::Strict => GaugeFit {
                    d: Complex::new(1.0, 0.0),
                    scalar: Complex::new(1.0, 0.0),
                    residual: frobenius(&(target - &x)),
                },
            };
            out.push(VariantFit { variant: v, q: qq.q(), fit });
        }
    }
    Ok(out)
}

/// Compares the Stokes multipliers of an `m = 2` dKZ_2 system with `U_q(sl_2)`.
pub fn compare_stokes_to_qgroup(sd: &StokesData, q: &QParameter, mode: GaugeMode) -> Result<QgroupReport> {
    let (r, rm) = match (&sd.r_plus, &sd.r_minus) {
        (Some(r), Some(rm)) => (r, rm),
        _ => return Err(Error::NotDkz2),
    };
    if r.shape() != (4, 4) {
        return Err(Error::DimensionMismatch { expected: "4x4 (m = 2)".into(), got: format!("{:?}", r.shape()) });
    }
    let r_q = uq_sl2_r(q);
    let strict_residual = (r - &r_q).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let variants = fits(r, q, mode)?;
    let variants_minus = fits(rm, q, mode)?;
    let best = variants
        .iter()
        .filter(|v| v.q == q.q())
        .min_by(|a, b| a.fit.residual.total_cmp(&b.fit.residual))
        .cloned()
        .expect("four variants");
    Ok(QgroupReport { q: q.clone(), mode, r_stokes: r.clone(), r_q, strict_residual, variants, variants_minus, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::ybe_residual;

    #[test]
    fn classical_limit_and_hecke() {
        let one = QParameter::new(Complex::new(1.0, 0.0)).unwrap();
        assert!(frobenius(&(uq_sl2_r(&one) - ComplexMatrix::identity(4, 4))) < 1e-15);
        for t in [0.1, 0.7, 1.3, 2.9] {
            let q = QParameter::new(Complex::from_polar(1.0, t)).unwrap();
            assert!(ybe_residual(&uq_sl2_r(&q), 2).unwrap() < 1e-12);
            assert!(hecke_residual(&q) < 1e-12);
        }
        assert!(QParameter::new(Complex::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_parameter_inverts() {
        let q = QParameter::new(Complex::from_polar(1.0, 0.9)).unwrap();
        let prod = uq_sl2_r(&q) * uq_sl2_r(&q.inverse());
        assert!(frobenius(&(prod - ComplexMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn gauge_fit_recovers_conjugation() {
        let q = QParameter::new(Complex::from_polar(1.0, 0.4)).unwrap();
        let x = variant_matrix(&q, Variant::Flipped).unwrap();
        let target = gauged(&x, Complex::from_polar(1.7, 0.3)) * Complex::from_polar(1.0, 1.1);
        let fit = fit_diagonal_gauge(&x, &target).unwrap();
        assert!(fit.residual < 1e-12);
        assert!((fit.scalar - Complex::from_polar(1.0, 1.1)).norm() < 1e-12);
    }
}
