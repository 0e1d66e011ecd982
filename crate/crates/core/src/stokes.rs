//! Canonical sectorial solutions, Stokes matrices and Stokes multipliers.
//!
//! Branch bookkeeping: `Y_+` lives on the right half plane with the principal
//! branch (`arg z = 0` on the positive axis). `Y_-` lives on the left half
//! plane and carries `arg z = -π` on the negative axis. With this choice
//!
//! ```text
//! Y_- = Y_+ S_+          (Y_+ continued counterclockwise to arg π)
//! Y_+ = Y_- e^{2πi[A]} S_-   (Y_- continued counterclockwise from arg -π to 0)
//! ```
//!
//! and `S_+ e^{2πi[A]}`, `e^{2πi[A]} S_-` are unipotent.

use crate::error::{Error, Result};
use crate::formal::{formal_series, CoverPoint, FormalSolution, IrregularOde, OdeOrigin, N_MAX};
use crate::integrator::ToleranceSpec;
use crate::linalg;
use crate::path::{transport, ComplexPath, Segment};
use crate::tensor::{Complex, ComplexMatrix};
use std::f64::consts::PI;

/// Minimum angle between an anti-Stokes ray and a base ray.
pub const DEFAULT_GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Right,
    Left,
}

/// The sector of a canonical solution and the lift of its base ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSpec {
    pub half_plane: HalfPlane,
    pub base_arg: f64,
}

impl SectorSpec {
    pub fn right() -> Self {
        Self { half_plane: HalfPlane::Right, base_arg: 0.0 }
    }

    pub fn left() -> Self {
        Self { half_plane: HalfPlane::Left, base_arg: -PI }
    }

    pub fn of(half_plane: HalfPlane) -> Self {
        match half_plane {
            HalfPlane::Right => Self::right(),
            HalfPlane::Left => Self::left(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesOptions {
    pub tol: ToleranceSpec,
    /// Accepted size of the smallest series term at the matching radius.
    pub tail_target: f64,
    pub n_max: usize,
    /// Fixed matching radius; chosen from `tail_target` when `None`.
    pub radius: Option<f64>,
    pub guard: f64,
}

impl Default for StokesOptions {
    fn default() -> Self {
        Self { tol: ToleranceSpec::default(), tail_target: 1e-12, n_max: N_MAX, radius: None, guard: DEFAULT_GUARD }
    }
}

fn wrap(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Directions `arg z ∈ (-π, π]` along which some `(λ_a - λ_b) z` is negative real.
pub fn anti_stokes_rays(lambda: &[Complex]) -> Vec<f64> {
    let scale = 1.0 + lambda.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let mut rays: Vec<f64> = Vec::new();
    for a in lambda {
        for b in lambda {
            let d = a - b;
            if d.norm() <= 1e-12 * scale {
                continue;
            }
            rays.push(wrap(PI - d.arg()));
        }
    }
    rays.sort_by(f64::total_cmp);
    rays.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    rays
}

fn check_rays(ode: &IrregularOde, guard: f64) -> Result<()> {
    for ray in anti_stokes_rays(ode.lambda()) {
        let to_right = ray.abs();
        let to_left = PI - ray.abs();
        if to_right < guard || to_left < guard {
            return Err(Error::AntiStokesOnRay { arg: ray, guard });
        }
    }
    Ok(())
}

/// Formal solution plus the matching data used to pin canonical solutions.
#[derive(Debug, Clone)]
pub struct Matcher {
    fs: FormalSolution,
    rho: f64,
    order: usize,
    tail: f64,
    inner: f64,
    tol: ToleranceSpec,
}

impl Matcher {
    pub fn new(ode: &IrregularOde, opts: &StokesOptions) -> Result<Self> {
        opts.tol.validate()?;
        let fs = formal_series(ode, opts.n_max)?;
        let inner = match ode.max_gap() {
            Some(g) if g > 0.0 => (1.0 / g).min(1.0),
            _ => 1.0,
        };
        let (rho, order, tail) = match opts.radius {
            Some(r) => {
                let (k, tail) = fs.tail_estimate(r)?;
                (r, k, tail)
            }
            None => choose_radius(&fs, ode.min_gap(), opts.tail_target)?,
        };
        if rho <= inner {
            return Err(Error::MatchRadiusTooSmall(format!("matching radius {rho} inside inner radius {inner}")));
        }
        Ok(Self { fs, rho, order, tail, inner, tol: opts.tol })
    }

    pub fn formal(&self) -> &FormalSolution {
        &self.fs
    }

    pub fn radius(&self) -> f64 {
        self.rho
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner
    }

    /// Canonical solution of `sector` at its matching point.
    pub fn base_value(&self, sector: SectorSpec) -> Result<(CoverPoint, ComplexMatrix)> {
        let p = CoverPoint::new(self.rho, sector.base_arg)?;
        Ok((p, self.fs.evaluate(p, self.order)?))
    }

    /// Path on the cover from `from` to `to`: radially in to the inner
    /// radius, along the inner circle, radially out.
    pub fn cover_path(&self, from: CoverPoint, to: CoverPoint) -> Result<ComplexPath> {
        let r0 = self.inner.min(from.r).min(to.r);
        let mut segs = Vec::new();
        let a = Complex::from_polar(from.r, from.theta);
        let a0 = Complex::from_polar(r0, from.theta);
        let b0 = Complex::from_polar(r0, to.theta);
        let b = Complex::from_polar(to.r, to.theta);
        if from.theta == to.theta {
            segs.push(Segment::line(a, b));
        } else {
            if from.r != r0 {
                segs.push(Segment::line(a, a0));
            }
            segs.push(Segment::arc(Complex::new(0.0, 0.0), r0, from.theta, to.theta));
            if to.r != r0 {
                segs.push(Segment::line(b0, b));
            }
        }
        ComplexPath::new(segs)
    }

    /// Continues `f` (a solution at `from`) to `to`.
    pub fn continue_solution(&self, f: &ComplexMatrix, from: CoverPoint, to: CoverPoint) -> Result<ComplexMatrix> {
        let path = self.cover_path(from, to)?;
        let ode = self.fs.ode();
        transport(|z| ode.coefficient(z), &path, f, &self.tol)
    }

    /// Value of the canonical solution of `sector` at `at`.
    pub fn canonical_solution(&self, sector: SectorSpec, at: CoverPoint) -> Result<ComplexMatrix> {
        let (p, f) = self.base_value(sector)?;
        if p == at {
            return Ok(f);
        }
        self.continue_solution(&f, p, at)
    }
}

fn choose_radius(fs: &FormalSolution, min_gap: Option<f64>, target: f64) -> Result<(f64, usize, f64)> {
    let gap = match min_gap {
        Some(g) if g > 0.0 => g,
        _ => {
            let (k, tail) = fs.tail_estimate(2.0).unwrap_or((0, 0.0));
            return Ok((2.0, k, tail));
        }
    };
    if fs.coeffs()[1..].iter().all(|h| h.iter().all(|z| *z == Complex::new(0.0, 0.0))) {
        return Ok(((2.0 / gap).max(1.0), 0, 0.0));
    }
    let mut rho = (2.0 / gap).max(1.0);
    let limit = 1e4 / gap;
    while rho < limit {
        if let Ok((k, tail)) = fs.tail_estimate(rho) {
            if tail <= target {
                return Ok((rho, k, tail));
            }
        }
        rho *= 1.1;
    }
    Err(Error::MatchRadiusTooSmall(format!("no radius below {limit:.3e} reaches tail {target:e}")))
}

/// Value at `at` of the canonical solution on `sector`.
pub fn canonical_solution(ode: &IrregularOde, sector: SectorSpec, at: CoverPoint, opts: &StokesOptions) -> Result<ComplexMatrix> {
    check_rays(ode, opts.guard)?;
    Matcher::new(ode, opts)?.canonical_solution(sector, at)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesMeta {
    pub radius: f64,
    pub order: usize,
    pub tail: f64,
    pub inner_radius: f64,
    pub tol: ToleranceSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Plus,
    Minus,
}

/// Stokes matrices, formal monodromy and (for dKZ_2) the Stokes multipliers.
#[derive(Debug, Clone)]
pub struct StokesData {
    pub s_plus: ComplexMatrix,
    pub s_minus: ComplexMatrix,
    /// `e^{2πi[A]}`.
    pub formal_monodromy: ComplexMatrix,
    /// `[A]`.
    pub exponent: ComplexMatrix,
    /// `S_+ e^{2πi[A]}`.
    pub unipotent_plus: ComplexMatrix,
    /// `e^{2πi[A]} S_-`.
    pub unipotent_minus: ComplexMatrix,
    /// `e^{πi[A]} S_+`, for dKZ_2 where `[A] = [Ω]/κ`.
    pub r_plus: Option<ComplexMatrix>,
    /// `e^{πi[A]} S_-`.
    pub r_minus: Option<ComplexMatrix>,
    pub meta: StokesMeta,
    blocks: Vec<Vec<usize>>,
    origin: OdeOrigin,
}

/// Computes `S_±` by matching at radius ρ and continuing on the cover.
pub fn stokes_matrices(ode: &IrregularOde, opts: &StokesOptions) -> Result<StokesData> {
    check_rays(ode, opts.guard)?;
    let mt = Matcher::new(ode, opts)?;
    let (p_right, y_plus) = mt.base_value(SectorSpec::right())?;
    let (p_left, y_minus) = mt.base_value(SectorSpec::left())?;

    let upper = CoverPoint::new(mt.radius(), PI)?;
    let y_plus_cont = mt.continue_solution(&y_plus, p_right, upper)?;
    let s_plus = linalg::solve(&y_plus_cont, &y_minus)?;

    let y_minus_cont = mt.continue_solution(&y_minus, p_left, p_right)?;
    let exponent = ode.a_diag().clone();
    let two_pi_i = Complex::new(0.0, 2.0 * PI);
    let formal_monodromy = linalg::expm(&(&exponent * two_pi_i));
    let inv_formal = linalg::expm(&(&exponent * -two_pi_i));
    let s_minus = inv_formal * linalg::solve(&y_minus_cont, &y_plus)?;

    let unipotent_plus = &s_plus * &formal_monodromy;
    let unipotent_minus = &formal_monodromy * &s_minus;
    let (r_plus, r_minus) = match ode.origin() {
        OdeOrigin::Dkz2 { .. } => {
            let half = linalg::expm(&(&exponent * Complex::new(0.0, PI)));
            (Some(&half * &s_plus), Some(&half * &s_minus))
        }
        _ => (None, None),
    };
    Ok(StokesData {
        s_plus,
        s_minus,
        formal_monodromy,
        exponent,
        unipotent_plus,
        unipotent_minus,
        r_plus,
        r_minus,
        meta: StokesMeta {
            radius: mt.radius(),
            order: mt.order(),
            tail: mt.tail(),
            inner_radius: mt.inner_radius(),
            tol: opts.tol,
        },
        blocks: ode.blocks().to_vec(),
        origin: ode.origin().clone(),
    })
}

impl StokesData {
    pub fn origin(&self) -> &OdeOrigin {
        &self.origin
    }

    pub fn dim(&self) -> usize {
        self.s_plus.nrows()
    }

    /// Largest deviation of the Λ-block-diagonal part of `U_±` from the identity.
    pub fn block_deviation(&self) -> (f64, f64) {
        let dev = |u: &ComplexMatrix| {
            let mut worst: f64 = 0.0;
            for b in &self.blocks {
                for &r in b {
                    for &c in b {
                        let want = if r == c { 1.0 } else { 0.0 };
                        worst = worst.max((u[(r, c)] - want).norm());
                    }
                }
            }
            worst
        };
        (dev(&self.unipotent_plus), dev(&self.unipotent_minus))
    }

    /// `|det U_± - 1|`.
    pub fn det_deviation(&self) -> (f64, f64) {
        (
            (linalg::determinant(&self.unipotent_plus) - 1.0).norm(),
            (linalg::determinant(&self.unipotent_minus) - 1.0).norm(),
        )
    }

    /// `S_+ e^{2πi[A]} S_-`, the inverse of the monodromy around `z = 0`.
    pub fn total_monodromy(&self) -> ComplexMatrix {
        &self.s_plus * &self.formal_monodromy * &self.s_minus
    }

    /// Entrywise distance to `other`, `max(‖ΔS_+‖, ‖ΔS_-‖)` in Frobenius norm.
    pub fn distance(&self, other: &StokesData) -> f64 {
        let a = crate::tensor::frobenius(&(&self.s_plus - &other.s_plus));
        let b = crate::tensor::frobenius(&(&self.s_minus - &other.s_minus));
        a.max(b)
    }
}

/// `R = e^{πi[Ω]/κ} S_+` or `R_- = e^{πi[Ω]/κ} S_-`.
pub fn stokes_multiplier(sd: &StokesData, which: Which) -> Result<ComplexMatrix> {
    let r = match which {
        Which::Plus => &sd.r_plus,
        Which::Minus => &sd.r_minus,
    };
    r.clone().ok_or(Error::NotDkz2)
}

/// Counterclockwise monodromy around `z = 0` (as a left transport operator),
/// integrated on a circle of radius `min(1, 1/max|λ_a - λ_b|)`.
pub fn monodromy_around_zero(ode: &IrregularOde, tol: &ToleranceSpec) -> Result<ComplexMatrix> {
    let r = match ode.max_gap() {
        Some(g) if g > 0.0 => (1.0 / g).min(1.0),
        _ => 1.0,
    };
    let path = ComplexPath::circle(Complex::new(0.0, 0.0), r, 0.0)?;
    let d = ode.dim();
    transport(|z| ode.coefficient(z), &path, &ComplexMatrix::identity(d, d), tol)
}

/// Multiset distance between the eigenvalues of `S_+ e^{2πi[A]} S_-` and the
/// inverted eigenvalues of the monodromy around `z = 0`.
pub fn monodromy_consistency(sd: &StokesData, ode: &IrregularOde, tol: &ToleranceSpec) -> Result<f64> {
    let m0 = monodromy_around_zero(ode, tol)?;
    let direct: Vec<Complex> = linalg::eigenvalues(&m0).into_iter().map(|z| z.inv()).collect();
    let stokes = linalg::eigenvalues(&sd.total_monodromy());
    Ok(linalg::multiset_distance(&stokes, &direct))
}
