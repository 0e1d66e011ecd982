//! Holonomy factorization at a far-separated base point, and isomonodromy
//! of the pulled-back system.

use crate::dkz::DkzParams;
use crate::error::{Error, Result};
use crate::formal::{formal_series, CoverPoint, N_MAX};
use crate::integrator::ToleranceSpec;
use crate::linalg;
use crate::path::{dkz_holonomy, ConfigPath};
use crate::stokes::{stokes_matrices, StokesData, StokesOptions};
use crate::tensor::{embed_pair, frobenius, permutation_t, Complex, ComplexMatrix, FactorPair, TensorSpace};
use std::f64::consts::PI;

/// `Π_{i<j} (ξ_i - ξ_j)^{[Ω]_ij/κ}`, with `arg(ξ_i - ξ_j) = -π` when `ξ_i < ξ_j`.
pub fn zone_normalization(params: &DkzParams, xi: &[f64]) -> Result<ComplexMatrix> {
    let diag = params.diagonal_casimirs(xi.len())?;
    let dim = diag.first().map(|d| d.2.len()).unwrap_or(params.m());
    let mut log = vec![Complex::new(0.0, 0.0); dim];
    for (i, j, d) in &diag {
        let w = xi[*i] - xi[*j];
        if w == 0.0 {
            return Err(Error::PathCollision { distance: 0.0, guard: 0.0 });
        }
        let lw = Complex::new(w.abs().ln(), if w < 0.0 { -PI } else { 0.0 });
        for (k, v) in d.iter().enumerate() {
            if *v != 0.0 {
                log[k] += lw * *v;
            }
        }
    }
    let entries: Vec<Complex> = log.iter().map(|l| (l / params.kappa()).exp()).collect();
    Ok(linalg::diag(&entries))
}

/// The zone solution at `z = s ξ`, `ξ = (1, ..., n)`: the formal solution at
/// `z = s` (least-term truncation) times [`zone_normalization`].
pub fn zone_solution(params: &DkzParams, n: usize, s: f64) -> Result<(ComplexMatrix, usize)> {
    let xi: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    let ode = params.pulled_back_ode(&xi)?;
    let fs = formal_series(&ode, N_MAX)?;
    let k = fs.least_term_order(s);
    let f = fs.evaluate(CoverPoint::new(s, 0.0)?, k)? * zone_normalization(params, &xi)?;
    Ok((f, k))
}

#[derive(Debug, Clone)]
pub struct HolonomyReport {
    pub separation: f64,
    pub index: usize,
    pub truncation_order: usize,
    /// `F_0^{-1} T_i F_0^{cont}`.
    pub holonomy: ComplexMatrix,
    /// `T_i (R_-^{-1})^{i,i+1}`.
    pub expected: ComplexMatrix,
    pub residual: f64,
    /// Residuals against `T_i X^{i,i+1}` for `X = R, R_-, R^{-1}, R_-^{-1}`.
    pub conventions: Vec<(String, f64)>,
}

/// Compares the holonomy of the swap of points `i, i+1` (point `i+1` passing
/// above) in the basis of the zone solution at `z_k = k s` with
/// `T_i (R_-^{-1})^{i,i+1}`.
pub fn holonomy_factorization_test(
    params: &DkzParams,
    n: usize,
    i: usize,
    s: f64,
    sd: &StokesData,
    tol: &ToleranceSpec,
) -> Result<HolonomyReport> {
    let (r, rm) = match (&sd.r_plus, &sd.r_minus) {
        (Some(r), Some(rm)) => (r.clone(), rm.clone()),
        _ => return Err(Error::NotDkz2),
    };
    if n < 2 {
        return Err(Error::TooFewStrands { needed: 2, got: n });
    }
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("separation must be positive, got {s}")));
    }
    let space = TensorSpace::new(params.m(), n)?;
    let (f0, order) = zone_solution(params, n, s)?;
    let z: Vec<Complex> = (1..=n).map(|k| Complex::from(k as f64 * s)).collect();
    let max_du = max_gap(params);
    let r0 = 0.5 * (1.0f64).min(1.0 / max_du).min(s / 2.0);
    let path = ConfigPath::contracted_swap(&z, i, r0)?;
    let fc = dkz_holonomy(params, &path, &f0, tol)?;
    let t = permutation_t(i, &space)?;
    let holonomy = linalg::solve(&f0, &(&t * fc))?;
    let pair = FactorPair::new(i, i + 1, &space)?;
    let candidate = |x: &ComplexMatrix| -> Result<ComplexMatrix> { Ok(&t * embed_pair(x, pair, &space)?) };
    let expected = candidate(&linalg::inverse(&rm)?)?;
    let residual = frobenius(&(&holonomy - &expected));
    let mut conventions = Vec::new();
    for (name, x) in [
        ("T R", r.clone()),
        ("T R_-", rm.clone()),
        ("T R^-1", linalg::inverse(&r)?),
        ("T R_-^-1", linalg::inverse(&rm)?),
    ] {
        conventions.push((name.to_string(), frobenius(&(&holonomy - candidate(&x)?))));
    }
    Ok(HolonomyReport { separation: s, index: i, truncation_order: order, holonomy, expected, residual, conventions })
}

fn max_gap(params: &DkzParams) -> f64 {
    let u = params.u();
    let mut g: f64 = 0.0;
    for a in u {
        for b in u {
            g = g.max(((a - b) / params.kappa()).norm());
        }
    }
    g
}

/// `D_0 = {ξ_1 < ... < ξ_n}`; `D_k` has `ξ_k` and `ξ_{k+1}` transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chamber {
    pub n: usize,
    pub k: usize,
}

impl Chamber {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewStrands { needed: 2, got: n });
        }
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, max: n - 1 });
        }
        Ok(Self { n, k })
    }

    /// The order in which the coordinates increase.
    fn order(&self) -> Vec<usize> {
        let mut o: Vec<usize> = (0..self.n).collect();
        if self.k > 0 {
            o.swap(self.k - 1, self.k);
        }
        o
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        if xi.len() != self.n {
            return false;
        }
        let o = self.order();
        o.windows(2).all(|w| xi[w[0]] < xi[w[1]])
    }
}

#[derive(Debug, Clone)]
pub struct IsomonodromyReport {
    pub chamber: Chamber,
    pub grid: Vec<Vec<f64>>,
    /// `D^{-1} S_± D` per grid point, `D` from [`zone_normalization`].
    pub normalized: Vec<(ComplexMatrix, ComplexMatrix)>,
    pub radii: Vec<f64>,
    pub max_deviation: f64,
}

/// Stokes matrices of the pulled-back system across `grid`, normalized by the
/// zone factor so that they are comparable; returns the largest pairwise
/// Frobenius distance.
pub fn isomonodromy_scan(params: &DkzParams, chamber: Chamber, grid: &[Vec<f64>], opts: &StokesOptions) -> Result<IsomonodromyReport> {
    for (idx, xi) in grid.iter().enumerate() {
        if !chamber.contains(xi) {
            return Err(Error::OutsideChamber { index: idx });
        }
    }
    let results: Vec<Result<(ComplexMatrix, ComplexMatrix, f64)>> = std::thread::scope(|sc| {
        let handles: Vec<_> = grid
            .iter()
            .map(|xi| {
                sc.spawn(move || {
                    let ode = params.pulled_back_ode(xi)?;
                    let sd = stokes_matrices(&ode, opts)?;
                    let d = zone_normalization(params, xi)?;
                    let dinv = linalg::inverse(&d)?;
                    Ok((&dinv * &sd.s_plus * &d, &dinv * &sd.s_minus * &d, sd.meta.radius))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("isomonodromy worker panicked")).collect()
    });
    let mut normalized = Vec::new();
    let mut radii = Vec::new();
    for r in results {
        let (p, m, rho) = r?;
        normalized.push((p, m));
        radii.push(rho);
    }
    let mut max_deviation: f64 = 0.0;
    for a in 0..normalized.len() {
        for b in a + 1..normalized.len() {
            let dp = frobenius(&(&normalized[a].0 - &normalized[b].0));
            let dm = frobenius(&(&normalized[a].1 - &normalized[b].1));
            max_deviation = max_deviation.max(dp).max(dm);
        }
    }
    Ok(IsomonodromyReport { chamber, grid: grid.to_vec(), normalized, radii, max_deviation })
}
