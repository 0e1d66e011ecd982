//! Dormand–Prince 5(4) for linear matrix systems `dY/dt = G(t) Y` on `t ∈ [0, 1]`.

use crate::error::{Error, Result};
use crate::tensor::{Complex, ComplexMatrix};

/// Per-step error control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-13, abs_tol: 1e-15, max_steps: 2_000_000 }
    }
}

impl ToleranceSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_steps: usize) -> Result<Self> {
        let t = Self { rel_tol, abs_tol, max_steps };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-14) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidParameter(format!("rel_tol must be >= 1e-14, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidParameter(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const ALPHA: f64 = 0.17;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const H_MIN: f64 = 1e-14;

/// Step statistics of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

fn error_norm(err: &ComplexMatrix, y0: &ComplexMatrix, y1: &ComplexMatrix, tol: &ToleranceSpec) -> f64 {
    let mut worst: f64 = 0.0;
    for c in 0..err.ncols() {
        let e = err.column(c).norm();
        let scale = tol.abs_tol + tol.rel_tol * y0.column(c).norm().max(y1.column(c).norm());
        worst = worst.max(e / scale);
    }
    worst
}

/// Integrates `dY/dt = G(t) Y` from `t = 0` to `t = 1`.
pub fn integrate_unit<G>(mut g: G, y0: &ComplexMatrix, tol: &ToleranceSpec, stats: &mut StepStats) -> Result<ComplexMatrix>
where
    G: FnMut(f64) -> ComplexMatrix,
{
    tol.validate()?;
    let mut t = 0.0;
    let mut h: f64 = 0.01;
    let mut y = y0.clone();
    let mut k: Vec<ComplexMatrix> = Vec::with_capacity(7);
    let mut k1 = g(0.0) * &y;
    let mut err_old: f64 = 1e-4;
    let mut steps = 0usize;
    let mut last_rejected = false;

    while t < 1.0 {
        if steps >= tol.max_steps {
            return Err(Error::MaxStepsExceeded { max_steps: tol.max_steps });
        }
        steps += 1;
        if h < H_MIN {
            return Err(Error::StepUnderflow { t });
        }
        let done = t + h >= 1.0;
        if done {
            h = 1.0 - t;
        }
        k.clear();
        k.push(k1.clone());
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[s][j] != 0.0 {
                    ys += kj * Complex::from(h * A[s][j]);
                }
            }
            if s == 6 {
                // stage 7 is evaluated at the proposed solution (FSAL)
                let gk = g(t + h) * &ys;
                k.push(gk);
                let y_new = ys;
                let mut err = ComplexMatrix::zeros(y.nrows(), y.ncols());
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        err += kj * Complex::from(h * E[j]);
                    }
                }
                let en = error_norm(&err, &y, &y_new, tol);
                if !en.is_finite() {
                    h *= FAC_MIN;
                    last_rejected = true;
                    stats.rejected += 1;
                    break;
                }
                if en <= 1.0 {
                    let mut fac = SAFETY * en.max(1e-10).powf(-ALPHA) * err_old.powf(BETA);
                    fac = fac.clamp(FAC_MIN, FAC_MAX);
                    if last_rejected {
                        fac = fac.min(1.0);
                    }
                    err_old = en.max(1e-4);
                    t = if done { 1.0 } else { t + h };
                    y = y_new;
                    k1 = k[6].clone();
                    h *= fac;
                    last_rejected = false;
                    stats.accepted += 1;
                } else {
                    let fac = (SAFETY * en.powf(-ALPHA)).clamp(FAC_MIN, 1.0);
                    h *= fac;
                    last_rejected = true;
                    stats.rejected += 1;
                }
                break;
            }
            let gk = g(t + C[s] * h) * &ys;
            k.push(gk);
        }
    }
    Ok(y)
}
