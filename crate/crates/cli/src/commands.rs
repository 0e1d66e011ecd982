//! One pipeline per subcommand. Each returns the `outputs`, `residuals` and
//! `thresholds` sections of the report plus the overall verdict.

use crate::config::RunConfig;
use dkz_core::braid::perturb;
use dkz_core::json::{complex, matrix};
use dkz_core::linalg;
use dkz_core::qgroup::{hecke_residual, VariantFit, CONVENTION};
use dkz_core::tensor::frobenius;
use dkz_core::thresholds::{ALGEBRAIC, HOLONOMY_FINAL, ISOMONODROMY, NEGATIVE_CONTROL, QGROUP, TRIVIAL};
use dkz_core::*;
use serde_json::{json, Value};
use std::f64::consts::PI;

pub struct Outcome {
    pub outputs: Value,
    pub residuals: Value,
    pub thresholds: Value,
    pub pass: bool,
    /// One line per checked quantity, for the terminal.
    pub summary: Vec<String>,
}

fn line(name: &str, value: f64, op: &str, bound: f64) -> String {
    let ok = match op {
        ">" => value > bound,
        _ => value <= bound,
    };
    format!("{:<4} {name} = {value:.3e} ({op} {bound:e})", if ok { "ok" } else { "FAIL" })
}

fn options(cfg: &RunConfig) -> Result<StokesOptions> {
    Ok(StokesOptions { tol: cfg.tolerance()?, ..StokesOptions::default() })
}

fn stokes(cfg: &RunConfig) -> Result<(DkzParams, StokesData)> {
    let p = cfg.params()?;
    let sd = stokes_matrices(&p.two_point_ode()?, &options(cfg)?)?;
    Ok((p, sd))
}

fn multipliers(sd: &StokesData) -> Result<(ComplexMatrix, ComplexMatrix)> {
    Ok((stokes_multiplier(sd, Which::Plus)?, stokes_multiplier(sd, Which::Minus)?))
}

pub fn compute_stokes(cfg: &RunConfig) -> Result<Outcome> {
    let (p, sd) = stokes(cfg)?;
    let ode = p.two_point_ode()?;
    let (r, rm) = multipliers(&sd)?;
    let (bp, bm) = sd.block_deviation();
    let (dp, dm) = sd.det_deviation();
    let ybe = ybe_residual(&r, p.m())?;
    let ybe_m = ybe_residual(&rm, p.m())?;
    let mono = monodromy_consistency(&sd, &ode, &cfg.tolerance()?)?;
    let checks = [
        ("unipotent_block_deviation", bp.max(bm)),
        ("unipotent_det_deviation", dp.max(dm)),
        ("ybe_r", ybe),
        ("ybe_r_minus", ybe_m),
        ("monodromy_consistency", mono),
    ];
    Ok(Outcome {
        outputs: json!({
            "s_plus": matrix(&sd.s_plus),
            "s_minus": matrix(&sd.s_minus),
            "formal_monodromy": matrix(&sd.formal_monodromy),
            "exponent": matrix(&sd.exponent),
            "unipotent_plus": matrix(&sd.unipotent_plus),
            "unipotent_minus": matrix(&sd.unipotent_minus),
            "r_plus": matrix(&r),
            "r_minus": matrix(&rm),
            "anti_stokes_rays": anti_stokes_rays(ode.lambda()),
            "matching": {
                "radius": sd.meta.radius,
                "order": sd.meta.order,
                "tail": sd.meta.tail,
                "inner_radius": sd.meta.inner_radius,
            },
        }),
        residuals: checks.iter().map(|(k, v)| (k.to_string(), json!(v))).collect(),
        thresholds: json!({"algebraic": ALGEBRAIC}),
        pass: checks.iter().all(|(_, v)| *v <= ALGEBRAIC),
        summary: checks.iter().map(|(k, v)| line(k, *v, "<=", ALGEBRAIC)).collect(),
    })
}

pub fn check_ybe(cfg: &RunConfig) -> Result<Outcome> {
    let (p, sd) = stokes(cfg)?;
    let (r, rm) = multipliers(&sd)?;
    let ybe = ybe_residual(&r, p.m())?;
    let ybe_m = ybe_residual(&rm, p.m())?;
    let seed = cfg.seed.unwrap_or(0);
    let control = ybe_residual(&perturb(&r, 1e-2, seed), p.m())?;
    Ok(Outcome {
        outputs: json!({"r_plus": matrix(&r), "r_minus": matrix(&rm), "negative_control": {"amplitude": 1e-2, "seed": seed}}),
        residuals: json!({"ybe_r": ybe, "ybe_r_minus": ybe_m, "ybe_perturbed": control}),
        thresholds: json!({"algebraic": ALGEBRAIC, "negative_control": NEGATIVE_CONTROL}),
        pass: ybe <= ALGEBRAIC && ybe_m <= ALGEBRAIC && control > NEGATIVE_CONTROL,
        summary: vec![
            line("ybe(R)", ybe, "<=", ALGEBRAIC),
            line("ybe(R_-)", ybe_m, "<=", ALGEBRAIC),
            line("ybe(R + 1e-2 noise)", control, ">", NEGATIVE_CONTROL),
        ],
    })
}

pub fn check_braid(cfg: &RunConfig) -> Result<Outcome> {
    let (p, sd) = stokes(cfg)?;
    let n = cfg.n_or(4);
    let space = TensorSpace::new(p.m(), n)?;
    let mut residuals = serde_json::Map::new();
    let mut summary = Vec::new();
    let mut pass = true;
    for (name, r) in [("r_plus", stokes_multiplier(&sd, Which::Plus)?), ("r_minus", stokes_multiplier(&sd, Which::Minus)?)] {
        let res = braid_relation_residuals(&build_representation(&r, space)?)?;
        residuals.insert(name.into(), json!({"braid": res.braid, "far_commutation": res.far_commutation}));
        pass &= res.braid <= ALGEBRAIC && res.far_commutation.is_none_or(|f| f <= ALGEBRAIC);
        summary.push(line(&format!("braid({name})"), res.braid, "<=", ALGEBRAIC));
        if let Some(f) = res.far_commutation {
            summary.push(line(&format!("far_commutation({name})"), f, "<=", ALGEBRAIC));
        }
    }
    Ok(Outcome {
        outputs: json!({"n": n, "dim": space.dim()}),
        residuals: Value::Object(residuals),
        thresholds: json!({"algebraic": ALGEBRAIC}),
        pass,
        summary,
    })
}

pub fn check_holonomy(cfg: &RunConfig) -> Result<Outcome> {
    let (p, sd) = stokes(cfg)?;
    let n = cfg.n_or(3);
    let seps = cfg.separations.clone().unwrap_or_else(|| vec![3.0, 12.0, 48.0]);
    if seps.is_empty() || seps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("separations must be a non-empty increasing list".into()));
    }
    let tol = cfg.tolerance()?;
    let mut per_index = Vec::new();
    let mut summary = Vec::new();
    let mut pass = true;
    for i in 1..n {
        let reports = seps.iter().map(|&s| holonomy_factorization_test(&p, n, i, s, &sd, &tol)).collect::<Result<Vec<_>>>()?;
        let res: Vec<f64> = reports.iter().map(|r| r.residual).collect();
        let decreasing = res.windows(2).all(|w| 2.0 * w[1] <= w[0]);
        let last = *res.last().expect("non-empty");
        pass &= decreasing && last <= HOLONOMY_FINAL;
        let conventions: serde_json::Map<String, Value> =
            reports.last().expect("non-empty").conventions.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        per_index.push(json!({
            "index": i,
            "residuals": res,
            "truncation_orders": reports.iter().map(|r| r.truncation_order).collect::<Vec<_>>(),
            "decreasing_2x": decreasing,
            "conventions_at_largest_s": conventions,
        }));
        summary.push(format!(
            "{:<4} i={i}: {} (>= 2x per step, final <= {HOLONOMY_FINAL:e})",
            if decreasing && last <= HOLONOMY_FINAL { "ok" } else { "FAIL" },
            res.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(" -> ")
        ));
    }
    Ok(Outcome {
        outputs: json!({"n": n, "separations": seps, "compared_with": "T_i (R_-^{-1})^{i,i+1}"}),
        residuals: json!({"holonomy": per_index}),
        thresholds: json!({"final": HOLONOMY_FINAL, "decrease_factor": 2.0}),
        pass,
        summary,
    })
}

fn default_grid(n: usize, chamber: usize) -> Option<Vec<Vec<f64>>> {
    let ts = [1.6, 1.9, 2.2, 2.5, 2.8];
    match (n, chamber) {
        (2, 0) => Some([0.5, 1.0, 1.7, 2.2, 3.0].iter().map(|&x| vec![0.0, x]).collect()),
        (3, 0) => Some(ts.iter().map(|&t| vec![0.3, 1.1, t]).collect()),
        _ => None,
    }
}

pub fn check_isomonodromy(cfg: &RunConfig) -> Result<Outcome> {
    let p = cfg.params()?;
    let n = cfg.n_or(3);
    let k = cfg.chamber.unwrap_or(0);
    let chamber = Chamber::new(n, k)?;
    let grid = match cfg.grid.clone().or_else(|| default_grid(n, k)) {
        Some(g) => g,
        None => return Err(Error::InvalidParameter(format!("no default grid for n = {n}, chamber D_{k}; set `grid`"))),
    };
    if grid.is_empty() || grid.iter().any(|x| x.len() != n) {
        return Err(Error::InvalidParameter(format!("grid points must have {n} coordinates")));
    }
    let rep = isomonodromy_scan(&p, chamber, &grid, &options(cfg)?)?;
    Ok(Outcome {
        outputs: json!({
            "n": n,
            "chamber": k,
            "grid": grid,
            "matching_radii": rep.radii,
            "normalized_s_plus": matrix(&rep.normalized[0].0),
            "normalized_s_minus": matrix(&rep.normalized[0].1),
        }),
        residuals: json!({"max_deviation": rep.max_deviation}),
        thresholds: json!({"isomonodromy": ISOMONODROMY}),
        pass: rep.max_deviation <= ISOMONODROMY,
        summary: vec![line("max pairwise deviation", rep.max_deviation, "<=", ISOMONODROMY)],
    })
}

fn fits_json(v: &[VariantFit]) -> Value {
    Value::Array(
        v.iter()
            .map(|f| json!({"variant": f.variant.name(), "q": complex(f.q), "residual": f.fit.residual, "d": complex(f.fit.d), "scalar": complex(f.fit.scalar)}))
            .collect(),
    )
}

pub fn compare_qgroup(cfg: &RunConfig) -> Result<Outcome> {
    let (p, sd) = stokes(cfg)?;
    if p.m() != 2 {
        return Err(Error::InvalidParameter(format!("compare-qgroup needs m = 2, got {}", p.m())));
    }
    let q = match cfg.q {
        Some(q) => QParameter::new(Complex::new(q[0], q[1]))?,
        None => QParameter::from_kappa(p.kappa())?,
    };
    let mode = match cfg.gauge.as_deref() {
        None | Some("diagonal") => GaugeMode::DiagonalGauge,
        Some("strict") => GaugeMode::Strict,
        Some(other) => return Err(Error::InvalidParameter(format!("gauge must be \"diagonal\" or \"strict\", got {other:?}"))),
    };
    let rep = compare_stokes_to_qgroup(&sd, &q, mode)?;
    let best = rep.best.fit.residual;
    let (value, name) = match mode {
        GaugeMode::DiagonalGauge => (best, format!("best variant {} residual", rep.best.variant.name())),
        GaugeMode::Strict => (rep.strict_residual, "strict residual".to_string()),
    };
    Ok(Outcome {
        outputs: json!({
            "q": complex(q.q()),
            "convention": CONVENTION,
            "gauge": if mode == GaugeMode::Strict { "strict" } else { "diagonal" },
            "r_stokes": matrix(&rep.r_stokes),
            "r_q": matrix(&rep.r_q),
            "variants": fits_json(&rep.variants),
            "variants_r_minus": fits_json(&rep.variants_minus),
            "best": {"variant": rep.best.variant.name(), "d": complex(rep.best.fit.d), "scalar": complex(rep.best.fit.scalar)},
        }),
        residuals: json!({"strict": rep.strict_residual, "best": best}),
        thresholds: json!({"qgroup": QGROUP}),
        pass: value <= QGROUP,
        summary: vec![line(&name, value, "<=", QGROUP)],
    })
}

/// Exactly known cases only; no configuration is read beyond tolerances.
pub fn selftest(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerance()?;
    let i = Complex::new(0.0, 1.0);
    let mut checks: Vec<(&str, f64)> = Vec::new();
    for m in [2, 3] {
        checks.push(("ybe(identity)", ybe_residual(&ComplexMatrix::identity(m * m, m * m), m)?));
        checks.push(("ybe(flip)", ybe_residual(&casimir_omega(m)?, m)?));
    }
    let rep = build_representation(&ComplexMatrix::identity(4, 4), TensorSpace::new(2, 4)?)?;
    let res = braid_relation_residuals(&rep)?;
    checks.push(("braid(identity)", res.braid.max(res.far_commutation.unwrap_or(0.0))));
    let w = BraidWord::new(4, vec![1, 2, -2, -1])?;
    checks.push(("word b1 b2 b2^-1 b1^-1", frobenius(&(rep.evaluate_word(&w)? - ComplexMatrix::identity(16, 16)))));
    checks.push(("R_q at q = 1", frobenius(&(uq_sl2_r(&QParameter::new(Complex::new(1.0, 0.0))?) - ComplexMatrix::identity(4, 4)))));
    checks.push(("hecke(q = e^{0.7i})", hecke_residual(&QParameter::new(Complex::from_polar(1.0, 0.7))?)));

    let zero_a = IrregularOde::new(vec![i, -i, i * 0.3], ComplexMatrix::zeros(3, 3))?;
    let sd = stokes_matrices(&zero_a, &StokesOptions { tol, ..StokesOptions::default() })?;
    let id = ComplexMatrix::identity(3, 3);
    checks.push(("A = 0: |S_+ - 1|", frobenius(&(&sd.s_plus - &id))));
    checks.push(("A = 0: |S_- - 1|", frobenius(&(&sd.s_minus - &id))));
    let a = ComplexMatrix::from_row_slice(2, 2, &[Complex::new(0.2, 0.1), Complex::new(0.3, 0.0), Complex::new(-0.1, 0.2), Complex::new(0.0, -0.3)]);
    let euler = IrregularOde::new(vec![Complex::new(0.0, 0.0); 2], a.clone())?;
    let m0 = monodromy_around_zero(&euler, &tol)?;
    checks.push(("Euler loop vs e^{2 pi i A}", frobenius(&(m0 - linalg::expm(&(a * Complex::new(0.0, 2.0 * PI)))))));

    let rejects = matches!(DkzParams::new(vec![i, i], Complex::new(1.0, 0.0), false), Err(Error::NonDistinct { .. }));
    let mut summary: Vec<String> = checks.iter().map(|(k, v)| line(k, *v, "<=", TRIVIAL)).collect();
    summary.push(format!("{:<4} duplicate u rejected", if rejects { "ok" } else { "FAIL" }));
    Ok(Outcome {
        outputs: json!({"duplicate_u_rejected": rejects}),
        residuals: Value::Array(checks.iter().map(|(k, v)| json!({"check": k, "residual": v})).collect()),
        thresholds: json!({"trivial": TRIVIAL}),
        pass: rejects && checks.iter().all(|(_, v)| *v <= TRIVIAL),
        summary,
    })
}
