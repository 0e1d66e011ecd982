//! Independent closed forms for the rank-2 blocks of the dKZ_2 system.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z (Lanczos, reflection for Re z < 1/2).
pub fn gamma(z: C) -> C {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C::from(PI) / (s * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = C::from(LANCZOS[0]);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Tricomi `U(a, b, x)` for `Re a > 0`, `|arg x| < π`, from
/// `U = x^{-a}/Γ(a) ∫_0^∞ e^{-τ} τ^{a-1} (1 + τ/x)^{b-a-1} dτ`
/// with exp-sinh quadrature.
pub fn kummer_u(a: C, b: C, x: C) -> C {
    let h = 1.0 / 64.0;
    let mut sum = C::from(0.0);
    let mut k = (-6.0 / h) as i64;
    loop {
        let t = k as f64 * h;
        if t > 4.5 {
            break;
        }
        let tau = (PI / 2.0 * t.sinh()).exp();
        let w = tau * PI / 2.0 * t.cosh();
        if tau > 800.0 {
            break;
        }
        let f = (-tau).exp() * C::from(tau).powc(a - 1.0) * (1.0 + tau / x).powc(b - a - 1.0);
        sum += f * w;
        k += 1;
    }
    x.powc(-a) / gamma(a) * sum * h
}

/// `(s, t)`: the Stokes entries of the block `{e_a⊗e_b, e_b⊗e_a}` with
/// `Im (u_a - u_b)/κ > 0`: `s` sits in `S_+ e^{2πi[A]}` at row `e_a⊗e_b`,
/// column `e_b⊗e_a`; `t` in `e^{2πi[A]} S_-` at the transposed position.
pub fn stokes_entries(c: C) -> (C, C) {
    let i = C::i();
    let g = gamma(-2.0 * c) * gamma(1.0 + 2.0 * c);
    let s = (i * PI * c).exp() * (1.0 - (-4.0 * PI * i * c).exp()) * g / (gamma(-c) * gamma(c)) * (i * PI * (1.0 + c)).exp()
        / c;
    let t = -c * (-i * PI * c).exp() * (1.0 - (4.0 * PI * i * c).exp()) * g / (gamma(1.0 - c) * gamma(1.0 + c))
        * (-i * PI * c).exp();
    (s, t)
}

/// Canonical right-sector solution of `y1' = α y1 + (c/z) y2`,
/// `y2' = β y2 + (c/z) y1` at principal `z`, `δ = α - β` with `Im δ > 0`.
/// Rows and columns are `(y1, y2)`; column 1 ~ `e^{αz}`, column 2 ~ `e^{βz}`.
pub fn canonical_block(alpha: C, beta: C, c: C, z: C) -> [[C; 2]; 2] {
    let d = alpha - beta;
    let zc = z.powc(c);
    // column 2
    let x = d * z;
    let u0 = kummer_u(c, 1.0 + 2.0 * c, x);
    let u1 = kummer_u(c + 1.0, 2.0 + 2.0 * c, x);
    let pre = d.powc(c) * (beta * z).exp() * zc;
    let y2_2 = pre * u0;
    let y1_2 = pre * (u0 - d * z * u1);
    // column 1
    let x = -d * z;
    let v0 = kummer_u(1.0 + c, 1.0 + 2.0 * c, x);
    let v1 = kummer_u(2.0 + c, 2.0 + 2.0 * c, x);
    let pre = (-d).powc(c) * (alpha * z).exp() * zc;
    let y2_1 = -c * pre * v0;
    let y1_1 = -pre * ((d * z + c) * v0 + d * z * (1.0 + c) * v1);
    [[y1_1, y1_2], [y2_1, y2_2]]
}

#[cfg(test)]
mod tests {}
