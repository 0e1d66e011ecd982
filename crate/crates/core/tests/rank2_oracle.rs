mod common;

use common::{canonical_block, gamma, kummer_u, stokes_entries};
use dkz_core::formal::CoverPoint;
use dkz_core::stokes::{Matcher, SectorSpec};
use dkz_core::{stokes_matrices, Complex, DkzParams, StokesOptions};
use std::f64::consts::PI;

fn close(a: Complex, b: Complex, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn gamma_known_values() {
    assert!(close(gamma(Complex::from(5.0)), Complex::from(24.0), 1e-13));
    assert!(close(gamma(Complex::from(0.5)), Complex::from(PI.sqrt()), 1e-14));
    assert!(close(gamma(Complex::from(-0.5)), Complex::from(-2.0 * PI.sqrt()), 1e-13));
    // Γ(1+i) = 0.49801566811835604 - 0.15494982830181069 i
    assert!(close(gamma(Complex::new(1.0, 1.0)), Complex::new(0.498_015_668_118_356_04, -0.154_949_828_301_810_69), 1e-13));
    // recurrence Γ(z+1) = z Γ(z)
    let z = Complex::new(-1.3, 0.7);
    assert!(close(gamma(z + 1.0), z * gamma(z), 1e-13));
}

#[test]
fn kummer_u_special_case() {
    // U(a, a+1, x) = x^{-a}
    for (a, x) in [(0.3, Complex::new(0.0, 2.0)), (1.4, Complex::new(1.5, -3.0)), (2.2, Complex::new(0.0, -7.0))] {
        let a = Complex::from(a);
        assert!(close(kummer_u(a, a + 1.0, x), x.powc(-a), 1e-12), "a={a} x={x}");
    }
    // U(1, 1, x) = e^x E_1(x); E_1(1) = 0.21938393439552027
    let u = kummer_u(Complex::from(1.0), Complex::from(1.0), Complex::from(1.0));
    assert!(close(u, Complex::from(1f64.exp() * 0.219_383_934_395_520_27), 1e-12));
}

#[test]
fn oracle_entries_reduce_to_sine() {
    for kappa in [3.0, 2.7, 1.3, 0.8, 5.0] {
        let c = Complex::from(1.0 / kappa);
        let (s, t) = stokes_entries(c);
        let want = Complex::new(0.0, -2.0 * (PI / kappa).sin());
        assert!(close(s, want, 1e-12) && close(t, want, 1e-12), "kappa={kappa}: {s} {t}");
        // Euler monodromy trace: s t = 2 cos 2πc - 2
        assert!(close(s * t, Complex::from(2.0 * (2.0 * PI / kappa).cos() - 2.0), 1e-12));
    }
}

/// The oracle's canonical columns agree with the engine's canonical solution
/// (matching at large radius, then transport) at an interior point.
#[test]
fn closed_form_canonical_solution_matches_transport() {
    let kappa = 3.0;
    let p = DkzParams::new(vec![Complex::new(0.0, 1.0), Complex::new(0.0, -1.0)], Complex::from(kappa), false).unwrap();
    let ode = p.two_point_ode().unwrap();
    let mt = Matcher::new(&ode, &StokesOptions::default()).unwrap();
    let c = Complex::from(1.0 / kappa);
    let (alpha, beta) = (Complex::new(0.0, 1.0 / kappa), Complex::new(0.0, -1.0 / kappa));
    for (r, theta) in [(3.0, 0.4), (6.0, -1.0), (1.5, 1.2)] {
        let at = CoverPoint::new(r, theta).unwrap();
        let y = mt.canonical_solution(SectorSpec::right(), at).unwrap();
        let want = canonical_block(alpha, beta, c, at.z());
        // block rows/cols: e1⊗e2 = 1, e2⊗e1 = 2
        let idx = [1, 2];
        for i in 0..2 {
            for j in 0..2 {
                let got = y[(idx[i], idx[j])];
                assert!((got - want[i][j]).norm() < 1e-9, "z={} ({i},{j}): {got} vs {}", at.z(), want[i][j]);
            }
        }
    }
}

#[test]
fn stokes_entries_match_oracle_m2() {
    for kappa in [3.0, 2.7, 1.3] {
        let p = DkzParams::new(vec![Complex::new(0.0, 1.0), Complex::new(0.0, -1.0)], Complex::from(kappa), false).unwrap();
        let sd = stokes_matrices(&p.two_point_ode().unwrap(), &StokesOptions::default()).unwrap();
        let (s, t) = stokes_entries(Complex::from(1.0 / kappa));
        assert!((sd.unipotent_plus[(1, 2)] - s).norm() < 1e-8);
        assert!((sd.unipotent_minus[(2, 1)] - t).norm() < 1e-8);
        assert!(sd.unipotent_plus[(2, 1)].norm() < 1e-8 && sd.unipotent_minus[(1, 2)].norm() < 1e-8);
    }
}
