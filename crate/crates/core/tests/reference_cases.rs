use dkz_core::*;

fn ci(x: f64) -> Complex {
    Complex::new(0.0, x)
}

fn dkz2(kappa: f64) -> (DkzParams, StokesData) {
    let p = DkzParams::new(vec![ci(1.), ci(-1.)], Complex::from(kappa), false).unwrap();
    let sd = stokes_matrices(&p.two_point_ode().unwrap(), &StokesOptions::default()).unwrap();
    (p, sd)
}

#[test]
fn two_point_holonomy_is_the_stokes_multiplier() {
    let (p, sd) = dkz2(3.0);
    let rep = holonomy_factorization_test(&p, 2, 1, 40.0, &sd, &ToleranceSpec::default()).unwrap();
    assert!(rep.residual <= 1e-6, "{}", rep.residual);
}

#[test]
fn kappa_one_matches_a_quantum_group_variant() {
    let (_, sd) = dkz2(1.0);
    assert!(ybe_residual(sd.r_plus.as_ref().unwrap(), 2).unwrap() <= 1e-8);
    let q = QParameter::from_kappa(Complex::from(1.0)).unwrap();
    let rep = compare_stokes_to_qgroup(&sd, &q, GaugeMode::DiagonalGauge).unwrap();
    assert!(rep.best.fit.residual <= 1e-6);
    assert_eq!(rep.variants.len(), 8);
    assert_eq!(rep.variants_minus.len(), 8);
}

#[test]
fn single_point_scan_has_zero_deviation() {
    let (p, _) = dkz2(3.0);
    let rep = isomonodromy_scan(&p, Chamber::new(3, 0).unwrap(), &[vec![0.0, 1.0, 2.5]], &StokesOptions::default()).unwrap();
    assert_eq!(rep.max_deviation, 0.0);
    let outside = isomonodromy_scan(&p, Chamber::new(3, 0).unwrap(), &[vec![0.0, 2.0, 1.0]], &StokesOptions::default());
    assert!(matches!(outside, Err(Error::OutsideChamber { index: 0 })));
}

#[test]
fn inverse_parameter_swaps_plus_and_minus() {
    // R_- = R^{21} for dKZ_2, and q -> 1/q inverts R_q: the best fit of R at q
    // reappears for R_- at 1/q under the flipped variant
    let (_, sd) = dkz2(2.7);
    let q = QParameter::from_kappa(Complex::from(2.7)).unwrap();
    let rep = compare_stokes_to_qgroup(&sd, &q, GaugeMode::DiagonalGauge).unwrap();
    let best_minus = rep.variants_minus.iter().map(|v| v.fit.residual).fold(f64::INFINITY, f64::min);
    assert!((rep.best.fit.residual - best_minus).abs() <= 1e-8);
}
