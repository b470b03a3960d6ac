use hirota_core::specfun::{
    branch_power, cgamma, pcf_d, pcf_d_at_zero, pcf_d_prime_at_zero, pcf_d_with_derivative,
    reciprocal_cgamma, Side,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// (nu, z, D_nu(z)) frozen from a 40-digit mpmath evaluation.
const PCF_REFERENCE: [(Complex64, Complex64, Complex64); 18] = [
    (c(0.0, 0.3), c(1.2, 0.5), c(0.6786033816885041, -0.12158220429291754)),
    (c(0.0, -0.2), c(5.0, 1.0), c(-0.0024523037050532127, -0.0007912837738592144)),
    (c(0.1, 0.0), c(7.0, 0.0), c(5.818225093558492e-06, 0.0)),
    (c(0.0, 0.15), c(12.0, 3.0), c(7.147521368386641e-16, 1.997915843011653e-15)),
    (c(0.0, -0.15), c(2.0, 6.0), c(3589.9730076651203, 28.176381669720104)),
    (c(0.0, 0.2), c(-3.0, 2.0), c(-0.3581098979955889, 0.3799075666237933)),
    (c(0.05, -0.1), c(-8.0, -1.0), c(211395.75102733355, -23694.174247224102)),
    (c(1.0, 0.2), c(0.5, -0.5), c(0.7008116214448635, -0.6340430949872152)),
    (c(0.4, 0.3), c(9.5, -4.0), c(1.915951046856567e-08, 1.588389562174109e-08)),
    (c(0.0, -0.1), c(-14.142135623730951, 14.142135623730951), c(0.8402020581419569, -0.9359928560488884)),
    (c(2.5, -1.0), c(3.5, 3.5), c(108.85278838349103, 70.26790719526265)),
    (c(-3.0, 0.5), c(1.5, -7.0), c(-490.67213121873766, -503.60853008325324)),
    (c(0.0, 0.1), c(25.0, 5.0), c(5.575878352251815e-66, 4.289794068692863e-66)),
    (c(0.0, -0.25), c(-15.0, 0.5), c(2.6555110384177814e+22, -1.0902811938974568e+23)),
    (c(4.0, 0.0), c(2.0, 0.0), c(-1.8393972058572117, 0.0)),
    (c(-4.5, 0.2), c(6.0, 0.0), c(2.6772227692031383e-08, 1.0733377767709738e-08)),
    (c(0.0, 0.2), c(0.7071, 0.7071), c(0.885389324386386, -0.20073374029111693)),
    (c(-0.16666666666666666, 0.0), c(7.0710678118654755, -7.0710678118654755), c(0.6812783557608529, -0.0019165616671621563)),
];

#[test]
fn pcf_matches_reference_values() {
    for &(nu, z, expect) in PCF_REFERENCE.iter() {
        let got = pcf_d(nu, z).unwrap();
        let rel = (got - expect).norm() / expect.norm();
        assert!(rel < 1e-10, "nu={nu} z={z}: got {got}, expected {expect}, rel {rel:e}");
    }
}

// Gamma values frozen from mpmath.
#[test]
fn gamma_matches_reference_values() {
    let cases = [
        (c(0.0, 0.5), c(-0.3992794763291927, -1.6033881941394343)),
        (c(3.3, -2.1), c(-0.9070406040662633, -0.9374767645324198)),
        (c(-4.7, 0.3), c(-0.032218025536434915, -0.0001279356159054569)),
        (c(15.0, 12.0), c(-245037413.7645156, 924500503.1909107)),
        (c(0.1, 19.0), c(1.557066647265366e-14, -8.288761142659789e-14)),
        (c(-2.5, -3.5), c(4.7360420609880035e-05, -0.00017085651489988734)),
    ];
    for (z, expect) in cases {
        let got = cgamma(z).unwrap();
        let rel = (got - expect).norm() / expect.norm();
        assert!(rel < 1e-12, "z={z}: rel {rel:e}");
    }
}

#[test]
fn pcf_closed_forms_at_origin() {
    for nu in [c(0.0, 0.1), c(0.0, -0.2), c(0.3, 0.4), c(2.0, 0.0)] {
        let (d, dd) = pcf_d_with_derivative(nu, c(0.0, 0.0)).unwrap();
        assert!((d - pcf_d_at_zero(nu)).norm() < 1e-13 * d.norm().max(1.0));
        assert!((dd - pcf_d_prime_at_zero(nu)).norm() < 1e-13 * dd.norm().max(1.0));
    }
}

fn weber_residual(nu: Complex64, z: Complex64) -> f64 {
    // eighth-order central second difference
    let h = 0.01;
    let coef = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
    let mut second = coef[0] * pcf_d(nu, z).unwrap();
    for (k, &ck) in coef.iter().enumerate().skip(1) {
        let dz = h * k as f64;
        second += ck * (pcf_d(nu, z + dz).unwrap() + pcf_d(nu, z - dz).unwrap());
    }
    second /= h * h;
    let y = pcf_d(nu, z).unwrap();
    let res = second + (nu + 0.5 - z * z / 4.0) * y;
    res.norm() / (y.norm() * (1.0 + (z * z / 4.0).norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3 || z.re.round() > 0.0);
        let g1 = cgamma(z + 1.0).unwrap();
        let g0 = cgamma(z).unwrap();
        prop_assert!((g1 - z * g0).norm() / g1.norm() <= 1e-11);
    }

    #[test]
    fn gamma_reflection(re in -4.9f64..4.9, im in -3.0f64..3.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-2);
        let prod = cgamma(z).unwrap() * cgamma(1.0 - z).unwrap() * (PI * z).sin() / PI;
        prop_assert!((prod - 1.0).norm() <= 1e-10);
    }

    #[test]
    fn reciprocal_gamma_consistent(re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        prop_assert!((reciprocal_cgamma(z) * cgamma(z).unwrap() - 1.0).norm() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn weber_equation_residual(
        nu_re in -1.0f64..1.0, nu_im in -0.5f64..0.5,
        r in 0.0f64..12.0, phi in -PI..PI,
    ) {
        let nu = c(nu_re, nu_im);
        let z = Complex64::from_polar(r, phi);
        prop_assert!(weber_residual(nu, z) <= 1e-8);
    }

    #[test]
    fn branch_side_limits(s in -0.999f64..0.999, p_re in -1.0f64..1.0, p_im in -1.0f64..1.0) {
        let p = c(p_re, p_im);
        let (a, b) = (c(-1.0, 0.0), c(1.0, 0.0));
        let up = branch_power(c(s, 0.0), a, b, p, Some(Side::Plus)).unwrap();
        let down = branch_power(c(s, 0.0), a, b, p, Some(Side::Minus)).unwrap();
        let expect = (2.0 * PI * Complex64::i() * p).exp();
        prop_assert!((up / down - expect).norm() <= 1e-9 * expect.norm().max(1.0));
    }
}

#[test]
fn branch_side_ratio_example() {
    let p = c(0.0, 1.0);
    let (a, b) = (c(-1.0, 0.0), c(1.0, 0.0));
    let up = branch_power(c(0.5, 1e-8), a, b, p, None).unwrap();
    let down = branch_power(c(0.5, -1e-8), a, b, p, None).unwrap();
    let expect = (-2.0 * PI).exp();
    assert!((up / down - expect).norm() < 1e-9);
}
