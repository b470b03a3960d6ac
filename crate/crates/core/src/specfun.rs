//! Complex Gamma, Weber parabolic cylinder functions and the branched power
//! used by the scalar factor and the model problem.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("Gamma pole at z = {0}")]
    GammaPole(Complex64),
    #[error("D_nu outside validated range: nu = {nu}, z = {z}")]
    PcfDomain { nu: Complex64, z: Complex64 },
    #[error("lambda = {0} lies on the branch cut and no side was given")]
    OnCut(Complex64),
    #[error("degenerate cut: endpoints coincide at {0}")]
    DegenerateCut(Complex64),
}

/// Which boundary value to take on an oriented cut. `Plus` is the left side
/// of the segment traversed from its first to its second endpoint (above it,
/// for a real segment traversed left to right).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// ln Γ(z) for Re z ≥ 1/2 (any branch; only its exponential is used).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Complex Gamma function (Lanczos, g = 7, nine terms, reflection for Re z < 1/2).
pub fn cgamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(z) {
        return Err(SpecFunError::GammaPole(z));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn reciprocal_cgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// Largest |nu| accepted by [`pcf_d`].
pub const PCF_NU_MAX: f64 = 5.0;
/// Largest |z| accepted by [`pcf_d`].
pub const PCF_Z_MAX: f64 = 30.0;

// Region radii for the right half-plane evaluator. Inside SMALL the Kummer
// series is used, beyond LARGE the asymptotic series; in between the Weber
// equation is integrated radially by Taylor steps.
const PCF_SMALL: f64 = 3.0;
const PCF_LARGE: f64 = 11.0;
const PCF_STEP: f64 = 0.5;

/// Weber's parabolic cylinder function D_ν(z) for |ν| ≤ 5 and |z| ≤ 30.
pub fn pcf_d(nu: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    check_pcf_range(nu, z)?;
    Ok(pcf_any(nu, z))
}

/// D_ν(z) together with its z-derivative.
pub fn pcf_d_with_derivative(
    nu: Complex64,
    z: Complex64,
) -> Result<(Complex64, Complex64), SpecFunError> {
    check_pcf_range(nu, z)?;
    let d = pcf_any(nu, z);
    let d_next = pcf_any(nu + 1.0, z);
    Ok((d, 0.5 * z * d - d_next))
}

/// Closed form D_ν(0) = 2^{ν/2}√π / Γ((1−ν)/2).
pub fn pcf_d_at_zero(nu: Complex64) -> Complex64 {
    (0.5 * nu * std::f64::consts::LN_2).exp() * PI.sqrt() * reciprocal_cgamma((1.0 - nu) / 2.0)
}

/// Closed form D′_ν(0) = −2^{(ν+1)/2}√π / Γ(−ν/2).
pub fn pcf_d_prime_at_zero(nu: Complex64) -> Complex64 {
    -(0.5 * (nu + 1.0) * std::f64::consts::LN_2).exp() * PI.sqrt() * reciprocal_cgamma(-nu / 2.0)
}

fn check_pcf_range(nu: Complex64, z: Complex64) -> Result<(), SpecFunError> {
    if !(nu.norm() <= PCF_NU_MAX && z.norm() <= PCF_Z_MAX) {
        return Err(SpecFunError::PcfDomain { nu, z });
    }
    Ok(())
}

fn pcf_any(nu: Complex64, z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        return pcf_right(nu, z);
    }
    // Connection formulas bring the argument back into the right half-plane.
    let i = Complex64::i();
    let c = (2.0 * PI).sqrt() * reciprocal_cgamma(-nu);
    if z.im >= 0.0 {
        (i * PI * nu).exp() * pcf_right(nu, -z)
            + c * (i * PI * (nu + 1.0) / 2.0).exp() * pcf_right(-nu - 1.0, -i * z)
    } else {
        (-i * PI * nu).exp() * pcf_right(nu, -z)
            + c * (-i * PI * (nu + 1.0) / 2.0).exp() * pcf_right(-nu - 1.0, i * z)
    }
}

fn pcf_right(nu: Complex64, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r <= PCF_SMALL {
        return pcf_kummer(nu, z);
    }
    if r >= PCF_LARGE {
        return pcf_asymptotic(nu, z);
    }
    let dir = z / r;
    if z.arg().abs() <= PI / 4.0 {
        // D_ν is recessive here: integrate inward from the asymptotic zone.
        let start = dir * PCF_LARGE;
        let (y, dy) = start_pair(nu, start, pcf_asymptotic);
        weber_march(nu, start, y, dy, z).0
    } else {
        let start = dir * PCF_SMALL;
        let (y, dy) = start_pair(nu, start, pcf_kummer);
        weber_march(nu, start, y, dy, z).0
    }
}

fn start_pair(
    nu: Complex64,
    z: Complex64,
    eval: fn(Complex64, Complex64) -> Complex64,
) -> (Complex64, Complex64) {
    let d = eval(nu, z);
    (d, 0.5 * z * d - eval(nu + 1.0, z))
}

/// Kummer M(a, b, w) by its Maclaurin series.
fn kummer_m(a: Complex64, b: Complex64, w: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        term *= (a + k) / (b + k) * w / (k + 1.0);
        sum += term;
        k += 1.0;
        if term.norm() <= 1e-17 * sum.norm() && k > w.norm() {
            break;
        }
        if k > 500.0 || term == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    sum
}

fn pcf_kummer(nu: Complex64, z: Complex64) -> Complex64 {
    let w = z * z / 2.0;
    let even = PI.sqrt() * reciprocal_cgamma((1.0 - nu) / 2.0) * kummer_m(-nu / 2.0, 0.5.into(), w);
    let odd = (2.0 * PI).sqrt()
        * z
        * reciprocal_cgamma(-nu / 2.0)
        * kummer_m((1.0 - nu) / 2.0, 1.5.into(), w);
    (0.5 * nu * std::f64::consts::LN_2 - z * z / 4.0).exp() * (even - odd)
}

fn pcf_asymptotic(nu: Complex64, z: Complex64) -> Complex64 {
    let two_z2 = 2.0 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let k = k as f64;
        let next = -term * (-nu + 2.0 * k) * (-nu + 2.0 * k + 1.0) / ((k + 1.0) * two_z2);
        let size = next.norm();
        if size >= prev {
            break;
        }
        sum += next;
        term = next;
        prev = size;
        if size <= 1e-17 * sum.norm() {
            break;
        }
    }
    (nu * z.ln() - z * z / 4.0).exp() * sum
}

/// Radial Taylor marching of y'' = (z²/4 − ν − 1/2) y from `from` to `to`.
fn weber_march(
    nu: Complex64,
    from: Complex64,
    mut y: Complex64,
    mut dy: Complex64,
    to: Complex64,
) -> (Complex64, Complex64) {
    let a = nu + 0.5;
    let span = to - from;
    let steps = (span.norm() / PCF_STEP).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut z0 = from;
    for _ in 0..steps {
        let p = z0 * z0 / 4.0 - a;
        let q = z0 / 2.0 * h;
        let h2 = h * h;
        // d[n] = c_n h^n for the Taylor coefficients c_n about z0
        let mut d = vec![y, dy * h];
        let mut y_new = d[0] + d[1];
        let mut dy_new = d[1];
        let scale = y.norm() + d[1].norm();
        let mut small = 0;
        for n in 0..400 {
            let prev1 = if n >= 1 { d[n - 1] } else { Complex64::new(0.0, 0.0) };
            let prev2 = if n >= 2 { d[n - 2] } else { Complex64::new(0.0, 0.0) };
            let nn = n as f64;
            let next = h2 * (p * d[n] + q * prev1 + 0.25 * h2 * prev2) / ((nn + 2.0) * (nn + 1.0));
            d.push(next);
            y_new += next;
            dy_new += (nn + 2.0) * next;
            if next.norm() <= 1e-18 * scale {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        y = y_new;
        dy = dy_new / h;
        z0 += h;
    }
    (y, dy)
}

/// Principal logarithm of (λ−λ1)/(λ−λ0), with its cut on the segment
/// [λ0, λ1]. Points on the cut need a side; off the cut the side is ignored.
pub fn log_ratio(
    lambda: Complex64,
    lambda0: Complex64,
    lambda1: Complex64,
    side: Option<Side>,
) -> Result<Complex64, SpecFunError> {
    if lambda0 == lambda1 {
        return Err(SpecFunError::DegenerateCut(lambda0));
    }
    if on_segment(lambda, lambda0, lambda1) {
        let Some(side) = side else {
            return Err(SpecFunError::OnCut(lambda));
        };
        if lambda == lambda0 || lambda == lambda1 {
            return Err(SpecFunError::OnCut(lambda));
        }
        let modulus = ((lambda - lambda1) / (lambda - lambda0)).norm().ln();
        return Ok(Complex64::new(modulus, side.sign() * PI));
    }
    Ok(((lambda - lambda1) / (lambda - lambda0)).ln())
}

/// ((λ−λ1)/(λ−λ0))^p with the cut on [λ0, λ1] and value 1 at infinity.
pub fn branch_power(
    lambda: Complex64,
    lambda0: Complex64,
    lambda1: Complex64,
    p: Complex64,
    side: Option<Side>,
) -> Result<Complex64, SpecFunError> {
    Ok((p * log_ratio(lambda, lambda0, lambda1, side)?).exp())
}

fn on_segment(z: Complex64, a: Complex64, b: Complex64) -> bool {
    let ab = b - a;
    let az = z - a;
    let cross = ab.re * az.im - ab.im * az.re;
    if cross != 0.0 {
        return false;
    }
    let dot = ab.re * az.re + ab.im * az.im;
    dot >= 0.0 && dot <= ab.norm_sqr()
}
